/**
 * The polytope of probabilistic noncontextual assignments
 *
 *   P = { w in [0,1]^n : Z w = u },   u = all-ones over contexts,
 *
 * vertex enumeration over it, and the noncontextual bound: the maximum over
 * P of the context-averaged per-context maximum of w. The objective is
 * convex, so the maximum over vertices equals the maximum over P.
 *
 * Vertices are found by an incremental double description pass: the
 * equality system is reduced to an affine parameterization w = w0 + N t,
 * the box facets become halfspaces of the homogenized (t0, t) cone, and
 * rays with t0 > 0 correspond to vertices. All arithmetic is rational.
 */

#ifndef KSINEQ_POLYTOPE_HPP
#define KSINEQ_POLYTOPE_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ksineq/colorability.hpp"
#include "ksineq/hypergraph.hpp"
#include "ksineq/linalg.hpp"
#include "ksineq/simplex.hpp"

namespace ksineq {

struct Assignment {
  RationalVector w;  // one entry per node, index kappa-1
};

struct VertexSet {
  std::vector<Assignment> vertices;  // pairwise distinct, lexicographically ascending
  bool complete = false;             // true once enumeration provably exhausted the polytope
};

struct BoundReport {
  Rational bound;
  Assignment witness;                    // lexicographically smallest maximizer
  std::vector<Rational> per_context_max;  // witness maxima, context order
};

class EmptyPolytopeError : public std::runtime_error {
 public:
  explicit EmptyPolytopeError(const std::string& what) : std::runtime_error(what) {}
};

inline bool lex_less(const RationalVector& a, const RationalVector& b) {
  for (Eigen::Index i = 0; i < a.size() && i < b.size(); ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return a.size() < b.size();
}

/// Exact membership test: Zw = u and 0 <= w <= 1.
inline bool satisfies_polytope(const KSHypergraph& h, const RationalVector& w) {
  if (w.size() != h.node_count) return false;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    if (w(j) < 0 || w(j) > 1) return false;
  }
  for (const auto& ctx : h.contexts) {
    Rational sum = 0;
    for (const int node : ctx) sum += w(node - 1);
    if (sum != 1) return false;
  }
  return true;
}

/// The objective: (1/|contexts|) sum_i max_{kappa in context i} w_kappa.
inline Rational context_average_max(const KSHypergraph& h, const RationalVector& w) {
  Rational sum = 0;
  for (const auto& ctx : h.contexts) {
    Rational mx = w(ctx.front() - 1);
    for (const int node : ctx) {
      if (w(node - 1) > mx) mx = w(node - 1);
    }
    sum += mx;
  }
  return sum / Rational(static_cast<int>(h.contexts.size()));
}

namespace detail {

/// Scale a rational vector to the primitive integer vector with the same direction.
inline void normalize_ray(RationalVector& x) {
  BigInt lcm_den = 1;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) != 0) lcm_den = lcm(lcm_den, BigInt(denominator(x(i))));
  }
  BigInt gcd_num = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) != 0) gcd_num = gcd(gcd_num, BigInt(numerator(x(i)) * (lcm_den / denominator(x(i)))));
  }
  if (gcd_num == 0) return;
  const Rational scale(lcm_den, gcd_num);  // positive: direction preserved
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) *= scale;
}

using ZeroMask = std::vector<std::uint64_t>;

inline void set_bit(ZeroMask& m, int bit) {
  m[static_cast<std::size_t>(bit >> 6)] |= std::uint64_t{1} << (bit & 63);
}

/// (a AND b) subset of c, wordwise.
inline bool intersection_within(const ZeroMask& a, const ZeroMask& b, const ZeroMask& c) {
  for (std::size_t w = 0; w < a.size(); ++w) {
    if (((a[w] & b[w]) & ~c[w]) != 0) return false;
  }
  return true;
}

struct DDRay {
  RationalVector x;
  ZeroMask zero;  // bit c set: inserted halfspace c is tight on this ray
};

/**
 * Incremental double description over a full space, halfspace by halfspace.
 * The cone is cone(rays) + span(lineality); lineality vectors stay
 * orthogonal to every inserted halfspace, which keeps the combinatorial
 * adjacency test valid in the pointed quotient.
 */
class DoubleDescription {
 public:
  DoubleDescription(int dimension, int max_halfspaces)
      : words_((max_halfspaces + 63) / 64), inserted_(0) {
    for (int i = 0; i < dimension; ++i) {
      RationalVector e = RationalVector::Zero(dimension);
      e(i) = 1;
      lineality_.push_back(std::move(e));
    }
  }

  void insert(const RationalVector& normal) {
    // Lineality pivot: trade one free direction for a ray on the new facet.
    for (std::size_t li = 0; li < lineality_.size(); ++li) {
      Rational s = normal.dot(lineality_[li]);
      if (s == 0) continue;
      RationalVector pivot = lineality_[li];
      if (s < 0) {
        pivot = -pivot;
        s = -s;
      }
      std::vector<RationalVector> rest;
      for (std::size_t lj = 0; lj < lineality_.size(); ++lj) {
        if (lj == li) continue;
        const Rational sj = normal.dot(lineality_[lj]);
        RationalVector l = lineality_[lj];
        if (sj != 0) l -= (sj / s) * pivot;
        normalize_ray(l);
        rest.push_back(std::move(l));
      }
      lineality_ = std::move(rest);
      for (DDRay& r : rays_) {
        const Rational sr = normal.dot(r.x);
        if (sr != 0) {
          r.x -= (sr / s) * pivot;
          normalize_ray(r.x);
        }
        set_bit(r.zero, inserted_);  // projected rays land on the facet
      }
      DDRay fresh;
      fresh.x = pivot;
      normalize_ray(fresh.x);
      fresh.zero.assign(words_, 0);
      for (int c = 0; c < inserted_; ++c) set_bit(fresh.zero, c);  // lineality was orthogonal throughout
      rays_.push_back(std::move(fresh));
      ++inserted_;
      return;
    }

    std::vector<Rational> side(rays_.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < rays_.size(); ++i) {
      side[i] = normal.dot(rays_[i].x);
      if (side[i] > 0) {
        pos.push_back(i);
      } else if (side[i] < 0) {
        neg.push_back(i);
      } else {
        set_bit(rays_[i].zero, inserted_);
      }
    }
    std::vector<DDRay> born;
    for (const std::size_t p : pos) {
      for (const std::size_t q : neg) {
        if (!adjacent(p, q)) continue;
        DDRay combo;
        combo.x = side[p] * rays_[q].x - side[q] * rays_[p].x;  // conic: side[p] > 0, -side[q] > 0
        normalize_ray(combo.x);
        combo.zero.assign(words_, 0);
        for (std::size_t w = 0; w < combo.zero.size(); ++w) {
          combo.zero[w] = rays_[p].zero[w] & rays_[q].zero[w];
        }
        set_bit(combo.zero, inserted_);
        born.push_back(std::move(combo));
      }
    }
    std::vector<DDRay> keep;
    keep.reserve(rays_.size() - neg.size() + born.size());
    for (std::size_t i = 0; i < rays_.size(); ++i) {
      if (side[i] >= 0) keep.push_back(std::move(rays_[i]));
    }
    for (DDRay& r : born) keep.push_back(std::move(r));
    rays_ = std::move(keep);
    ++inserted_;
  }

  const std::vector<DDRay>& rays() const { return rays_; }
  const std::vector<RationalVector>& lineality() const { return lineality_; }

 private:
  // Combinatorial test: p, q adjacent iff no third ray is tight on every
  // halfspace tight on both.
  bool adjacent(std::size_t p, std::size_t q) const {
    for (std::size_t i = 0; i < rays_.size(); ++i) {
      if (i == p || i == q) continue;
      if (intersection_within(rays_[p].zero, rays_[q].zero, rays_[i].zero)) return false;
    }
    return true;
  }

  std::size_t words_;
  int inserted_;
  std::vector<RationalVector> lineality_;
  std::vector<DDRay> rays_;
};

}  // namespace detail

/**
 * All vertices of P, exactly, in ascending lexicographic order.
 * An empty polytope yields an empty, complete vertex set.
 */
inline VertexSet enumerate_vertices(const KSHypergraph& h) {
  const std::vector<std::string> violations = validate(h);
  if (!violations.empty()) throw std::invalid_argument("invalid hypergraph: " + violations.front());

  const Eigen::Index n = h.node_count;
  const RationalMatrix z = incidence_matrix(h).cast<Rational>();
  const RationalVector u = RationalVector::Constant(static_cast<Eigen::Index>(h.contexts.size()), Rational(1));
  const AffineSolution sol = solve_affine(z, u);
  if (!sol.consistent) return VertexSet{{}, true};

  const Eigen::Index k = sol.basis.cols();
  const int dim = static_cast<int>(k) + 1;  // homogeneous coordinate t0 first
  detail::DoubleDescription dd(dim, 1 + 2 * static_cast<int>(n));

  RationalVector t0_axis = RationalVector::Zero(dim);
  t0_axis(0) = 1;
  dd.insert(t0_axis);
  for (Eigen::Index j = 0; j < n; ++j) {
    RationalVector lower = RationalVector::Zero(dim);  // w_j >= 0
    lower(0) = sol.particular(j);
    for (Eigen::Index i = 0; i < k; ++i) lower(i + 1) = sol.basis(j, i);
    dd.insert(lower);
    RationalVector upper = RationalVector::Zero(dim);  // w_j <= 1
    upper(0) = Rational(1) - sol.particular(j);
    for (Eigen::Index i = 0; i < k; ++i) upper(i + 1) = -sol.basis(j, i);
    dd.insert(upper);
  }

  if (!dd.lineality().empty()) throw std::logic_error("free direction survived a bounded polytope");
  VertexSet out;
  out.vertices.reserve(dd.rays().size());
  for (const detail::DDRay& r : dd.rays()) {
    if (r.x(0) == 0) throw std::logic_error("recession direction in a bounded polytope");
    RationalVector t(k);
    for (Eigen::Index i = 0; i < k; ++i) t(i) = r.x(i + 1) / r.x(0);
    out.vertices.push_back(Assignment{sol.particular + sol.basis * t});
  }
  std::sort(out.vertices.begin(), out.vertices.end(),
            [](const Assignment& a, const Assignment& b) { return lex_less(a.w, b.w); });
  out.complete = true;
  return out;
}

/**
 * Maximum of the context-averaged max over P, with the lexicographically
 * smallest maximizing vertex as witness. Throws EmptyPolytopeError when P
 * has no points. The two-argument form reuses an enumerated vertex set.
 */
inline BoundReport noncontextual_bound(const KSHypergraph& h, const VertexSet& vs) {
  if (vs.vertices.empty()) {
    throw EmptyPolytopeError("no probabilistic noncontextual assignments exist for this hypergraph");
  }
  BoundReport report;
  bool first = true;
  for (const Assignment& v : vs.vertices) {  // ascending: first maximizer is lex-min
    const Rational value = context_average_max(h, v.w);
    if (first || value > report.bound) {
      report.bound = value;
      report.witness = v;
      first = false;
    }
  }
  for (const auto& ctx : h.contexts) {
    Rational mx = report.witness.w(ctx.front() - 1);
    for (const int node : ctx) {
      if (report.witness.w(node - 1) > mx) mx = report.witness.w(node - 1);
    }
    report.per_context_max.push_back(mx);
  }
  return report;
}

inline BoundReport noncontextual_bound(const KSHypergraph& h) {
  return noncontextual_bound(h, enumerate_vertices(h));
}

/**
 * Independent route to the bound: for every way of distinguishing one node
 * per context, maximize the summed weight of the distinguished nodes over P
 * by exact LP, then average the best selection. Equals the vertex route on
 * every hypergraph.
 */
inline Rational bound_by_selection_oracle(const KSHypergraph& h,
                                          std::int64_t selection_limit = 1'000'000) {
  const std::vector<std::string> violations = validate(h);
  if (!violations.empty()) throw std::invalid_argument("invalid hypergraph: " + violations.front());
  std::int64_t selections = 1;
  for (const auto& ctx : h.contexts) {
    selections *= static_cast<std::int64_t>(ctx.size());
    if (selections > selection_limit) {
      throw std::invalid_argument("selection count exceeds the limit of " + std::to_string(selection_limit));
    }
  }

  const RationalMatrix z = incidence_matrix(h).cast<Rational>();
  const RationalVector u = RationalVector::Constant(static_cast<Eigen::Index>(h.contexts.size()), Rational(1));
  BoundedSimplex lp(z, u);
  if (!lp.feasible()) {
    throw EmptyPolytopeError("no probabilistic noncontextual assignments exist for this hypergraph");
  }

  const std::size_t m = h.contexts.size();
  std::vector<std::size_t> pick(m, 0);
  RationalVector c(h.node_count);
  Rational best = 0;
  bool first = true;
  while (true) {
    c.setZero();
    for (std::size_t i = 0; i < m; ++i) {
      c(h.contexts[i][pick[i]] - 1) += 1;  // a node may be selected by both of its contexts
    }
    const Rational value = lp.maximize(c);
    if (first || value > best) {
      best = value;
      first = false;
    }
    std::size_t i = 0;
    while (i < m && ++pick[i] == h.contexts[i].size()) {
      pick[i] = 0;
      ++i;
    }
    if (i == m) break;
  }
  return best / Rational(static_cast<int>(m));
}

/**
 * The average source-measurement correlation A: the mean of the supplied
 * per-event probabilities p(k | M_i, P_{i,k}), one entry per (context,
 * outcome). Works for exact and floating statistics alike.
 */
template <typename Scalar>
Scalar evaluate_A(const KSHypergraph& h, const std::vector<std::vector<Scalar>>& statistics) {
  if (statistics.size() != h.contexts.size()) {
    throw std::invalid_argument("statistics rows do not match context count");
  }
  Scalar sum{0};
  int entries = 0;
  for (std::size_t i = 0; i < statistics.size(); ++i) {
    if (statistics[i].size() != h.contexts[i].size()) {
      throw std::invalid_argument("statistics row " + std::to_string(i + 1) + " does not match context size");
    }
    for (const Scalar& p : statistics[i]) {
      if (p < Scalar{0} || p > Scalar{1}) {
        throw std::invalid_argument("probability outside [0,1] in statistics row " + std::to_string(i + 1));
      }
      sum += p;
      ++entries;
    }
  }
  return sum / Scalar(entries);
}

}  // namespace ksineq

#endif  // KSINEQ_POLYTOPE_HPP
