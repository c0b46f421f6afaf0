/**
 * Ray realizations of a hypergraph: orthogonality and completeness
 * validation, basis completion, and the ideal quantum value of A.
 *
 * Two numeric backends. ExactRay keeps complex amplitudes with rational
 * parts and tracks the squared norm instead of normalizing, so every check
 * is radical-free and exact. FloatRay normalizes at construction and
 * compares within a tolerance. The same free functions work on both.
 */

#ifndef KSINEQ_QUANTUM_HPP
#define KSINEQ_QUANTUM_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ksineq/hypergraph.hpp"
#include "ksineq/polytope.hpp"
#include "ksineq/rational.hpp"

namespace ksineq {

struct GaussianRational {
  Rational re{0};
  Rational im{0};

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {Rational(a.re + b.re), Rational(a.im + b.im)};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {Rational(a.re - b.re), Rational(a.im - b.im)};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {Rational(a.re * b.re - a.im * b.im), Rational(a.re * b.im + a.im * b.re)};
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  GaussianRational conj() const { return {re, Rational(-im)}; }
  Rational abs2() const { return re * re + im * im; }
  bool is_zero() const { return re == 0 && im == 0; }
};

/// Unnormalized amplitudes plus the squared norm; the semantic ray is amplitudes / sqrt(norm2).
struct ExactRay {
  std::vector<GaussianRational> amplitudes;
  Rational norm2{0};

  ExactRay() = default;
  explicit ExactRay(std::vector<GaussianRational> amps) : amplitudes(std::move(amps)) {
    for (const GaussianRational& a : amplitudes) norm2 += a.abs2();
    if (norm2 == 0) throw std::invalid_argument("ray must be a nonzero vector");
  }
  std::size_t dimension() const { return amplitudes.size(); }
};

/// Unit-norm complex amplitudes in double precision.
struct FloatRay {
  std::vector<std::complex<double>> amplitudes;

  FloatRay() = default;
  explicit FloatRay(std::vector<std::complex<double>> amps) : amplitudes(std::move(amps)) {
    double n2 = 0;
    for (const auto& a : amplitudes) n2 += std::norm(a);
    if (n2 < 1e-24) throw std::invalid_argument("ray must be a nonzero vector");
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amplitudes) a *= inv;
  }
  std::size_t dimension() const { return amplitudes.size(); }
};

inline GaussianRational inner(const ExactRay& a, const ExactRay& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("ray dimension mismatch");
  GaussianRational acc;
  for (std::size_t i = 0; i < a.amplitudes.size(); ++i) {
    acc = acc + a.amplitudes[i].conj() * b.amplitudes[i];
  }
  return acc;
}

inline std::complex<double> inner(const FloatRay& a, const FloatRay& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("ray dimension mismatch");
  std::complex<double> acc = 0;
  for (std::size_t i = 0; i < a.amplitudes.size(); ++i) {
    acc += std::conj(a.amplitudes[i]) * b.amplitudes[i];
  }
  return acc;
}

/// |<effect|state>|^2 for unit-normalized rays; exact for the rational backend.
inline Rational born_probability(const ExactRay& state, const ExactRay& effect) {
  return inner(effect, state).abs2() / (state.norm2 * effect.norm2);
}

inline double born_probability(const FloatRay& state, const FloatRay& effect) {
  return std::norm(inner(effect, state));
}

template <typename RayT>
struct RayRealization {
  int dimension = 0;
  std::vector<RayT> node_rays;  // index kappa-1
  // When built from per-event input, the raw (event, ray) pairs are kept so
  // the operational-equivalence requirement can be audited.
  std::vector<std::pair<MeasurementEvent, RayT>> event_rays;
};

using ExactRealization = RayRealization<ExactRay>;
using FloatRealization = RayRealization<FloatRay>;

struct ValidationIssue {
  std::string subject;
  double deviation = 0;
};

struct ValidationReport {
  std::vector<ValidationIssue> orthogonality_failures;
  std::vector<ValidationIssue> completeness_failures;
  std::vector<ValidationIssue> equivalence_failures;

  bool ok() const {
    return orthogonality_failures.empty() && completeness_failures.empty() &&
           equivalence_failures.empty();
  }
};

namespace detail {

inline double overlap_magnitude(const ExactRay& a, const ExactRay& b) {
  return std::sqrt(to_double(born_probability(a, b)));
}
inline double overlap_magnitude(const FloatRay& a, const FloatRay& b) {
  return std::abs(inner(a, b));
}

inline double norm_deviation(const ExactRay& r) {
  Rational n2 = 0;
  for (const GaussianRational& a : r.amplitudes) n2 += a.abs2();
  return n2 == r.norm2 && n2 != 0 ? 0.0 : 1.0;  // stored squared norm must match the amplitudes
}
inline double norm_deviation(const FloatRay& r) {
  double n2 = 0;
  for (const auto& a : r.amplitudes) n2 += std::norm(a);
  return std::abs(std::sqrt(n2) - 1.0);
}

}  // namespace detail

/**
 * Check a realization against the hypergraph: pairwise orthogonality inside
 * every context, context size equal to the Hilbert dimension, sound norms,
 * and (when per-event rays are available) one shared ray per node.
 *
 * `tol` applies to the float backend; the exact backend demands equality.
 */
template <typename RayT>
ValidationReport validate_realization(const KSHypergraph& h, const RayRealization<RayT>& r,
                                      double tol = 1e-10) {
  if (static_cast<int>(r.node_rays.size()) != h.node_count) {
    throw std::invalid_argument("realization must provide a ray for every node");
  }
  for (const RayT& ray : r.node_rays) {
    if (static_cast<int>(ray.dimension()) != r.dimension) {
      throw std::invalid_argument("ray dimension differs from the declared dimension");
    }
  }

  ValidationReport report;
  for (std::size_t i = 0; i < h.contexts.size(); ++i) {
    const auto& ctx = h.contexts[i];
    if (static_cast<int>(ctx.size()) != r.dimension) {
      report.completeness_failures.push_back(
          {"context " + std::to_string(i + 1) + " has " + std::to_string(ctx.size()) +
               " outcomes but dimension is " + std::to_string(r.dimension),
           std::abs(static_cast<double>(ctx.size()) - r.dimension)});
    }
    for (std::size_t a = 0; a < ctx.size(); ++a) {
      for (std::size_t b = a + 1; b < ctx.size(); ++b) {
        const double dev = detail::overlap_magnitude(r.node_rays[static_cast<std::size_t>(ctx[a] - 1)],
                                                     r.node_rays[static_cast<std::size_t>(ctx[b] - 1)]);
        if (dev > tol) {
          report.orthogonality_failures.push_back(
              {"context " + std::to_string(i + 1) + ": nodes " + std::to_string(ctx[a]) + " and " +
                   std::to_string(ctx[b]),
               dev});
        }
      }
    }
  }
  for (int node = 1; node <= h.node_count; ++node) {
    const double dev = detail::norm_deviation(r.node_rays[static_cast<std::size_t>(node - 1)]);
    if (dev > tol) {
      report.completeness_failures.push_back({"node " + std::to_string(node) + " norm", dev});
    }
  }
  if (!r.event_rays.empty()) {
    for (const auto& [event, ray] : r.event_rays) {
      const int node = h.contexts[static_cast<std::size_t>(event.measurement_index - 1)]
                                 [static_cast<std::size_t>(event.outcome_index - 1)];
      const double overlap = detail::overlap_magnitude(ray, r.node_rays[static_cast<std::size_t>(node - 1)]);
      if (std::abs(overlap - 1.0) > tol) {
        report.equivalence_failures.push_back(
            {"event " + to_string(event) + " does not share the ray of node " + std::to_string(node),
             std::abs(overlap - 1.0)});
      }
    }
  }
  return report;
}

/**
 * Complete a mutually orthogonal family to an orthogonal basis of dimension
 * d. Candidates are the standard basis vectors; each step projects them on
 * the orthogonal complement of the family built so far and keeps the one
 * with the largest residual norm (ties broken by lowest index). Only the
 * added rays are returned.
 */
inline std::vector<ExactRay> complete_basis(const std::vector<ExactRay>& rays, int d) {
  if (static_cast<int>(rays.size()) > d) throw std::invalid_argument("more rays than the dimension admits");
  for (std::size_t a = 0; a < rays.size(); ++a) {
    if (static_cast<int>(rays[a].dimension()) != d) throw std::invalid_argument("ray dimension mismatch");
    for (std::size_t b = a + 1; b < rays.size(); ++b) {
      if (!inner(rays[a], rays[b]).is_zero()) throw std::invalid_argument("input rays are not orthogonal");
    }
  }
  std::vector<ExactRay> family = rays;
  std::vector<ExactRay> added;
  while (static_cast<int>(family.size()) < d) {
    std::vector<GaussianRational> best;
    Rational best_norm2 = 0;
    for (int cand = 0; cand < d; ++cand) {
      std::vector<GaussianRational> res(static_cast<std::size_t>(d));
      res[static_cast<std::size_t>(cand)] = {Rational(1), Rational(0)};
      for (const ExactRay& f : family) {
        GaussianRational coef;  // <f|res>
        for (std::size_t i = 0; i < res.size(); ++i) {
          coef = coef + f.amplitudes[i].conj() * res[i];
        }
        const GaussianRational scaled{Rational(coef.re / f.norm2), Rational(coef.im / f.norm2)};
        for (std::size_t i = 0; i < res.size(); ++i) {
          res[i] = res[i] - scaled * f.amplitudes[i];
        }
      }
      Rational n2 = 0;
      for (const GaussianRational& a : res) n2 += a.abs2();
      if (n2 > best_norm2) {
        best_norm2 = n2;
        best = std::move(res);
      }
    }
    if (best_norm2 == 0) throw std::logic_error("orthogonal complement exhausted early");
    const ExactRay next(std::move(best));
    family.push_back(next);
    added.push_back(next);
  }
  return added;
}

inline std::vector<FloatRay> complete_basis(const std::vector<FloatRay>& rays, int d,
                                            double tol = 1e-10) {
  if (static_cast<int>(rays.size()) > d) throw std::invalid_argument("more rays than the dimension admits");
  for (std::size_t a = 0; a < rays.size(); ++a) {
    if (static_cast<int>(rays[a].dimension()) != d) throw std::invalid_argument("ray dimension mismatch");
    for (std::size_t b = a + 1; b < rays.size(); ++b) {
      if (std::abs(inner(rays[a], rays[b])) > tol) {
        throw std::invalid_argument("input rays are not orthogonal");
      }
    }
  }
  std::vector<FloatRay> family = rays;
  std::vector<FloatRay> added;
  while (static_cast<int>(family.size()) < d) {
    std::vector<std::complex<double>> best;
    double best_norm2 = -1;
    for (int cand = 0; cand < d; ++cand) {
      std::vector<std::complex<double>> res(static_cast<std::size_t>(d), 0.0);
      res[static_cast<std::size_t>(cand)] = 1.0;
      for (const FloatRay& f : family) {
        std::complex<double> coef = 0;
        for (std::size_t i = 0; i < res.size(); ++i) coef += std::conj(f.amplitudes[i]) * res[i];
        for (std::size_t i = 0; i < res.size(); ++i) res[i] -= coef * f.amplitudes[i];
      }
      double n2 = 0;
      for (const auto& a : res) n2 += std::norm(a);
      if (n2 > best_norm2) {
        best_norm2 = n2;
        best = std::move(res);
      }
    }
    if (best_norm2 <= tol * tol) throw std::logic_error("orthogonal complement exhausted early");
    family.emplace_back(best);
    added.push_back(family.back());
  }
  return added;
}

class InvalidRealizationError : public std::runtime_error {
 public:
  explicit InvalidRealizationError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline Rational born_scalar(const ExactRay& state, const ExactRay& effect) {
  return born_probability(state, effect);
}
inline double born_scalar(const FloatRay& state, const FloatRay& effect) {
  return born_probability(state, effect);
}

}  // namespace detail

/**
 * The ideal quantum value of A: prepare the eigenstate of each event and
 * measure its own context, i.e. statistics p(k|M_i, P_{i,k}) given by the
 * Born rule on the realization's rays. Exact backend returns 1 exactly for
 * any valid realization.
 */
template <typename RayT>
auto ideal_quantum_A(const KSHypergraph& h, const RayRealization<RayT>& r, double tol = 1e-10) {
  const ValidationReport report = validate_realization(h, r, tol);
  if (!report.ok()) {
    throw InvalidRealizationError("realization fails validation; run validate_realization for details");
  }
  using Scalar = decltype(detail::born_scalar(r.node_rays.front(), r.node_rays.front()));
  std::vector<std::vector<Scalar>> statistics;
  statistics.reserve(h.contexts.size());
  for (const auto& ctx : h.contexts) {
    std::vector<Scalar> row;
    row.reserve(ctx.size());
    for (const int node : ctx) {
      const RayT& ray = r.node_rays[static_cast<std::size_t>(node - 1)];
      row.push_back(detail::born_scalar(ray, ray));
    }
    statistics.push_back(std::move(row));
  }
  return evaluate_A(h, statistics);
}

}  // namespace ksineq

#endif  // KSINEQ_QUANTUM_HPP
