/**
 * The parity-based rival functionals over deterministic assignments:
 *
 *   alpha' = sum over contexts of XOR of the assigned bits,
 *   alpha  = 2 alpha' - (number of contexts),
 *
 * their maxima over all {0,1} assignments, the operational identity that
 * every normalized outcome distribution yields alpha' equal to the term
 * count, and the five-outcome context extensions (one fresh node per
 * context, optionally merged into a single shared node).
 */

#ifndef KSINEQ_CABELLO_HPP
#define KSINEQ_CABELLO_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ksineq/colorability.hpp"
#include "ksineq/hypergraph.hpp"
#include "ksineq/rational.hpp"

namespace ksineq {

struct ParityFunctional {
  std::vector<std::vector<int>> terms;  // node ids of one context each

  static ParityFunctional from_hypergraph(const KSHypergraph& h) {
    return ParityFunctional{h.contexts};
  }
};

/// Sum over terms of the XOR of the assigned bits.
inline int alpha_prime(const DeterministicAssignment& assignment, const ParityFunctional& f) {
  int total = 0;
  for (const auto& term : f.terms) {
    int parity = 0;
    for (const int node : term) {
      if (node < 1 || node > static_cast<int>(assignment.values.size())) {
        throw std::invalid_argument("assignment length does not match the functional");
      }
      parity ^= assignment.values[static_cast<std::size_t>(node - 1)] & 1;
    }
    total += parity;
  }
  return total;
}

/// The +/-1-variable form: alpha = 2 alpha' - (number of terms).
inline int alpha(const DeterministicAssignment& assignment, const ParityFunctional& f) {
  return 2 * alpha_prime(assignment, f) - static_cast<int>(f.terms.size());
}

/**
 * Operational value of alpha' for per-context outcome statistics: each term
 * contributes the probability-weighted parity of the one-hot outcome
 * indicators. Computed literally, term by term; every normalized
 * distribution makes each term 1, so the result equals the term count no
 * matter how noisy the statistics are.
 */
inline Rational alpha_prime_operational(const ParityFunctional& f,
                                        const std::vector<std::vector<Rational>>& statistics) {
  if (statistics.size() != f.terms.size()) {
    throw std::invalid_argument("statistics rows do not match the term count");
  }
  Rational total = 0;
  for (std::size_t i = 0; i < f.terms.size(); ++i) {
    const std::size_t m = f.terms[i].size();
    if (statistics[i].size() != m) {
      throw std::invalid_argument("statistics row " + std::to_string(i + 1) + " does not match its context");
    }
    Rational mass = 0;
    Rational term = 0;
    for (std::size_t k = 0; k < m; ++k) {
      const Rational& prob = statistics[i][k];
      if (prob < 0) throw std::invalid_argument("negative probability in row " + std::to_string(i + 1));
      mass += prob;
      int parity = 0;
      for (std::size_t pos = 0; pos < m; ++pos) {  // outcome k one-hot over the term's nodes
        parity ^= pos == k ? 1 : 0;
      }
      term += prob * parity;
    }
    if (mass != 1) {
      throw std::invalid_argument("distribution of context " + std::to_string(i + 1) + " is not normalized");
    }
    total += term;
  }
  return total;
}

struct ParityScan {
  int max_alpha_prime = 0;
  int max_alpha = 0;
  std::int64_t maximizer_count = 0;             // assignments attaining max_alpha_prime
  std::int64_t normalized_maximizer_count = 0;  // maximizers that are EXACTLY_ONE normalized
};

/// Exhaustive maxima of alpha' and alpha over all 2^n assignments.
inline ParityScan scan_assignments(const KSHypergraph& h, const ParityFunctional& f,
                                   int unrestricted_limit = kDefaultUnrestrictedLimit) {
  ParityScan scan;
  scan.max_alpha_prime = -1;
  bool first = true;
  for_each_assignment(
      h, NormalizationMode::UNRESTRICTED,
      [&](const std::vector<int>& values) {
        const DeterministicAssignment a{values};
        const int ap = alpha_prime(a, f);
        if (first || ap > scan.max_alpha_prime) {
          scan.max_alpha_prime = ap;
          scan.maximizer_count = 0;
          scan.normalized_maximizer_count = 0;
          first = false;
        }
        if (ap == scan.max_alpha_prime) {
          ++scan.maximizer_count;
          bool normalized = true;
          for (const auto& ctx : h.contexts) {
            int ones = 0;
            for (const int node : ctx) ones += values[static_cast<std::size_t>(node - 1)];
            if (ones != 1) {
              normalized = false;
              break;
            }
          }
          if (normalized) ++scan.normalized_maximizer_count;
        }
        return true;
      },
      unrestricted_limit);
  scan.max_alpha = 2 * scan.max_alpha_prime - static_cast<int>(f.terms.size());
  return scan;
}

struct ExtendedHypergraph {
  KSHypergraph base;
  KSHypergraph extended;
  std::vector<int> extra_nodes;  // appended node id per context (all equal when merged)
  bool merged = false;
};

/**
 * Append a fresh outcome to every context. merged=false introduces one new
 * node per context; merged=true makes all the new outcomes one shared node.
 * Base node ids are preserved; extras take the next ids.
 */
inline ExtendedHypergraph extend_hypergraph(const KSHypergraph& h, bool merged) {
  ExtendedHypergraph out;
  out.base = h;
  out.extended = h;
  out.merged = merged;
  const bool labelled = !h.node_labels.empty();
  if (merged) {
    const int extra = h.node_count + 1;
    out.extended.node_count = extra;
    EquivalenceClass cls{extra, {}};
    for (std::size_t i = 0; i < out.extended.contexts.size(); ++i) {
      out.extended.contexts[i].push_back(extra);
      out.extra_nodes.push_back(extra);
      cls.members.push_back({static_cast<int>(i) + 1, static_cast<int>(out.extended.contexts[i].size())});
    }
    if (labelled) out.extended.node_labels.push_back(std::move(cls));
  } else {
    for (std::size_t i = 0; i < out.extended.contexts.size(); ++i) {
      const int extra = ++out.extended.node_count;
      out.extended.contexts[i].push_back(extra);
      out.extra_nodes.push_back(extra);
      if (labelled) {
        out.extended.node_labels.push_back(
            {extra, {{static_cast<int>(i) + 1, static_cast<int>(out.extended.contexts[i].size())}}});
      }
    }
  }
  return out;
}

struct ExtensionAnalysis {
  std::int64_t exactly_one_count = 0;
  std::vector<DeterministicAssignment> assignments;  // ascending lexicographic
  // For the unmerged extension: whether padding every subnormalized base
  // assignment with per-context deficit bits is a bijection onto the above.
  std::optional<bool> unmerged_lift_bijection;
};

/**
 * Enumerate the EXACTLY_ONE assignments of an extension. For merged=false
 * also verify the lifting claim: base assignments with at most one 1 per
 * context correspond one-to-one to normalized assignments of the extension.
 */
inline ExtensionAnalysis analyze_extension(const ExtendedHypergraph& e, int node_limit = 40) {
  if (e.extended.node_count > node_limit) {
    throw std::invalid_argument("extension enumeration over " + std::to_string(e.extended.node_count) +
                                " nodes exceeds the limit of " + std::to_string(node_limit));
  }
  ExtensionAnalysis analysis;
  for_each_assignment(e.extended, NormalizationMode::EXACTLY_ONE, [&](const std::vector<int>& values) {
    analysis.assignments.push_back(DeterministicAssignment{values});
    ++analysis.exactly_one_count;
    return true;
  });

  if (!e.merged) {
    std::vector<DeterministicAssignment> lifted;
    for_each_assignment(e.base, NormalizationMode::AT_MOST_ONE, [&](const std::vector<int>& values) {
      std::vector<int> full(values);
      full.resize(static_cast<std::size_t>(e.extended.node_count), 0);
      for (std::size_t i = 0; i < e.base.contexts.size(); ++i) {
        int ones = 0;
        for (const int node : e.base.contexts[i]) ones += values[static_cast<std::size_t>(node - 1)];
        full[static_cast<std::size_t>(e.extra_nodes[i] - 1)] = 1 - ones;  // deficit of context i
      }
      lifted.push_back(DeterministicAssignment{std::move(full)});
      return true;
    });
    std::sort(lifted.begin(), lifted.end());
    analysis.unmerged_lift_bijection = lifted == analysis.assignments;
  }
  return analysis;
}

}  // namespace ksineq

#endif  // KSINEQ_CABELLO_HPP
