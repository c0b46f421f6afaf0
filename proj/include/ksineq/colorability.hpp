/**
 * Deterministic {0,1} assignments to hypergraph nodes under three
 * normalization regimes, with exhaustive backtracking search.
 *
 * The search assigns nodes in id order. A partial assignment (a prefix) is
 * consistent when no context holds two 1s (EXACTLY_ONE / AT_MOST_ONE) and
 * no fully assigned context misses its 1 (EXACTLY_ONE). That filter defines
 * the max_extendable statistic in the uncolourability certificate.
 */

#ifndef KSINEQ_COLORABILITY_HPP
#define KSINEQ_COLORABILITY_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ksineq/hypergraph.hpp"

namespace ksineq {

enum class NormalizationMode { EXACTLY_ONE, AT_MOST_ONE, UNRESTRICTED };

inline std::string to_string(NormalizationMode mode) {
  switch (mode) {
    case NormalizationMode::EXACTLY_ONE: return "exactly-one";
    case NormalizationMode::AT_MOST_ONE: return "at-most-one";
    case NormalizationMode::UNRESTRICTED: return "unrestricted";
  }
  return "?";
}

struct DeterministicAssignment {
  std::vector<int> values;  // entries in {0,1}, index kappa-1

  friend bool operator==(const DeterministicAssignment& a, const DeterministicAssignment& b) {
    return a.values == b.values;
  }
  friend bool operator<(const DeterministicAssignment& a, const DeterministicAssignment& b) {
    return a.values < b.values;
  }
};

struct UncolourabilityCertificate {
  NormalizationMode mode = NormalizationMode::EXACTLY_ONE;
  std::int64_t nodes_explored = 0;  // value placements attempted during the search
  bool conclusion = false;          // true: exhaustive search found no assignment
  // Longest consistent prefix met during the search (a full assignment when
  // one exists); max_extendable_size is its length.
  std::optional<std::vector<int>> max_extendable;
  int max_extendable_size = 0;
};

namespace detail {

/// Per-context tallies incrementally maintained by the search.
struct SearchState {
  const KSHypergraph& h;
  NormalizationMode mode;
  std::vector<std::vector<int>> node_contexts;  // 0-based context indices per node
  std::vector<int> ones;                        // 1s placed in each context
  std::vector<int> assigned;                    // nodes of each context already valued

  explicit SearchState(const KSHypergraph& hg, NormalizationMode m)
      : h(hg),
        mode(m),
        node_contexts(static_cast<std::size_t>(hg.node_count)),
        ones(hg.contexts.size(), 0),
        assigned(hg.contexts.size(), 0) {
    for (std::size_t i = 0; i < hg.contexts.size(); ++i) {
      for (const int node : hg.contexts[i]) {
        node_contexts[static_cast<std::size_t>(node - 1)].push_back(static_cast<int>(i));
      }
    }
  }

  // Place `value` on 1-based `node`; false if the placement already breaks the mode.
  bool place(int node, int value) {
    bool ok = true;
    for (const int c : node_contexts[static_cast<std::size_t>(node - 1)]) {
      ++assigned[static_cast<std::size_t>(c)];
      ones[static_cast<std::size_t>(c)] += value;
      if (mode == NormalizationMode::UNRESTRICTED) continue;
      if (ones[static_cast<std::size_t>(c)] > 1) ok = false;
      if (mode == NormalizationMode::EXACTLY_ONE &&
          assigned[static_cast<std::size_t>(c)] == static_cast<int>(h.contexts[static_cast<std::size_t>(c)].size()) &&
          ones[static_cast<std::size_t>(c)] == 0) {
        ok = false;
      }
    }
    return ok;
  }

  void unplace(int node, int value) {
    for (const int c : node_contexts[static_cast<std::size_t>(node - 1)]) {
      --assigned[static_cast<std::size_t>(c)];
      ones[static_cast<std::size_t>(c)] -= value;
    }
  }
};

}  // namespace detail

/**
 * First satisfying assignment, or absent if none exists.
 *
 * Branch order: EXACTLY_ONE tries 1 before 0 (so a single context yields the
 * one-hot (1,0,...,0)); the other modes try 0 first (so AT_MOST_ONE yields
 * all-zeros whenever it is feasible).
 */
inline std::optional<DeterministicAssignment> find_coloring(const KSHypergraph& h,
                                                            NormalizationMode mode) {
  detail::SearchState st(h, mode);
  std::vector<int> values(static_cast<std::size_t>(h.node_count), 0);
  const int first = mode == NormalizationMode::EXACTLY_ONE ? 1 : 0;
  auto dfs = [&](auto&& self, int node) -> bool {
    if (node > h.node_count) return true;
    for (const int value : {first, 1 - first}) {
      if (st.place(node, value)) {
        values[static_cast<std::size_t>(node - 1)] = value;
        if (self(self, node + 1)) return true;
      }
      st.unplace(node, value);
    }
    return false;
  };
  if (!dfs(dfs, 1)) return std::nullopt;
  return DeterministicAssignment{std::move(values)};
}

/**
 * Exhaustive search certificate. When an assignment exists the search stops
 * at the first one (conclusion false, max_extendable = that assignment);
 * otherwise every branch is explored and the certificate records the longest
 * consistent prefix encountered.
 */
inline UncolourabilityCertificate prove_uncolourable(const KSHypergraph& h,
                                                     NormalizationMode mode) {
  detail::SearchState st(h, mode);
  UncolourabilityCertificate cert;
  cert.mode = mode;
  std::vector<int> values(static_cast<std::size_t>(h.node_count), 0);
  const int first = mode == NormalizationMode::EXACTLY_ONE ? 1 : 0;
  auto note_prefix = [&](int depth) {
    if (depth > cert.max_extendable_size || !cert.max_extendable) {
      cert.max_extendable_size = depth;
      cert.max_extendable = std::vector<int>(values.begin(), values.begin() + depth);
    }
  };
  note_prefix(0);
  auto dfs = [&](auto&& self, int node) -> bool {
    if (node > h.node_count) return true;
    for (const int value : {first, 1 - first}) {
      ++cert.nodes_explored;
      if (st.place(node, value)) {
        values[static_cast<std::size_t>(node - 1)] = value;
        note_prefix(node);
        if (self(self, node + 1)) return true;
      }
      st.unplace(node, value);
    }
    return false;
  };
  cert.conclusion = !dfs(dfs, 1);
  return cert;
}

constexpr int kDefaultUnrestrictedLimit = 24;

/**
 * Visit every satisfying assignment exactly once, in ascending lexicographic
 * order (node 1 most significant, 0 before 1). The callback may return false
 * to stop early.
 *
 * UNRESTRICTED mode walks the full 2^n cube and is refused above
 * `unrestricted_limit` nodes; the constrained modes prune and need no cap.
 */
template <typename Callback>
void for_each_assignment(const KSHypergraph& h, NormalizationMode mode, Callback&& cb,
                         int unrestricted_limit = kDefaultUnrestrictedLimit) {
  if (mode == NormalizationMode::UNRESTRICTED && h.node_count > unrestricted_limit) {
    throw std::invalid_argument("unrestricted enumeration over " + std::to_string(h.node_count) +
                                " nodes exceeds the limit of " + std::to_string(unrestricted_limit) +
                                "; use the polytope route for larger instances");
  }
  detail::SearchState st(h, mode);
  std::vector<int> values(static_cast<std::size_t>(h.node_count), 0);
  auto dfs = [&](auto&& self, int node) -> bool {  // false: consumer asked to stop
    if (node > h.node_count) {
      return cb(static_cast<const std::vector<int>&>(values));
    }
    for (const int value : {0, 1}) {
      bool keep_going = true;
      if (st.place(node, value)) {
        values[static_cast<std::size_t>(node - 1)] = value;
        keep_going = self(self, node + 1);
      }
      st.unplace(node, value);
      if (!keep_going) return false;
    }
    return true;
  };
  dfs(dfs, 1);
}

/// Materialized form of for_each_assignment, in the same order.
inline std::vector<DeterministicAssignment> enumerate_assignments(
    const KSHypergraph& h, NormalizationMode mode,
    int unrestricted_limit = kDefaultUnrestrictedLimit) {
  std::vector<DeterministicAssignment> out;
  for_each_assignment(
      h, mode,
      [&](const std::vector<int>& values) {
        out.push_back(DeterministicAssignment{values});
        return true;
      },
      unrestricted_limit);
  return out;
}

}  // namespace ksineq

#endif  // KSINEQ_COLORABILITY_HPP
