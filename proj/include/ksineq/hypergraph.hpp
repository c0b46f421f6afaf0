/**
 * Contextuality hypergraph data model.
 *
 * Nodes are equivalence classes of measurement events [k|M_i]; contexts are
 * the measurements, with events replaced by class ids. Node ids are 1-based
 * and assigned by first appearance in measurement-major, outcome-minor
 * order, so fixtures built from the same event list always agree on ids.
 */

#ifndef KSINEQ_HYPERGRAPH_HPP
#define KSINEQ_HYPERGRAPH_HPP

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ksineq {

struct MeasurementEvent {
  int measurement_index = 0;  // 1-based, the i of M_i
  int outcome_index = 0;      // 1-based, the k of [k|M_i]

  friend bool operator==(const MeasurementEvent& a, const MeasurementEvent& b) {
    return a.measurement_index == b.measurement_index && a.outcome_index == b.outcome_index;
  }
  friend bool operator<(const MeasurementEvent& a, const MeasurementEvent& b) {
    if (a.measurement_index != b.measurement_index) return a.measurement_index < b.measurement_index;
    return a.outcome_index < b.outcome_index;
  }
};

inline std::string to_string(const MeasurementEvent& e) {
  return "[" + std::to_string(e.outcome_index) + "|M" + std::to_string(e.measurement_index) + "]";
}

/// One node of the hypergraph: the set of events identified with each other.
struct EquivalenceClass {
  int id = 0;                             // 1-based, contiguous
  std::vector<MeasurementEvent> members;  // sorted, nonempty, one event per measurement
};

/**
 * Contexts are ordered lists of node ids so that outcome positions survive
 * the quotient: context i, position k-1 holds the node of event [k|M_i].
 */
struct KSHypergraph {
  int node_count = 0;
  std::vector<std::vector<int>> contexts;
  std::vector<EquivalenceClass> node_labels;  // optional; when present, node_labels[id-1].id == id
};

/// Rows are contexts, columns are nodes; entry (i, kappa-1) is 1 iff kappa is in context i.
using IncidenceMatrix = Eigen::MatrixXi;

/**
 * Build the hypergraph whose nodes are equivalence classes of events.
 *
 * @param outcomes_per_measurement Outcome count m_i for each measurement M_i.
 * @param equivalences Disjoint sets of events to identify; unpaired events
 *   become singleton classes.
 * @returns Hypergraph with one context per measurement.
 *
 * Throws std::invalid_argument on out-of-range events, overlapping sets, or
 * a set containing two events of one measurement.
 */
inline KSHypergraph quotient_by_equivalences(
    const std::vector<int>& outcomes_per_measurement,
    const std::vector<std::vector<MeasurementEvent>>& equivalences) {
  const int m = static_cast<int>(outcomes_per_measurement.size());
  auto check_event = [&](const MeasurementEvent& e) {
    if (e.measurement_index < 1 || e.measurement_index > m ||
        e.outcome_index < 1 || e.outcome_index > outcomes_per_measurement[e.measurement_index - 1]) {
      throw std::invalid_argument("event " + to_string(e) + " out of range");
    }
  };

  // set_of[event] = index into `equivalences`, for events that are paired
  std::map<MeasurementEvent, int> set_of;
  for (std::size_t s = 0; s < equivalences.size(); ++s) {
    std::set<int> measurements_seen;
    for (const MeasurementEvent& e : equivalences[s]) {
      check_event(e);
      if (!set_of.emplace(e, static_cast<int>(s)).second) {
        throw std::invalid_argument("event " + to_string(e) + " appears in two equivalence sets");
      }
      if (!measurements_seen.insert(e.measurement_index).second) {
        throw std::invalid_argument("equivalence set " + std::to_string(s + 1) +
                                    " identifies two outcomes of measurement M" +
                                    std::to_string(e.measurement_index));
      }
    }
  }

  KSHypergraph h;
  h.contexts.assign(static_cast<std::size_t>(m), {});
  std::vector<int> set_node(equivalences.size(), 0);  // assigned node id per equivalence set
  for (int i = 1; i <= m; ++i) {
    for (int k = 1; k <= outcomes_per_measurement[i - 1]; ++k) {
      const MeasurementEvent e{i, k};
      const auto it = set_of.find(e);
      int node = 0;
      if (it == set_of.end()) {
        node = ++h.node_count;
        h.node_labels.push_back({node, {e}});
      } else if (set_node[static_cast<std::size_t>(it->second)] != 0) {
        node = set_node[static_cast<std::size_t>(it->second)];
      } else {
        node = ++h.node_count;
        set_node[static_cast<std::size_t>(it->second)] = node;
        std::vector<MeasurementEvent> members = equivalences[static_cast<std::size_t>(it->second)];
        std::sort(members.begin(), members.end());
        h.node_labels.push_back({node, std::move(members)});
      }
      h.contexts[static_cast<std::size_t>(i - 1)].push_back(node);
    }
  }
  return h;
}

inline IncidenceMatrix incidence_matrix(const KSHypergraph& h) {
  IncidenceMatrix z = IncidenceMatrix::Zero(static_cast<Eigen::Index>(h.contexts.size()), h.node_count);
  for (std::size_t i = 0; i < h.contexts.size(); ++i) {
    for (const int node : h.contexts[i]) {
      z(static_cast<Eigen::Index>(i), node - 1) = 1;
    }
  }
  return z;
}

/// Diagnostics for structural invariants; empty list means the hypergraph is valid.
inline std::vector<std::string> validate(const KSHypergraph& h) {
  std::vector<std::string> violations;
  if (h.contexts.empty()) violations.push_back("context list is empty");
  std::vector<int> degree(static_cast<std::size_t>(std::max(h.node_count, 0)), 0);
  for (std::size_t i = 0; i < h.contexts.size(); ++i) {
    std::set<int> seen;
    for (const int node : h.contexts[i]) {
      if (node < 1 || node > h.node_count) {
        violations.push_back("context " + std::to_string(i + 1) + " references node " +
                             std::to_string(node) + " outside 1.." + std::to_string(h.node_count));
        continue;
      }
      if (!seen.insert(node).second) {
        violations.push_back("context " + std::to_string(i + 1) + " repeats node " + std::to_string(node));
      }
      ++degree[static_cast<std::size_t>(node - 1)];
    }
  }
  for (int node = 1; node <= h.node_count; ++node) {
    if (degree[static_cast<std::size_t>(node - 1)] == 0) {
      violations.push_back("node " + std::to_string(node) + " belongs to no context");
    }
  }
  return violations;
}

/**
 * All node permutations mapping the context family onto itself (contexts
 * compared as sets). Returned as vectors sigma with sigma[kappa-1] = image
 * of node kappa, in lexicographic order; the identity is always first.
 *
 * Backtracking over node images, pruning on preserved co-occurrence; meant
 * for the small hypergraphs this library studies, not for large instances.
 */
inline std::vector<std::vector<int>> enumerate_automorphisms(const KSHypergraph& h) {
  const int n = h.node_count;
  std::vector<std::vector<bool>> together(static_cast<std::size_t>(n + 1),
                                          std::vector<bool>(static_cast<std::size_t>(n + 1), false));
  for (const auto& ctx : h.contexts) {
    for (const int a : ctx) {
      for (const int b : ctx) {
        together[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
      }
    }
  }
  std::vector<std::set<int>> context_sets;
  context_sets.reserve(h.contexts.size());
  for (const auto& ctx : h.contexts) context_sets.emplace_back(ctx.begin(), ctx.end());
  std::sort(context_sets.begin(), context_sets.end());

  std::vector<std::vector<int>> result;
  std::vector<int> sigma;
  std::vector<bool> used(static_cast<std::size_t>(n + 1), false);
  auto extend = [&](auto&& self) -> void {
    const int v = static_cast<int>(sigma.size()) + 1;
    if (v > n) {
      std::vector<std::set<int>> image;
      image.reserve(h.contexts.size());
      for (const auto& ctx : h.contexts) {
        std::set<int> img;
        for (const int x : ctx) img.insert(sigma[static_cast<std::size_t>(x - 1)]);
        image.push_back(std::move(img));
      }
      std::sort(image.begin(), image.end());
      if (image == context_sets) result.push_back(sigma);
      return;
    }
    for (int t = 1; t <= n; ++t) {
      if (used[static_cast<std::size_t>(t)]) continue;
      bool ok = true;
      for (int x = 1; x < v && ok; ++x) {
        ok = together[static_cast<std::size_t>(x)][static_cast<std::size_t>(v)] ==
             together[static_cast<std::size_t>(sigma[static_cast<std::size_t>(x - 1)])][static_cast<std::size_t>(t)];
      }
      if (!ok) continue;
      sigma.push_back(t);
      used[static_cast<std::size_t>(t)] = true;
      self(self);
      used[static_cast<std::size_t>(t)] = false;
      sigma.pop_back();
    }
  };
  extend(extend);
  return result;
}

}  // namespace ksineq

#endif  // KSINEQ_HYPERGRAPH_HPP
