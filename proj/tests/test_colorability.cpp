#include <algorithm>
#include <set>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "ksineq/colorability.hpp"
#include "ksineq/hypergraph.hpp"

using ksineq::DeterministicAssignment;
using ksineq::KSHypergraph;
using ksineq::NormalizationMode;
using ksineq_tests::ceg18;

TEST_CASE("single context finds the lexicographically first one-hot") {
  const KSHypergraph h = ksineq::quotient_by_equivalences({4}, {});
  const auto witness = ksineq::find_coloring(h, NormalizationMode::EXACTLY_ONE);
  REQUIRE(witness);
  CHECK(witness->values == std::vector<int>{1, 0, 0, 0});
}

TEST_CASE("ceg18 admits no exactly-one coloring") {
  CHECK_FALSE(ksineq::find_coloring(ceg18(), NormalizationMode::EXACTLY_ONE));
}

TEST_CASE("ceg18 at-most-one search returns all-zeros") {
  const auto witness = ksineq::find_coloring(ceg18(), NormalizationMode::AT_MOST_ONE);
  REQUIRE(witness);
  CHECK(witness->values == std::vector<int>(18, 0));
}

TEST_CASE("ceg18 uncolourability certificate records a 17-node prefix") {
  const ksineq::UncolourabilityCertificate cert =
      ksineq::prove_uncolourable(ceg18(), NormalizationMode::EXACTLY_ONE);
  CHECK(cert.conclusion);
  CHECK(cert.mode == NormalizationMode::EXACTLY_ONE);
  CHECK(cert.nodes_explored > 18);
  CHECK(cert.max_extendable_size == 17);
  REQUIRE(cert.max_extendable);
  REQUIRE(cert.max_extendable->size() == 17);
  // The prefix itself is consistent: no context with two 1s, every fully
  // assigned context with exactly one.
  const std::vector<int>& prefix = *cert.max_extendable;
  for (const auto& ctx : ceg18().contexts) {
    int ones = 0;
    bool full = true;
    for (const int node : ctx) {
      if (node <= 17) {
        ones += prefix[static_cast<std::size_t>(node - 1)];
      } else {
        full = false;
      }
    }
    CHECK(ones <= 1);
    if (full) CHECK(ones == 1);
  }
}

TEST_CASE("colorable instances yield conclusion false") {
  const KSHypergraph single = ksineq::quotient_by_equivalences({4}, {});
  CHECK_FALSE(ksineq::prove_uncolourable(single, NormalizationMode::EXACTLY_ONE).conclusion);
  const KSHypergraph toy = ksineq_tests::fixture_hypergraph("3-node-toy.json");
  CHECK_FALSE(ksineq::prove_uncolourable(toy, NormalizationMode::EXACTLY_ONE).conclusion);
}

TEST_CASE("find_coloring absent exactly when prove_uncolourable concludes") {
  for (const auto mode : {NormalizationMode::EXACTLY_ONE, NormalizationMode::AT_MOST_ONE,
                          NormalizationMode::UNRESTRICTED}) {
    for (const char* name : {"ceg18.json", "single-context.json", "3-node-toy.json"}) {
      const KSHypergraph h = ksineq_tests::fixture_hypergraph(name);
      CHECK(ksineq::find_coloring(h, mode).has_value() ==
            !ksineq::prove_uncolourable(h, mode).conclusion);
    }
  }
}

TEST_CASE("single context enumerates the four one-hots in lex order") {
  const KSHypergraph h = ksineq::quotient_by_equivalences({4}, {});
  const auto all = ksineq::enumerate_assignments(h, NormalizationMode::EXACTLY_ONE);
  REQUIRE(all.size() == 4);
  CHECK(all[0].values == std::vector<int>{0, 0, 0, 1});
  CHECK(all[1].values == std::vector<int>{0, 0, 1, 0});
  CHECK(all[2].values == std::vector<int>{0, 1, 0, 0});
  CHECK(all[3].values == std::vector<int>{1, 0, 0, 0});
  CHECK(std::is_sorted(all.begin(), all.end()));
}

TEST_CASE("ceg18 unrestricted enumeration walks the full cube") {
  std::int64_t count = 0;
  ksineq::for_each_assignment(ceg18(), NormalizationMode::UNRESTRICTED,
                              [&](const std::vector<int>&) {
                                ++count;
                                return true;
                              });
  CHECK(count == 262144);
}

TEST_CASE("ceg18 exactly-one enumeration is empty") {
  CHECK(ksineq::enumerate_assignments(ceg18(), NormalizationMode::EXACTLY_ONE).empty());
}

TEST_CASE("ceg18 at-most-one enumeration count is frozen") {
  CHECK(ksineq::enumerate_assignments(ceg18(), NormalizationMode::AT_MOST_ONE).size() == 370);
}

TEST_CASE("every exactly-one assignment hits each context once") {
  const KSHypergraph toy = ksineq_tests::fixture_hypergraph("3-node-toy.json");
  for (const auto& a : ksineq::enumerate_assignments(toy, NormalizationMode::EXACTLY_ONE)) {
    for (const auto& ctx : toy.contexts) {
      int ones = 0;
      for (const int node : ctx) ones += a.values[static_cast<std::size_t>(node - 1)];
      CHECK(ones == 1);
    }
  }
}

TEST_CASE("unrestricted enumeration refuses oversized inputs") {
  std::vector<int> outcomes(7, 4);  // 28 single-appearance nodes
  const KSHypergraph big = ksineq::quotient_by_equivalences(outcomes, {});
  CHECK_THROWS_AS(ksineq::for_each_assignment(big, NormalizationMode::UNRESTRICTED,
                                              [](const std::vector<int>&) { return true; }),
                  std::invalid_argument);
  std::int64_t count = 0;
  ksineq::for_each_assignment(
      big, NormalizationMode::UNRESTRICTED,
      [&](const std::vector<int>&) {
        ++count;
        return count < 1000;  // early stop keeps the raised limit cheap
      },
      28);
  CHECK(count == 1000);
}

TEST_CASE("uncolourability survives node relabeling and context reordering") {
  const KSHypergraph& h = ceg18();
  // Relabel nodes by the permutation kappa -> 19 - kappa and reverse contexts.
  KSHypergraph relabeled;
  relabeled.node_count = h.node_count;
  for (auto it = h.contexts.rbegin(); it != h.contexts.rend(); ++it) {
    std::vector<int> ctx;
    for (const int node : *it) ctx.push_back(19 - node);
    relabeled.contexts.push_back(std::move(ctx));
  }
  CHECK(ksineq::validate(relabeled).empty());
  CHECK(ksineq::prove_uncolourable(relabeled, NormalizationMode::EXACTLY_ONE).conclusion);
  CHECK(ksineq::enumerate_assignments(relabeled, NormalizationMode::AT_MOST_ONE).size() == 370);
}
