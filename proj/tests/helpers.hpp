#ifndef KSINEQ_TESTS_HELPERS_HPP
#define KSINEQ_TESTS_HELPERS_HPP

#include <string>
#include <vector>

#include "ksineq/document.hpp"
#include "ksineq/hypergraph.hpp"
#include "ksineq/rational.hpp"

namespace ksineq_tests {

inline std::string fixture_path(const std::string& name) {
  return std::string(KSINEQ_DATA_DIR) + "/" + name;
}

inline ksineq::HypergraphDocument load_fixture(const std::string& name) {
  return ksineq::load_document(fixture_path(name));
}

inline ksineq::KSHypergraph fixture_hypergraph(const std::string& name) {
  return ksineq::to_hypergraph(load_fixture(name));
}

inline const ksineq::KSHypergraph& ceg18() {
  static const ksineq::KSHypergraph h = fixture_hypergraph("ceg18.json");
  return h;
}

inline ksineq::RationalVector make_w(const std::vector<ksineq::Rational>& entries) {
  ksineq::RationalVector w(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) w(static_cast<Eigen::Index>(i)) = entries[i];
  return w;
}

/// The 5/6-attaining vertex displayed with the ceg18 construction.
inline ksineq::RationalVector known_maximizer() {
  const ksineq::Rational h(1, 2);
  return make_w({1, 0, 0, 0, 1, 0, 0, 0, h, h, h, 0, 0, 0, 1, 0, 0, 0});
}

}  // namespace ksineq_tests

#endif  // KSINEQ_TESTS_HELPERS_HPP
