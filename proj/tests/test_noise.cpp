#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "ksineq/noise.hpp"
#include "ksineq/quantum.hpp"

using ksineq::BiasedNoiseParams;
using ksineq::DepolarizingParams;
using ksineq::ExperimentSample;
using ksineq::Rational;
using ksineq_tests::ceg18;

namespace {

const ksineq::ExactRealization& ceg18_exact() {
  static const ksineq::ExactRealization r =
      ksineq::to_exact_realization(ksineq_tests::load_fixture("ceg18-with-rays.json"), ceg18());
  return r;
}

}  // namespace

TEST_CASE("depolarizing average at the corners and at the threshold") {
  CHECK(ksineq::a_depolarizing({1.0, 1.0}, 4, 4) == 1.0);
  CHECK(ksineq::a_depolarizing({0.0, 0.7}, 4, 4) == 0.25);
  CHECK(std::abs(ksineq::a_depolarizing({7.0 / 9.0, 1.0}, 4, 4) - 5.0 / 6.0) < 1e-15);
  CHECK(ksineq::a_depolarizing_exact(Rational(7, 9), Rational(1), 4) == Rational(5, 6));
  CHECK(ksineq::a_depolarizing_exact(Rational(1), Rational(7, 9), 4) == Rational(5, 6));
}

TEST_CASE("depolarizing average depends only on the product of weights") {
  const double a = ksineq::a_depolarizing({0.5, 0.8}, 4, 4);
  const double b = ksineq::a_depolarizing({0.4, 1.0}, 4, 4);
  CHECK(a == b);
  CHECK(ksineq::a_depolarizing_exact(Rational(1, 2), Rational(4, 5), 4) ==
        ksineq::a_depolarizing_exact(Rational(2, 5), Rational(1), 4));
}

TEST_CASE("depolarizing average is monotone in the product") {
  double prev = -1;
  for (int step = 0; step <= 10; ++step) {
    const double value = ksineq::a_depolarizing({step / 10.0, 1.0}, 4, 4);
    CHECK(value > prev);
    prev = value;
  }
}

TEST_CASE("depolarizing parameters are range checked") {
  CHECK_THROWS_AS(ksineq::a_depolarizing({-0.1, 1.0}, 4, 4), std::invalid_argument);
  CHECK_THROWS_AS(ksineq::a_depolarizing({1.0, 1.1}, 4, 4), std::invalid_argument);
  CHECK_THROWS_AS(ksineq::a_depolarizing({1.0, 1.0}, 0, 4), std::invalid_argument);
  CHECK_THROWS_AS(ksineq::a_depolarizing({1.0, 1.0}, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(ksineq::a_depolarizing_exact(Rational(3, 2), Rational(1), 4),
                  std::invalid_argument);
}

TEST_CASE("biased noise with perfect channels gives 1 regardless of bias") {
  BiasedNoiseParams params;
  params.context_params.assign(9, {1.0, 1.0});
  params.bias.assign(9, {0.7, 0.1, 0.1, 0.1});
  CHECK(ksineq::a_biased(params) == 1.0);
}

TEST_CASE("uniform bias reproduces the depolarizing average") {
  for (const double p1 : {0.0, 0.3, 0.5, 1.0}) {
    for (const double p2 : {0.25, 1.0}) {
      BiasedNoiseParams params;
      params.context_params.assign(9, {p1, p2});
      params.bias.assign(9, std::vector<double>(4, 0.25));
      CHECK(std::abs(ksineq::a_biased(params) - ksineq::a_depolarizing({p1, p2}, 4, 4)) < 1e-12);
    }
  }
}

TEST_CASE("the biased average ignores how the bias is distributed") {
  BiasedNoiseParams skew;
  skew.context_params.assign(9, {0.6, 0.9});
  skew.bias.assign(9, {0.5, 0.5, 0.0, 0.0});
  BiasedNoiseParams uniform = skew;
  uniform.bias.assign(9, std::vector<double>(4, 0.25));
  CHECK(std::abs(ksineq::a_biased(skew) - ksineq::a_biased(uniform)) < 1e-12);
}

TEST_CASE("six clean contexts and three dead ones average to 3/4") {
  BiasedNoiseParams params;
  params.context_params.assign(6, {1.0, 1.0});
  params.context_params.insert(params.context_params.end(), 3, {0.0, 0.8});
  params.bias.assign(9, std::vector<double>(4, 0.25));
  CHECK(ksineq::a_biased(params) == 0.75);
}

TEST_CASE("biased noise validates its inputs") {
  BiasedNoiseParams params;
  params.context_params.assign(2, {1.0, 1.0});
  params.bias.assign(2, std::vector<double>(4, 0.25));
  params.bias[1] = {0.5, 0.2, 0.2, 0.2};  // sums to 1.1
  CHECK_THROWS_AS(ksineq::a_biased(params), std::invalid_argument);
  params.bias[1] = {1.2, -0.2, 0.0, 0.0};
  CHECK_THROWS_AS(ksineq::a_biased(params), std::invalid_argument);
  params.bias.pop_back();
  CHECK_THROWS_AS(ksineq::a_biased(params), std::invalid_argument);
  params.bias.clear();
  params.context_params.clear();
  CHECK_THROWS_AS(ksineq::a_biased(params), std::invalid_argument);
}

TEST_CASE("violation threshold matches the closed form and inverts it") {
  CHECK(ksineq::violation_threshold(Rational(5, 6), 4) == Rational(7, 9));
  CHECK(ksineq::violation_threshold(Rational(1), 4) == Rational(1));
  CHECK(std::abs(ksineq::violation_threshold(5.0 / 6.0, 4) - 7.0 / 9.0) < 1e-15);
  CHECK_THROWS_AS(ksineq::violation_threshold(Rational(1, 2), 2), std::invalid_argument);
  CHECK_THROWS_AS(ksineq::violation_threshold(Rational(1, 8), 4), std::invalid_argument);
  CHECK_THROWS_AS(ksineq::violation_threshold(Rational(6, 5), 4), std::invalid_argument);
  for (const Rational& bound : {Rational(1, 3), Rational(5, 6), Rational(9, 10), Rational(1)}) {
    const Rational t = ksineq::violation_threshold(bound, 4);
    CHECK(ksineq::a_depolarizing_exact(t, Rational(1), 4) == bound);
  }
}

TEST_CASE("noiseless simulation is purely diagonal") {
  const ExperimentSample sample =
      ksineq::simulate_experiment(ceg18(), ceg18_exact(), {1.0, 1.0}, 500, 7);
  for (std::size_t i = 0; i < sample.counts.size(); ++i) {
    for (std::size_t k = 0; k < sample.counts[i].size(); ++k) {
      for (std::size_t kp = 0; kp < sample.counts[i][k].size(); ++kp) {
        CHECK(sample.counts[i][k][kp] == (k == kp ? 500 : 0));
      }
    }
  }
  CHECK(ksineq::empirical_A(sample) == 1.0);
}

TEST_CASE("simulation is bit-identical across runs and worker counts") {
  const ExperimentSample a =
      ksineq::simulate_experiment(ceg18(), ceg18_exact(), {0.9, 0.8}, 200, 42);
  const ExperimentSample b =
      ksineq::simulate_experiment(ceg18(), ceg18_exact(), {0.9, 0.8}, 200, 42);
  CHECK(a.counts == b.counts);
  const ExperimentSample c =
      ksineq::simulate_experiment(ceg18(), ceg18_exact(), {0.9, 0.8}, 200, 42, 4);
  CHECK(a.counts == c.counts);
  const ExperimentSample other =
      ksineq::simulate_experiment(ceg18(), ceg18_exact(), {0.9, 0.8}, 200, 43);
  CHECK(a.counts != other.counts);
}

TEST_CASE("empirical average concentrates near the closed form") {
  const std::int64_t trials = 20000;
  const ExperimentSample sample =
      ksineq::simulate_experiment(ceg18(), ceg18_exact(), {7.0 / 9.0, 1.0}, trials, 42);
  const double a = 5.0 / 6.0;
  const double se = std::sqrt(a * (1.0 - a) / (36.0 * static_cast<double>(trials)));
  CHECK(std::abs(ksineq::empirical_A(sample) - a) < 4.0 * se);
}

TEST_CASE("simulation rejects bad inputs") {
  CHECK_THROWS_AS(ksineq::simulate_experiment(ceg18(), ceg18_exact(), {1.0, 1.0}, -1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(ksineq::simulate_experiment(ceg18(), ceg18_exact(), {1.5, 1.0}, 10, 1),
                  std::invalid_argument);
  ksineq::ExactRealization broken = ceg18_exact();
  broken.node_rays[0] = broken.node_rays[1];
  CHECK_THROWS_AS(ksineq::simulate_experiment(ceg18(), broken, {1.0, 1.0}, 10, 1),
                  ksineq::InvalidRealizationError);
  ExperimentSample empty;
  CHECK_THROWS_AS(ksineq::empirical_A(empty), std::invalid_argument);
}

TEST_CASE("substream seeds separate contexts, outcomes, and master seeds") {
  CHECK(ksineq::substream_seed(1, 1, 2) == ksineq::substream_seed(1, 1, 2));
  CHECK(ksineq::substream_seed(1, 1, 2) != ksineq::substream_seed(1, 2, 1));
  CHECK(ksineq::substream_seed(1, 1, 1) != ksineq::substream_seed(2, 1, 1));
  CHECK(ksineq::substream_seed(1, 3, 4) != ksineq::substream_seed(1, 3, 3));
}

TEST_CASE("noise sweep emits a stable CSV") {
  const std::vector<double> grid = {0.0, 0.5, 1.0};
  std::ostringstream without;
  ksineq::write_noise_sweep_csv<ksineq::ExactRay>(without, ceg18(), nullptr, grid, 4, 0, 9);
  const std::string text = without.str();
  CHECK(text.rfind("p1,p2,A_closed_form,A_empirical,trials,seed\n", 0) == 0);
  std::size_t lines = 0;
  for (const char c : text) lines += c == '\n';
  CHECK(lines == 10);
  CHECK(text.find("nan,0,9") != std::string::npos);

  std::ostringstream again;
  ksineq::write_noise_sweep_csv<ksineq::ExactRay>(again, ceg18(), nullptr, grid, 4, 0, 9);
  CHECK(again.str() == text);

  std::ostringstream with;
  ksineq::write_noise_sweep_csv(with, ceg18(), &ceg18_exact(), grid, 4, 10, 9);
  std::size_t with_lines = 0;
  for (const char c : with.str()) with_lines += c == '\n';
  CHECK(with_lines == 10);
  CHECK(with.str().find("nan") == std::string::npos);
}

TEST_CASE("format_double produces shortest round-trip decimals") {
  CHECK(ksineq::format_double(1.0) == "1");
  CHECK(ksineq::format_double(0.5) == "0.5");
  CHECK(ksineq::format_double(0.05) == "0.05");
  const double v = 7.0 / 9.0;
  CHECK(std::stod(ksineq::format_double(v)) == v);
}
