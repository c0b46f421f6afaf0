/**
 * Closed-form noise analysis and a finite-sample Monte Carlo harness.
 *
 * Depolarizing noise on a preparation (weight p1) and a measurement
 * (weight p2) turns the diagonal correlation into
 * p1 p2 + (1 - p1 p2) / m over m outcomes, so A = 1/m + (1 - 1/m) p1 p2.
 * Biased noise repreparing a fixed state with outcome bias s(k|i) gives the
 * diagonal p1 p2 + (1 - p1 p2) s(k|i); the bias cancels in the average.
 *
 * Simulation streams: each (context i, outcome k) preparation draws from
 * its own substream. The substream seed is substream_seed(seed, i, k) below
 * and feeds std::mt19937_64; uniforms take the top 53 bits. This mapping is
 * part of the fixture contract and must not change.
 */

#ifndef KSINEQ_NOISE_HPP
#define KSINEQ_NOISE_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ksineq/polytope.hpp"
#include "ksineq/quantum.hpp"
#include "ksineq/rational.hpp"

namespace ksineq {

struct DepolarizingParams {
  double p1 = 1;  // preparation channel weight
  double p2 = 1;  // measurement channel weight
};

struct BiasedNoiseParams {
  std::vector<std::pair<double, double>> context_params;  // (p1_i, p2_i) per context
  std::vector<std::vector<double>> bias;                  // s(k|i), each row sums to 1
};

namespace detail {

inline void check_weight(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
  }
}

inline double as_double(const Rational& q) { return to_double(q); }
inline double as_double(double x) { return x; }

}  // namespace detail

/// Shortest round-trip decimal form, so CSV output is byte-stable.
inline std::string format_double(double v) {
  char buf[32];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Exact form of the depolarizing average: 1/m + (1 - 1/m) p1 p2.
inline Rational a_depolarizing_exact(const Rational& p1, const Rational& p2, int outcomes_per_context) {
  if (p1 < 0 || p1 > 1 || p2 < 0 || p2 > 1) throw std::invalid_argument("channel weights must lie in [0,1]");
  if (outcomes_per_context < 2) throw std::invalid_argument("need at least two outcomes per context");
  const Rational m(outcomes_per_context);
  return 1 / m + (1 - 1 / m) * p1 * p2;
}

/**
 * Context-averaged correlation under uniform depolarizing noise.
 * `dimension` is carried for interface symmetry with the quantum module;
 * the average depends only on the outcome count.
 */
inline double a_depolarizing(const DepolarizingParams& params, int dimension, int outcomes_per_context) {
  detail::check_weight(params.p1, "p1");
  detail::check_weight(params.p2, "p2");
  if (dimension < 1) throw std::invalid_argument("dimension must be positive");
  if (outcomes_per_context < 2) throw std::invalid_argument("need at least two outcomes per context");
  const double m = outcomes_per_context;
  return 1.0 / m + (1.0 - 1.0 / m) * params.p1 * params.p2;
}

/**
 * Context-averaged correlation under biased noise, computed literally: the
 * diagonal term of each (i,k) is p1_i p2_i + (1 - p1_i p2_i) s(k|i) and the
 * result is the plain mean over all events. The biases cancel, leaving
 * 1/m + (1 - 1/m) mean_i(p1_i p2_i) for uniform outcome count m.
 */
inline double a_biased(const BiasedNoiseParams& params) {
  if (params.context_params.size() != params.bias.size() || params.bias.empty()) {
    throw std::invalid_argument("per-context parameter and bias lists must align and be nonempty");
  }
  double sum = 0;
  int events = 0;
  for (std::size_t i = 0; i < params.bias.size(); ++i) {
    detail::check_weight(params.context_params[i].first, "p1");
    detail::check_weight(params.context_params[i].second, "p2");
    double total_bias = 0;
    for (const double s : params.bias[i]) {
      if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("bias entries must lie in [0,1]");
      total_bias += s;
    }
    if (std::abs(total_bias - 1.0) > 1e-12) {
      throw std::invalid_argument("bias distribution of context " + std::to_string(i + 1) +
                                  " is not normalized");
    }
    const double p = params.context_params[i].first * params.context_params[i].second;
    for (const double s : params.bias[i]) {
      sum += p + (1.0 - p) * s;
      ++events;
    }
  }
  return sum / events;
}

/**
 * Product threshold t with A > bound iff mean(p1 p2) > t, i.e.
 * t = (bound - 1/m) / (1 - 1/m). Exact; rejects bounds at or below 1/m,
 * which this noise family cannot violate.
 */
inline Rational violation_threshold(const Rational& bound, int outcomes_per_context) {
  if (outcomes_per_context < 2) throw std::invalid_argument("need at least two outcomes per context");
  const Rational m(outcomes_per_context);
  if (bound <= 1 / m || bound > 1) {
    throw std::invalid_argument("bound must lie in (1/m, 1]; A never exceeds " + to_string(Rational(1 / m)) +
                                " at zero weight");
  }
  return (bound - 1 / m) / (1 - 1 / m);
}

inline double violation_threshold(double bound, int outcomes_per_context) {
  if (outcomes_per_context < 2) throw std::invalid_argument("need at least two outcomes per context");
  const double m = outcomes_per_context;
  if (!(bound > 1.0 / m && bound <= 1.0)) throw std::invalid_argument("bound must lie in (1/m, 1]");
  return (bound - 1.0 / m) / (1.0 - 1.0 / m);
}

struct ExperimentSample {
  std::uint64_t seed = 0;
  std::int64_t trials_per_pair = 0;
  // counts[i][k][k']: preparing event (i,k) and measuring context i gave outcome k'.
  std::vector<std::vector<std::vector<std::int64_t>>> counts;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Fixed seed-to-substream mapping; i and k are the 1-based context/outcome indices.
inline std::uint64_t substream_seed(std::uint64_t seed, int i, int k) {
  const std::uint64_t mixed_i = splitmix64(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(i));
  return splitmix64(mixed_i + 0xBF58476D1CE4E5B9ULL * static_cast<std::uint64_t>(k));
}

inline double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/**
 * Draw `trials` outcomes for every (i,k) pair from the noisy Born
 * distribution q(k'|i,k) = p1 p2 B(k',k) + (1 - p1 p2)/m, with B the ideal
 * Born probability of the realization. Bit-identical for a given seed; the
 * optional worker count shards pairs without changing any count.
 */
template <typename RayT>
ExperimentSample simulate_experiment(const KSHypergraph& h, const RayRealization<RayT>& r,
                                     const DepolarizingParams& params, std::int64_t trials,
                                     std::uint64_t seed, int workers = 1) {
  detail::check_weight(params.p1, "p1");
  detail::check_weight(params.p2, "p2");
  if (trials < 0) throw std::invalid_argument("trials must be nonnegative");
  const ValidationReport report = validate_realization(h, r);
  if (!report.ok()) {
    throw InvalidRealizationError("realization fails validation; run validate_realization for details");
  }

  ExperimentSample sample;
  sample.seed = seed;
  sample.trials_per_pair = trials;
  sample.counts.resize(h.contexts.size());
  std::vector<std::pair<int, int>> pairs;  // (context index, outcome index), 0-based
  for (std::size_t i = 0; i < h.contexts.size(); ++i) {
    sample.counts[i].assign(h.contexts[i].size(),
                            std::vector<std::int64_t>(h.contexts[i].size(), 0));
    for (std::size_t k = 0; k < h.contexts[i].size(); ++k) {
      pairs.emplace_back(static_cast<int>(i), static_cast<int>(k));
    }
  }

  const double p = params.p1 * params.p2;
  auto run_pair = [&](int i, int k) {
    const auto& ctx = h.contexts[static_cast<std::size_t>(i)];
    const int m = static_cast<int>(ctx.size());
    const RayT& state = r.node_rays[static_cast<std::size_t>(ctx[static_cast<std::size_t>(k)] - 1)];
    std::vector<double> cumulative(static_cast<std::size_t>(m), 0.0);
    double acc = 0;
    for (int kp = 0; kp < m; ++kp) {
      const RayT& effect = r.node_rays[static_cast<std::size_t>(ctx[static_cast<std::size_t>(kp)] - 1)];
      const double born = detail::as_double(born_probability(state, effect));
      acc += p * born + (1.0 - p) / m;
      cumulative[static_cast<std::size_t>(kp)] = acc;
    }
    cumulative.back() = 1.0;  // guard against rounding in the tail
    std::mt19937_64 eng(substream_seed(seed, i + 1, k + 1));
    auto& row = sample.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    for (std::int64_t t = 0; t < trials; ++t) {
      const double u = uniform01(eng);
      int kp = 0;
      while (cumulative[static_cast<std::size_t>(kp)] <= u && kp + 1 < m) ++kp;
      ++row[static_cast<std::size_t>(kp)];
    }
  };

  if (workers <= 1) {
    for (const auto& [i, k] : pairs) run_pair(i, k);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t idx = static_cast<std::size_t>(w); idx < pairs.size();
             idx += static_cast<std::size_t>(workers)) {
          run_pair(pairs[idx].first, pairs[idx].second);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }
  return sample;
}

/// Mean of the diagonal empirical frequencies; the finite-sample estimate of A.
inline double empirical_A(const ExperimentSample& sample) {
  if (sample.trials_per_pair == 0) throw std::invalid_argument("sample holds no trials");
  double sum = 0;
  int pairs = 0;
  for (const auto& ctx : sample.counts) {
    for (std::size_t k = 0; k < ctx.size(); ++k) {
      sum += static_cast<double>(ctx[k][k]) / static_cast<double>(sample.trials_per_pair);
      ++pairs;
    }
  }
  return sum / pairs;
}

/**
 * Noise sweep over a (p1, p2) grid, one CSV row per point. The empirical
 * column is filled by simulation when a realization is supplied, otherwise
 * written as nan with zero trials.
 */
template <typename RayT>
void write_noise_sweep_csv(std::ostream& out, const KSHypergraph& h,
                           const RayRealization<RayT>* realization,
                           const std::vector<double>& grid, int outcomes_per_context,
                           std::int64_t trials, std::uint64_t seed, int workers = 1) {
  out << "p1,p2,A_closed_form,A_empirical,trials,seed\n";
  for (const double p1 : grid) {
    for (const double p2 : grid) {
      const double closed = a_depolarizing({p1, p2}, outcomes_per_context, outcomes_per_context);
      out << format_double(p1) << ',' << format_double(p2) << ',' << format_double(closed) << ',';
      if (realization != nullptr) {
        const ExperimentSample sample = simulate_experiment(h, *realization, {p1, p2}, trials, seed, workers);
        out << format_double(empirical_A(sample)) << ',' << trials << ',' << seed << '\n';
      } else {
        out << "nan,0," << seed << '\n';
      }
    }
  }
}

}  // namespace ksineq

#endif  // KSINEQ_NOISE_HPP
