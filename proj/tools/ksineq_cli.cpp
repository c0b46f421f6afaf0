// ksineq: hypergraph colorability, the noncontextual bound, quantum ray
// realizations, noise thresholds, and the parity-functional comparison, all
// driven by one JSON document format.
//
// Exit codes: 0 affirmative verdict, 1 negative verdict, 2 error.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ksineq/cabello.hpp"
#include "ksineq/colorability.hpp"
#include "ksineq/document.hpp"
#include "ksineq/hypergraph.hpp"
#include "ksineq/noise.hpp"
#include "ksineq/polytope.hpp"
#include "ksineq/quantum.hpp"
#include "ksineq/rational.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitAffirmative = 0;
constexpr int kExitNegative = 1;
constexpr int kExitError = 2;

std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (const unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

int worker_count() {
  if (const char* env = std::getenv("KSINEQ_WORKERS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      throw std::invalid_argument("KSINEQ_WORKERS must be an integer");
    }
  }
  return 1;
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct Emitter {
  bool json = false;
  bool no_timings = false;
  ordered_json report;
  std::ostringstream human;

  Emitter(const std::string& command, const std::string& path, const std::string& digest) {
    report["command"] = command;
    report["input"] = {{"path", path}, {"digest", digest}};
    report["results"] = ordered_json::object();
  }

  template <typename T>
  void field(const std::string& key, const T& value, const std::string& line) {
    report["results"][key] = value;
    human << line << '\n';
  }

  void timing(const std::string& stage, double ms) {
    if (no_timings) return;
    if (!report.contains("timings")) report["timings"] = ordered_json::object();
    report["timings"][stage] = ms;
  }

  void flush() {
    if (json) {
      std::cout << report.dump(2) << '\n';
    } else {
      std::cout << human.str();
    }
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ksineq::ParseError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string join_rationals(const std::vector<ksineq::Rational>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ' ';
    out += ksineq::to_string(values[i]);
  }
  return out;
}

std::string join_rationals(const ksineq::RationalVector& values) {
  std::string out;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (i > 0) out += ' ';
    out += ksineq::to_string(values(i));
  }
  return out;
}

ordered_json rational_array(const std::vector<ksineq::Rational>& values) {
  ordered_json arr = ordered_json::array();
  for (const ksineq::Rational& v : values) arr.push_back(ksineq::to_string(v));
  return arr;
}

ordered_json rational_array(const ksineq::RationalVector& values) {
  ordered_json arr = ordered_json::array();
  for (Eigen::Index i = 0; i < values.size(); ++i) arr.push_back(ksineq::to_string(values(i)));
  return arr;
}

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(values[i]);
  }
  return out;
}

int uniform_outcome_count(const ksineq::KSHypergraph& h) {
  const int m = static_cast<int>(h.contexts.front().size());
  for (const auto& ctx : h.contexts) {
    if (static_cast<int>(ctx.size()) != m) {
      throw std::invalid_argument("contexts have unequal outcome counts; the noise model needs one m");
    }
  }
  return m;
}

int run_check_color(const std::string& path, const std::string& mode_name, Emitter& em) {
  const std::string text = read_file(path);
  const ksineq::HypergraphDocument doc = ksineq::parse_document(text);
  const ksineq::KSHypergraph h = ksineq::to_hypergraph(doc);

  ksineq::NormalizationMode mode = ksineq::NormalizationMode::EXACTLY_ONE;
  if (mode_name == "at-most-one") mode = ksineq::NormalizationMode::AT_MOST_ONE;
  if (mode_name == "unrestricted") mode = ksineq::NormalizationMode::UNRESTRICTED;

  Timer timer;
  const auto witness = ksineq::find_coloring(h, mode);
  const ksineq::UncolourabilityCertificate cert = ksineq::prove_uncolourable(h, mode);
  em.timing("search_ms", timer.ms());

  em.field("mode", mode_name, "mode: " + mode_name);
  em.field("nodes", h.node_count, "nodes: " + std::to_string(h.node_count));
  if (witness) {
    em.field("verdict", "colorable", "verdict: colorable");
    em.report["results"]["witness"] = witness->values;
    em.human << "witness: " << join_ints(witness->values) << '\n';
    em.flush();
    return kExitAffirmative;
  }
  em.field("verdict", "uncolourable", "verdict: uncolourable");
  em.field("nodes_explored", cert.nodes_explored,
           "nodes explored: " + std::to_string(cert.nodes_explored));
  em.field("max_extendable_size", cert.max_extendable_size,
           "max extendable prefix: " + std::to_string(cert.max_extendable_size) + " of " +
               std::to_string(h.node_count));
  if (cert.max_extendable) {
    em.report["results"]["max_extendable"] = *cert.max_extendable;
    em.human << "max extendable assignment: " << join_ints(*cert.max_extendable) << '\n';
  }
  em.flush();
  return kExitNegative;
}

int run_bound(const std::string& path, bool oracle, Emitter& em) {
  const std::string text = read_file(path);
  const ksineq::HypergraphDocument doc = ksineq::parse_document(text);
  const ksineq::KSHypergraph h = ksineq::to_hypergraph(doc);

  Timer timer;
  const ksineq::VertexSet vs = ksineq::enumerate_vertices(h);
  em.timing("vertices_ms", timer.ms());
  if (vs.vertices.empty()) {
    em.field("verdict", "empty polytope", "verdict: empty polytope (no noncontextual assignments)");
    em.flush();
    return kExitNegative;
  }

  Timer bound_timer;
  const ksineq::BoundReport bound = ksineq::noncontextual_bound(h, vs);
  em.timing("bound_ms", bound_timer.ms());

  em.field("vertices", vs.vertices.size(), "vertices: " + std::to_string(vs.vertices.size()));
  em.report["results"]["bound"] = ksineq::to_string(bound.bound);
  em.human << "bound: " << ksineq::to_string(bound.bound) << '\n';
  em.report["results"]["witness"] = rational_array(bound.witness.w);
  em.human << "witness: " << join_rationals(bound.witness.w) << '\n';
  em.report["results"]["per_context_max"] = rational_array(bound.per_context_max);
  em.human << "per-context maxima: " << join_rationals(bound.per_context_max) << '\n';

  if (oracle) {
    Timer oracle_timer;
    const ksineq::Rational oracle_bound = ksineq::bound_by_selection_oracle(h);
    em.timing("oracle_ms", oracle_timer.ms());
    em.report["results"]["oracle_bound"] = ksineq::to_string(oracle_bound);
    em.human << "oracle bound: " << ksineq::to_string(oracle_bound) << '\n';
    const bool agree = oracle_bound == bound.bound;
    em.field("oracle_agreement", agree, std::string("oracle agreement: ") + (agree ? "yes" : "no"));
    if (!agree) {
      em.flush();
      return kExitNegative;
    }
  }
  em.flush();
  return kExitAffirmative;
}

template <typename RayT>
int quantum_verdict(const ksineq::KSHypergraph& h, const ksineq::RayRealization<RayT>& r,
                    double tol, Emitter& em) {
  Timer validate_timer;
  const ksineq::ValidationReport report = ksineq::validate_realization(h, r, tol);
  em.timing("validate_ms", validate_timer.ms());
  if (!report.ok()) {
    em.field("validation", "failed", "validation: failed");
    ordered_json failures = ordered_json::array();
    for (const auto* list : {&report.orthogonality_failures, &report.completeness_failures,
                             &report.equivalence_failures}) {
      for (const ksineq::ValidationIssue& issue : *list) {
        failures.push_back({{"subject", issue.subject}, {"deviation", issue.deviation}});
        em.human << "failure: " << issue.subject << " (deviation "
                 << ksineq::format_double(issue.deviation) << ")\n";
      }
    }
    em.report["results"]["failures"] = std::move(failures);
    em.flush();
    return kExitNegative;
  }
  em.field("validation", "ok", "validation: ok");

  Timer bound_timer;
  const ksineq::BoundReport bound = ksineq::noncontextual_bound(h);
  em.timing("bound_ms", bound_timer.ms());
  const std::string bound_str = ksineq::to_string(bound.bound);
  em.field("bound", bound_str, "bound: " + bound_str);

  Timer a_timer;
  const auto a_value = ksineq::ideal_quantum_A(h, r, tol);
  em.timing("quantum_ms", a_timer.ms());

  bool violates = false;
  if constexpr (std::is_same_v<std::decay_t<decltype(a_value)>, ksineq::Rational>) {
    em.field("A", ksineq::to_string(a_value), "A: " + ksineq::to_string(a_value));
    violates = a_value > bound.bound;
  } else {
    em.field("A", a_value, "A: " + ksineq::format_double(a_value));
    violates = a_value > ksineq::to_double(bound.bound);
  }

  if (violates) {
    em.field("verdict", "violates bound " + bound_str, "verdict: violates bound " + bound_str);
    em.flush();
    return kExitAffirmative;
  }
  if (bound.bound >= 1) {
    em.field("verdict", "no violation possible", "verdict: no violation possible");
  } else {
    em.field("verdict", "does not violate bound " + bound_str,
             "verdict: does not violate bound " + bound_str);
  }
  em.flush();
  return kExitNegative;
}

int run_quantum(const std::string& path, Emitter& em) {
  const std::string text = read_file(path);
  const ksineq::HypergraphDocument doc = ksineq::parse_document(text);
  const ksineq::KSHypergraph h = ksineq::to_hypergraph(doc);
  if (!doc.rays) throw std::invalid_argument("document carries no rays; quantum needs a realization");

  if (ksineq::has_exact_rays(doc)) {
    em.field("backend", "exact", "backend: exact");
    const ksineq::ExactRealization r = ksineq::to_exact_realization(doc, h);
    return quantum_verdict(h, r, 0.0, em);
  }
  em.field("backend", "float", "backend: float");
  const ksineq::FloatRealization r = ksineq::to_float_realization(doc, h);
  return quantum_verdict(h, r, doc.rays->tolerance, em);
}

std::vector<double> sweep_grid(const std::string& sweep) {
  double start = 0, end = 0, step = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(sweep);
  if (!(in >> start >> c1 >> end >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0 ||
      end < start) {
    throw std::invalid_argument("--sweep expects start:end:step with step > 0");
  }
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    const double v = start + i * step;
    if (v > end + step * 1e-9) break;
    grid.push_back(std::min(v, end));
  }
  return grid;
}

int run_noise(const std::string& path, double p1, double p2, const std::string& sweep,
              std::int64_t trials, std::uint64_t seed, const std::string& out_path, Emitter& em) {
  const std::string text = read_file(path);
  const ksineq::HypergraphDocument doc = ksineq::parse_document(text);
  const ksineq::KSHypergraph h = ksineq::to_hypergraph(doc);
  const int m = uniform_outcome_count(h);
  const int workers = worker_count();

  em.field("m", m, "outcomes per context: " + std::to_string(m));
  const double closed = ksineq::a_depolarizing({p1, p2}, m, m);
  em.field("A_closed_form", closed, "closed-form A: " + ksineq::format_double(closed));

  Timer bound_timer;
  const ksineq::BoundReport bound = ksineq::noncontextual_bound(h);
  em.timing("bound_ms", bound_timer.ms());
  em.field("bound", ksineq::to_string(bound.bound), "bound: " + ksineq::to_string(bound.bound));

  const ksineq::Rational threshold = ksineq::violation_threshold(bound.bound, m);
  const std::string threshold_str = ksineq::to_string(threshold);
  em.field("threshold", threshold_str, "threshold: " + threshold_str);

  const double product = p1 * p2;
  em.field("p1p2", product, "product p1*p2: " + ksineq::format_double(product));
  const double margin = product - ksineq::to_double(threshold);
  std::string verdict = margin > 0 ? (margin <= 1e-3 ? "yes (marginal)" : "yes") : "no";
  em.field("above_threshold", verdict,
           "above threshold " + threshold_str + ": " + verdict);

  std::optional<ksineq::FloatRealization> realization;
  if (doc.rays) realization = ksineq::to_float_realization(doc, h);

  if (trials > 0) {
    if (!realization) {
      throw std::invalid_argument("--trials needs a document with rays to simulate");
    }
    Timer mc_timer;
    const ksineq::ExperimentSample sample =
        ksineq::simulate_experiment(h, *realization, {p1, p2}, trials, seed, workers);
    const double empirical = ksineq::empirical_A(sample);
    em.timing("simulate_ms", mc_timer.ms());
    em.field("A_empirical", empirical, "empirical A: " + ksineq::format_double(empirical));
    em.field("trials_per_pair", trials, "trials per pair: " + std::to_string(trials));
    em.field("seed", seed, "seed: " + std::to_string(seed));
  }

  if (!sweep.empty()) {
    const std::vector<double> grid = sweep_grid(sweep);
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot write " + out_path);
    Timer sweep_timer;
    const ksineq::FloatRealization* rptr = realization ? &*realization : nullptr;
    ksineq::write_noise_sweep_csv(out, h, rptr, grid, m, trials, seed, workers);
    em.timing("sweep_ms", sweep_timer.ms());
    const std::size_t rows = grid.size() * grid.size();
    em.field("sweep_file", out_path,
             "sweep written: " + out_path + " (" + std::to_string(rows) + " rows)");
  }

  em.flush();
  return margin > 0 ? kExitAffirmative : kExitNegative;
}

int run_compare_cabello(const std::string& path, Emitter& em) {
  const std::string text = read_file(path);
  const ksineq::HypergraphDocument doc = ksineq::parse_document(text);
  const ksineq::KSHypergraph h = ksineq::to_hypergraph(doc);
  const ksineq::ParityFunctional f = ksineq::ParityFunctional::from_hypergraph(h);
  const int terms = static_cast<int>(f.terms.size());

  Timer scan_timer;
  const ksineq::ParityScan scan = ksineq::scan_assignments(h, f);
  em.timing("scan_ms", scan_timer.ms());
  em.field("terms", terms, "terms: " + std::to_string(terms));
  em.field("max_alpha_prime", scan.max_alpha_prime,
           "max alpha': " + std::to_string(scan.max_alpha_prime));
  em.field("max_alpha", scan.max_alpha, "max alpha: " + std::to_string(scan.max_alpha));
  em.field("maximizers", scan.maximizer_count,
           "maximizers: " + std::to_string(scan.maximizer_count) + " (normalized: " +
               std::to_string(scan.normalized_maximizer_count) + ")");

  // Identity check on two normalized statistics: uniform, then ramp weights.
  std::vector<std::vector<ksineq::Rational>> uniform;
  std::vector<std::vector<ksineq::Rational>> ramp;
  for (const auto& ctx : h.contexts) {
    const int m = static_cast<int>(ctx.size());
    uniform.emplace_back(static_cast<std::size_t>(m), ksineq::Rational(1, m));
    std::vector<ksineq::Rational> row;
    const int total = m * (m + 1) / 2;
    for (int k = 1; k <= m; ++k) row.push_back(ksineq::Rational(k, total));
    ramp.push_back(std::move(row));
  }
  const ksineq::Rational identity_uniform = ksineq::alpha_prime_operational(f, uniform);
  const ksineq::Rational identity_ramp = ksineq::alpha_prime_operational(f, ramp);
  const bool identity_ok = identity_uniform == terms && identity_ramp == terms;
  em.field("identity_alpha_prime", ksineq::to_string(identity_uniform),
           "identity alpha'(P): " + ksineq::to_string(identity_uniform) +
               (identity_ok ? " (confirmed)" : " (MISMATCH)"));

  for (const bool merged : {true, false}) {
    Timer ext_timer;
    const ksineq::ExtendedHypergraph ext = ksineq::extend_hypergraph(h, merged);
    const ksineq::ExtensionAnalysis analysis = ksineq::analyze_extension(ext);
    em.timing(merged ? "merged_ms" : "unmerged_ms", ext_timer.ms());
    const std::string prefix = merged ? "merged" : "unmerged";
    em.report["results"][prefix + "_nodes"] = ext.extended.node_count;
    em.report["results"][prefix + "_exactly_one_count"] = analysis.exactly_one_count;
    em.human << prefix << " extension: " << ext.extended.node_count << " nodes, "
             << analysis.exactly_one_count << " normalized assignment"
             << (analysis.exactly_one_count == 1 ? "" : "s");
    if (merged) {
      em.report["results"]["merged_unique"] = analysis.exactly_one_count == 1;
      em.human << " (unique: " << (analysis.exactly_one_count == 1 ? "yes" : "no") << ")";
    }
    em.human << '\n';
    if (!merged && analysis.unmerged_lift_bijection) {
      em.field("unmerged_lift_bijection", *analysis.unmerged_lift_bijection,
               std::string("unmerged lift bijection: ") +
                   (*analysis.unmerged_lift_bijection ? "yes" : "no"));
    }
  }

  em.flush();
  return identity_ok ? kExitAffirmative : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noncontextuality inequalities from Kochen-Specker hypergraphs"};
  app.require_subcommand(1);
  app.fallthrough();

  bool json_out = false;
  bool no_timings = false;
  app.add_flag("--json", json_out, "emit the machine-readable report");
  app.add_flag("--no-timings", no_timings, "omit timings for byte-stable output");

  std::string file;
  std::string mode = "exactly-one";
  auto* check = app.add_subcommand("check-color", "search for deterministic assignments");
  check->add_option("file", file, "hypergraph document")->required();
  check->add_option("--mode", mode, "exactly-one, at-most-one, or unrestricted")
      ->check(CLI::IsMember({"exactly-one", "at-most-one", "unrestricted"}));

  bool oracle = false;
  auto* bound = app.add_subcommand("bound", "noncontextual bound via vertex enumeration");
  bound->add_option("file", file, "hypergraph document")->required();
  bound->add_flag("--oracle", oracle, "cross-check with the selection oracle");

  auto* quantum = app.add_subcommand("quantum", "validate rays and compute the ideal A");
  quantum->add_option("file", file, "hypergraph document with rays")->required();

  double p1 = 1.0, p2 = 1.0;
  std::string sweep;
  std::int64_t trials = 0;
  std::uint64_t seed = 1;
  std::string out_path = "noise_sweep.csv";
  auto* noise = app.add_subcommand("noise", "depolarizing-noise analysis");
  noise->add_option("file", file, "hypergraph document")->required();
  noise->add_option("--p1", p1, "preparation visibility");
  noise->add_option("--p2", p2, "measurement visibility");
  noise->add_option("--sweep", sweep, "grid start:end:step for a CSV sweep");
  noise->add_option("--trials", trials, "Monte-Carlo trials per (context, outcome) pair");
  noise->add_option("--seed", seed, "Monte-Carlo seed");
  noise->add_option("--out", out_path, "CSV output path for --sweep");

  auto* cabello = app.add_subcommand("compare-cabello", "parity functional and extensions");
  cabello->add_option("file", file, "hypergraph document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    std::string digest;
    try {
      digest = fnv1a_digest(read_file(file));
    } catch (const ksineq::ParseError&) {
      digest = "";
    }
    Emitter em(command, file, digest);
    em.json = json_out;
    em.no_timings = no_timings;
    if (check->parsed()) return run_check_color(file, mode, em);
    if (bound->parsed()) return run_bound(file, oracle, em);
    if (quantum->parsed()) return run_quantum(file, em);
    if (noise->parsed()) return run_noise(file, p1, p2, sweep, trials, seed, out_path, em);
    return run_compare_cabello(file, em);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
