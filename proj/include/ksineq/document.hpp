/**
 * JSON document format shared by the CLI and the test fixtures.
 *
 * {
 *   "schema_version": "1",
 *   "metadata": { ... },                      // optional, free form
 *   "measurements": [4, {"outcomes":4,"label":"M2"}, ...],
 *   "equivalences": [[[1,4],[2,1]], ...],     // lists of [measurement, outcome]
 *   "rays": {                                 // optional
 *     "dimension": 4,
 *     "tolerance": 1e-10,                     // optional, float backend only
 *     "vectors": [{"event":[1,1], "amplitudes":["1","-1","0","0"]}, ...]
 *   }
 * }
 *
 * Amplitudes are exact when written as strings ("a/b", "a/b+c/di", "-i",
 * "3/4i") and double precision when written as a number or an [re, im]
 * pair. A document is exact only if every amplitude is a string.
 */

#ifndef KSINEQ_DOCUMENT_HPP
#define KSINEQ_DOCUMENT_HPP

#include <complex>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ksineq/hypergraph.hpp"
#include "ksineq/quantum.hpp"
#include "ksineq/rational.hpp"

namespace ksineq {

struct MeasurementSpec {
  int outcomes = 0;
  std::string label;  // empty means unlabelled
};

struct DocumentAmplitude {
  bool exact = true;
  GaussianRational value;              // set when exact
  std::complex<double> approx{0, 0};   // set when not

  std::complex<double> as_complex() const {
    return exact ? std::complex<double>(to_double(value.re), to_double(value.im)) : approx;
  }
};

struct DocumentRay {
  MeasurementEvent event;
  std::vector<DocumentAmplitude> amplitudes;
};

struct RaySection {
  int dimension = 0;
  double tolerance = 1e-10;
  bool tolerance_declared = false;
  std::vector<DocumentRay> vectors;
};

struct HypergraphDocument {
  std::string schema_version;
  nlohmann::json metadata;  // null when absent
  std::vector<MeasurementSpec> measurements;
  std::vector<std::vector<MeasurementEvent>> equivalences;
  std::optional<RaySection> rays;
};

/// "a/b", "a/b+c/di", "c/di", "i", "-i"; sign of the imaginary part is the separator.
inline GaussianRational parse_complex_amplitude(const std::string& text) {
  std::string s;
  for (const char c : text) {
    if (c != ' ') s.push_back(c);
  }
  if (s.empty()) throw ParseError("empty amplitude");
  const auto as_part = [](const std::string& part) {
    if (part.empty() || part == "+") return Rational(1);
    if (part == "-") return Rational(-1);
    return parse_rational(part);
  };
  if (s.back() != 'i') return {parse_rational(s), Rational(0)};
  const std::string body = s.substr(0, s.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t p = 1; p < body.size(); ++p) {
    if ((body[p] == '+' || body[p] == '-') && std::isdigit(static_cast<unsigned char>(body[p - 1]))) {
      split = p;  // last sign preceded by a digit separates re from im
    }
  }
  if (split == std::string::npos) return {Rational(0), as_part(body)};
  return {parse_rational(body.substr(0, split)), as_part(body.substr(split))};
}

inline std::string format_complex_amplitude(const GaussianRational& z) {
  if (z.im == 0) return to_string(z.re);
  std::string im_part;
  if (z.im == 1) {
    im_part = "i";
  } else if (z.im == -1) {
    im_part = "-i";
  } else {
    im_part = to_string(z.im) + "i";
  }
  if (z.re == 0) return im_part;
  return to_string(z.re) + (z.im > 0 ? "+" : "") + im_part;
}

namespace detail {

inline MeasurementEvent parse_event(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw ParseError(where + ": expected a [measurement, outcome] pair of integers");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

inline DocumentAmplitude parse_amplitude(const nlohmann::json& j, const std::string& where) {
  DocumentAmplitude amp;
  if (j.is_string()) {
    try {
      amp.value = parse_complex_amplitude(j.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
    return amp;
  }
  amp.exact = false;
  if (j.is_number()) {
    amp.approx = {j.get<double>(), 0.0};
    return amp;
  }
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    amp.approx = {j[0].get<double>(), j[1].get<double>()};
    return amp;
  }
  throw ParseError(where + ": expected a rational string, a number, or an [re, im] pair");
}

}  // namespace detail

inline HypergraphDocument parse_document(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("document root must be an object");

  HypergraphDocument doc;
  if (!j.contains("schema_version") || !j["schema_version"].is_string()) {
    throw ParseError("missing string field schema_version");
  }
  doc.schema_version = j["schema_version"].get<std::string>();
  if (j.contains("metadata")) doc.metadata = j["metadata"];

  if (!j.contains("measurements") || !j["measurements"].is_array() || j["measurements"].empty()) {
    throw ParseError("missing non-empty array field measurements");
  }
  for (std::size_t i = 0; i < j["measurements"].size(); ++i) {
    const auto& m = j["measurements"][i];
    const std::string where = "measurements[" + std::to_string(i) + "]";
    MeasurementSpec spec;
    if (m.is_number_integer()) {
      spec.outcomes = m.get<int>();
    } else if (m.is_object() && m.contains("outcomes") && m["outcomes"].is_number_integer()) {
      spec.outcomes = m["outcomes"].get<int>();
      if (m.contains("label")) {
        if (!m["label"].is_string()) throw ParseError(where + ": label must be a string");
        spec.label = m["label"].get<std::string>();
      }
    } else {
      throw ParseError(where + ": expected an outcome count or {outcomes, label}");
    }
    if (spec.outcomes < 1) throw ParseError(where + ": outcome count must be positive");
    doc.measurements.push_back(std::move(spec));
  }

  if (j.contains("equivalences")) {
    if (!j["equivalences"].is_array()) throw ParseError("equivalences must be an array");
    for (std::size_t c = 0; c < j["equivalences"].size(); ++c) {
      const auto& cls = j["equivalences"][c];
      const std::string where = "equivalences[" + std::to_string(c) + "]";
      if (!cls.is_array() || cls.size() < 2) {
        throw ParseError(where + ": expected a list of at least two events");
      }
      std::vector<MeasurementEvent> members;
      for (std::size_t k = 0; k < cls.size(); ++k) {
        members.push_back(detail::parse_event(cls[k], where + "[" + std::to_string(k) + "]"));
      }
      doc.equivalences.push_back(std::move(members));
    }
  }

  if (j.contains("rays")) {
    const auto& r = j["rays"];
    if (!r.is_object() || !r.contains("dimension") || !r["dimension"].is_number_integer()) {
      throw ParseError("rays must be an object with an integer dimension");
    }
    RaySection section;
    section.dimension = r["dimension"].get<int>();
    if (section.dimension < 1) throw ParseError("rays.dimension must be positive");
    if (r.contains("tolerance")) {
      if (!r["tolerance"].is_number()) throw ParseError("rays.tolerance must be a number");
      section.tolerance = r["tolerance"].get<double>();
      section.tolerance_declared = true;
    }
    if (!r.contains("vectors") || !r["vectors"].is_array()) {
      throw ParseError("rays.vectors must be an array");
    }
    for (std::size_t v = 0; v < r["vectors"].size(); ++v) {
      const auto& entry = r["vectors"][v];
      const std::string where = "rays.vectors[" + std::to_string(v) + "]";
      if (!entry.is_object() || !entry.contains("event") || !entry.contains("amplitudes")) {
        throw ParseError(where + ": expected {event, amplitudes}");
      }
      DocumentRay ray;
      ray.event = detail::parse_event(entry["event"], where + ".event");
      if (!entry["amplitudes"].is_array() ||
          static_cast<int>(entry["amplitudes"].size()) != section.dimension) {
        throw ParseError(where + ".amplitudes: expected " + std::to_string(section.dimension) +
                         " entries");
      }
      for (std::size_t a = 0; a < entry["amplitudes"].size(); ++a) {
        ray.amplitudes.push_back(detail::parse_amplitude(
            entry["amplitudes"][a], where + ".amplitudes[" + std::to_string(a) + "]"));
      }
      section.vectors.push_back(std::move(ray));
    }
    doc.rays = std::move(section);
  }
  return doc;
}

inline HypergraphDocument load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_document(buffer.str());
}

inline std::string serialize_document(const HypergraphDocument& doc) {
  nlohmann::ordered_json j;
  j["schema_version"] = doc.schema_version;
  if (!doc.metadata.is_null()) j["metadata"] = doc.metadata;
  j["measurements"] = nlohmann::ordered_json::array();
  for (const MeasurementSpec& m : doc.measurements) {
    if (m.label.empty()) {
      j["measurements"].push_back(m.outcomes);
    } else {
      j["measurements"].push_back({{"outcomes", m.outcomes}, {"label", m.label}});
    }
  }
  j["equivalences"] = nlohmann::ordered_json::array();
  for (const auto& cls : doc.equivalences) {
    nlohmann::ordered_json members = nlohmann::ordered_json::array();
    for (const MeasurementEvent& e : cls) {
      members.push_back({e.measurement_index, e.outcome_index});
    }
    j["equivalences"].push_back(std::move(members));
  }
  if (doc.rays) {
    nlohmann::ordered_json r;
    r["dimension"] = doc.rays->dimension;
    if (doc.rays->tolerance_declared) r["tolerance"] = doc.rays->tolerance;
    r["vectors"] = nlohmann::ordered_json::array();
    for (const DocumentRay& ray : doc.rays->vectors) {
      nlohmann::ordered_json entry;
      entry["event"] = {ray.event.measurement_index, ray.event.outcome_index};
      nlohmann::ordered_json amps = nlohmann::ordered_json::array();
      for (const DocumentAmplitude& a : ray.amplitudes) {
        if (a.exact) {
          amps.push_back(format_complex_amplitude(a.value));
        } else {
          amps.push_back({a.approx.real(), a.approx.imag()});
        }
      }
      entry["amplitudes"] = std::move(amps);
      r["vectors"].push_back(std::move(entry));
    }
    j["rays"] = std::move(r);
  }
  return j.dump(2) + "\n";
}

inline KSHypergraph to_hypergraph(const HypergraphDocument& doc) {
  std::vector<int> outcomes;
  outcomes.reserve(doc.measurements.size());
  for (const MeasurementSpec& m : doc.measurements) outcomes.push_back(m.outcomes);
  return quotient_by_equivalences(outcomes, doc.equivalences);
}

inline bool has_exact_rays(const HypergraphDocument& doc) {
  if (!doc.rays) return false;
  for (const DocumentRay& ray : doc.rays->vectors) {
    for (const DocumentAmplitude& a : ray.amplitudes) {
      if (!a.exact) return false;
    }
  }
  return true;
}

namespace detail {

/// Event -> node map plus the coverage check: every event exactly once.
inline std::vector<std::pair<MeasurementEvent, int>> event_nodes(const HypergraphDocument& doc,
                                                                 const KSHypergraph& h) {
  if (!doc.rays) throw std::invalid_argument("document carries no rays");
  std::vector<std::vector<bool>> seen;
  for (const MeasurementSpec& m : doc.measurements) {
    seen.emplace_back(static_cast<std::size_t>(m.outcomes), false);
  }
  std::vector<std::pair<MeasurementEvent, int>> out;
  for (const DocumentRay& ray : doc.rays->vectors) {
    const MeasurementEvent e = ray.event;
    if (e.measurement_index < 1 || e.measurement_index > static_cast<int>(seen.size()) ||
        e.outcome_index < 1 ||
        e.outcome_index > static_cast<int>(seen[static_cast<std::size_t>(e.measurement_index - 1)].size())) {
      throw std::invalid_argument("ray event " + to_string(e) + " is out of range");
    }
    auto flag = seen[static_cast<std::size_t>(e.measurement_index - 1)].begin() + (e.outcome_index - 1);
    if (*flag) throw std::invalid_argument("duplicate ray for event " + to_string(e));
    *flag = true;
    out.push_back({e, h.contexts[static_cast<std::size_t>(e.measurement_index - 1)]
                                [static_cast<std::size_t>(e.outcome_index - 1)]});
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    for (std::size_t k = 0; k < seen[i].size(); ++k) {
      if (!seen[i][k]) {
        throw std::invalid_argument(
            "no ray for event " +
            to_string(MeasurementEvent{static_cast<int>(i) + 1, static_cast<int>(k) + 1}));
      }
    }
  }
  return out;
}

}  // namespace detail

/**
 * Build a realization from a document's rays; h must be to_hypergraph(doc).
 * Each node takes the ray of its first event in measurement order; all the
 * per-event rays are kept so validation can audit operational equivalence.
 */
inline ExactRealization to_exact_realization(const HypergraphDocument& doc, const KSHypergraph& h) {
  if (!doc.rays) throw std::invalid_argument("document carries no rays");
  if (!has_exact_rays(doc)) {
    throw std::invalid_argument("document has floating-point amplitudes; use the float backend");
  }
  const auto events = detail::event_nodes(doc, h);
  ExactRealization r;
  r.dimension = doc.rays->dimension;
  std::vector<std::pair<MeasurementEvent, ExactRay>> by_node(static_cast<std::size_t>(h.node_count));
  for (std::size_t v = 0; v < events.size(); ++v) {
    std::vector<GaussianRational> amps;
    for (const DocumentAmplitude& a : doc.rays->vectors[v].amplitudes) amps.push_back(a.value);
    ExactRay ray(std::move(amps));
    r.event_rays.push_back({events[v].first, ray});
    auto& slot = by_node[static_cast<std::size_t>(events[v].second - 1)];
    if (slot.second.amplitudes.empty() || events[v].first < slot.first) {
      slot = {events[v].first, std::move(ray)};
    }
  }
  for (auto& [event, ray] : by_node) r.node_rays.push_back(std::move(ray));
  return r;
}

inline FloatRealization to_float_realization(const HypergraphDocument& doc, const KSHypergraph& h) {
  if (!doc.rays) throw std::invalid_argument("document carries no rays");
  const auto events = detail::event_nodes(doc, h);
  FloatRealization r;
  r.dimension = doc.rays->dimension;
  std::vector<std::pair<MeasurementEvent, FloatRay>> by_node(static_cast<std::size_t>(h.node_count));
  for (std::size_t v = 0; v < events.size(); ++v) {
    std::vector<std::complex<double>> amps;
    for (const DocumentAmplitude& a : doc.rays->vectors[v].amplitudes) amps.push_back(a.as_complex());
    FloatRay ray(std::move(amps));
    r.event_rays.push_back({events[v].first, ray});
    auto& slot = by_node[static_cast<std::size_t>(events[v].second - 1)];
    if (slot.second.amplitudes.empty() || events[v].first < slot.first) {
      slot = {events[v].first, std::move(ray)};
    }
  }
  for (auto& [event, ray] : by_node) r.node_rays.push_back(std::move(ray));
  return r;
}

}  // namespace ksineq

#endif  // KSINEQ_DOCUMENT_HPP
