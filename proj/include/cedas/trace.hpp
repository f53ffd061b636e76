#pragma once

#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cedas/counterexample.hpp"

namespace cedas {

/// Flat, format-facing view of a trace: what the text and JSON serializers
/// print and what the parser reads back.
struct TraceStep {
  bool in_cycle = false;
  std::string edge;                                   // e.g. "P0/t1+P1/t0 b3", "stutter b2", "-"
  std::vector<std::string> locations;
  std::vector<std::pair<std::string, int64_t>> values;      // explicit cells
  std::vector<std::pair<std::string, std::string>> sets;    // input cells, range-compressed
  int buchi_state = 0;
  bool accepting = false;

  bool operator==(const TraceStep&) const = default;
};

struct TraceDoc {
  std::string kind;   // "lasso" | "narrowed" | "concrete"
  std::string model;
  std::vector<TraceStep> steps;

  bool operator==(const TraceDoc&) const = default;
};

/// {0..4,7,9} style range compression of a sorted value list.
inline std::string format_value_set(const std::vector<int64_t>& sorted) {
  std::ostringstream os;
  os << '{';
  size_t i = 0;
  bool first = true;
  while (i < sorted.size()) {
    size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[j] + 1) ++j;
    if (!first) os << ',';
    first = false;
    if (j > i + 1) os << sorted[i] << ".." << sorted[j];
    else if (j == i + 1) os << sorted[i] << ',' << sorted[j];
    else os << sorted[i];
    i = j + 1;
  }
  os << '}';
  return os.str();
}

namespace detail {

inline TraceStep make_step(const LassoStep& st, bool in_cycle, bool concrete,
                           const ProductBinding& b) {
  const Model& m = *b.model;
  TraceStep out;
  out.in_cycle = in_cycle;
  out.edge = annotation_str(st.edge, m);
  for (size_t p = 0; p < m.processes.size(); ++p)
    out.locations.push_back(m.processes[p].locations[st.state.control.locations[p]]);
  for (size_t i = 0; i < m.explicit_layout.size(); ++i)
    out.values.emplace_back(m.explicit_layout[i].name, st.state.control.explicits[i]);
  for (size_t i = 0; i < m.input_layout.size(); ++i) {
    std::vector<int64_t> vals;
    for (size_t k = 0; k < st.state.data.size(); ++k)
      vals.push_back(st.state.data.member(k)[i]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    if (concrete && vals.size() == 1)
      out.sets.emplace_back(m.input_layout[i].name, std::to_string(vals[0]));
    else
      out.sets.emplace_back(m.input_layout[i].name, format_value_set(vals));
  }
  out.buchi_state = st.state.control.buchi_state;
  out.accepting = is_accepting(b, st.state);
  return out;
}

template <typename StepsLike>
inline void fill_steps(TraceDoc& doc, const StepsLike& stem, const StepsLike& cycle,
                       bool concrete, const ProductBinding& b) {
  for (const auto& st : stem) doc.steps.push_back(make_step(st, false, concrete, b));
  for (const auto& st : cycle) doc.steps.push_back(make_step(st, true, concrete, b));
}

}  // namespace detail

inline TraceDoc make_trace_doc(const Lasso& l, const ProductBinding& b) {
  TraceDoc doc{"lasso", b.model->name, {}};
  detail::fill_steps(doc, l.stem, l.cycle, false, b);
  return doc;
}
inline TraceDoc make_trace_doc(const NarrowedLasso& l, const ProductBinding& b) {
  TraceDoc doc{"narrowed", b.model->name, {}};
  detail::fill_steps(doc, l.stem, l.cycle, false, b);
  return doc;
}
inline TraceDoc make_trace_doc(const ConcreteRun& r, const ProductBinding& b) {
  TraceDoc doc{"concrete", b.model->name, {}};
  detail::fill_steps(doc, r.stem, r.cycle, true, b);
  return doc;
}

/// One step per line: cycle marker, fired transition, location vector,
/// variable values or value sets, property state, accepting flag.
inline std::string trace_to_text(const TraceDoc& doc) {
  std::ostringstream os;
  os << "# " << doc.kind << " trace for " << doc.model << "\n";
  for (const auto& s : doc.steps) {
    os << (s.in_cycle ? "[cycle] " : "        ") << s.edge << " |";
    for (const auto& l : s.locations) os << ' ' << l;
    os << " |";
    for (const auto& [n, v] : s.values) os << ' ' << n << '=' << v;
    for (const auto& [n, v] : s.sets) os << ' ' << n << '=' << v;
    os << " | prop=" << s.buchi_state << (s.accepting ? " accepting" : "") << "\n";
  }
  return os.str();
}

inline nlohmann::ordered_json trace_to_json(const TraceDoc& doc) {
  nlohmann::ordered_json j;
  j["kind"] = doc.kind;
  j["model"] = doc.model;
  j["steps"] = nlohmann::ordered_json::array();
  for (const auto& s : doc.steps) {
    nlohmann::ordered_json js;
    js["phase"] = s.in_cycle ? "cycle" : "stem";
    js["edge"] = s.edge;
    js["locations"] = s.locations;
    js["values"] = nlohmann::ordered_json::object();
    for (const auto& [n, v] : s.values) js["values"][n] = v;
    js["sets"] = nlohmann::ordered_json::object();
    for (const auto& [n, v] : s.sets) js["sets"][n] = v;
    js["buchi_state"] = s.buchi_state;
    js["accepting"] = s.accepting;
    j["steps"].push_back(std::move(js));
  }
  return j;
}

/// Inverse of trace_to_json over the documented schema.
inline TraceDoc trace_from_json(const nlohmann::ordered_json& j) {
  TraceDoc doc;
  doc.kind = j.at("kind").get<std::string>();
  doc.model = j.at("model").get<std::string>();
  for (const auto& js : j.at("steps")) {
    TraceStep s;
    s.in_cycle = js.at("phase").get<std::string>() == "cycle";
    s.edge = js.at("edge").get<std::string>();
    s.locations = js.at("locations").get<std::vector<std::string>>();
    for (auto it = js.at("values").begin(); it != js.at("values").end(); ++it)
      s.values.emplace_back(it.key(), it.value().get<int64_t>());
    for (auto it = js.at("sets").begin(); it != js.at("sets").end(); ++it)
      s.sets.emplace_back(it.key(), it.value().get<std::string>());
    s.buchi_state = js.at("buchi_state").get<int>();
    s.accepting = js.at("accepting").get<bool>();
    doc.steps.push_back(std::move(s));
  }
  return doc;
}

}  // namespace cedas
