#pragma once

#include <sstream>
#include <string>

#include "cedas/model.hpp"

namespace cedas {

namespace detail {

inline void print_var_decl(const VarDecl& v, std::ostream& os) {
  if (v.is_input) os << "input ";
  os << (v.width == Width::Byte ? "byte " : "int ") << v.name << " = ";
  if (v.is_input) os << v.lo << ".." << v.hi;
  else os << v.init;
  os << ";\n";
}

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// Canonical text form. Parsing the output yields a structurally identical
/// model; printing is idempotent over parse-print round trips.
inline std::string print_model(const Model& m) {
  std::ostringstream os;
  for (const auto& g : m.globals) detail::print_var_decl(g, os);
  for (const auto& c : m.channels) os << "chan " << c.name << ";\n";
  for (const auto& p : m.processes) {
    os << "\nprocess " << p.name << " {\n";
    for (const auto& v : p.locals) {
      os << "  ";
      detail::print_var_decl(v, os);
    }
    os << "  state ";
    for (size_t i = 0; i < p.locations.size(); ++i)
      os << (i ? ", " : "") << p.locations[i];
    os << ";\n  init " << p.locations[static_cast<size_t>(p.initial)] << ";\n";
    if (!p.transitions.empty()) {
      os << "  trans\n";
      for (size_t i = 0; i < p.transitions.size(); ++i) {
        const auto& t = p.transitions[i];
        os << "    " << p.locations[static_cast<size_t>(t.from)] << " -> "
           << p.locations[static_cast<size_t>(t.to)] << " {";
        bool any = false;
        if (t.guard) {
          os << " guard " << expr_to_string(*t.guard) << ";";
          any = true;
        }
        if (t.sync) {
          os << " sync " << m.channels[static_cast<size_t>(t.sync->channel)].name
             << (t.sync->dir == SyncDir::Send ? "!" : "?") << ";";
          any = true;
        }
        if (!t.effects.empty()) {
          os << " effect ";
          for (size_t j = 0; j < t.effects.size(); ++j) {
            os << (j ? ", " : "") << t.effects[j].target.name << " = "
               << expr_to_string(*t.effects[j].value);
          }
          os << ";";
          any = true;
        }
        os << (any ? " }" : "}") << (i + 1 < p.transitions.size() ? "," : ";") << "\n";
      }
    }
    os << "}\n";
  }
  if (!m.ap_bindings.empty() || m.ltl_text) os << "\n";
  for (const auto& b : m.ap_bindings)
    os << "#property ap " << b.name << " = " << expr_to_string(*b.expr) << ";\n";
  if (m.ltl_text) os << "#property ltl " << detail::quote(*m.ltl_text) << ";\n";
  return os.str();
}

}  // namespace cedas
