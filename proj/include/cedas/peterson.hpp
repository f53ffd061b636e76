#pragma once

#include <sstream>
#include <string>

#include "cedas/diagnostics.hpp"

namespace cedas {

/// Three-process Peterson mutual exclusion (the standard filter form, two
/// levels) with an artificial critical-section action over a global input
/// variable: l starts anywhere in 0..r and leaving the critical section
/// performs l = (l + 1) % r. The idle self-loop models local work, so an
/// unfair scheduler can starve a waiting peer and the bundled liveness
/// property is genuinely violated. The `#property` block makes the generated
/// file self-describing.
inline std::string generate_peterson(int64_t r) {
  if (r < 1 || r > 65535)
    throw Error("peterson benchmark needs 1 <= r <= 65535, got " + std::to_string(r));
  constexpr int n = 3;
  std::ostringstream os;
  os << "// peterson mutual exclusion (filter, " << n
     << " processes), critical-section action over input l\n";
  for (int i = 0; i < n; ++i) os << "byte flag" << i << " = 0;\n";
  os << "byte victim1 = 0;\n";
  os << "byte victim2 = 0;\n";
  os << "input int l = 0.." << r << ";\n";
  for (int i = 0; i < n; ++i) {
    int j = (i + 1) % n, k = (i + 2) % n;
    os << "\nprocess P" << i << " {\n";
    os << "  state idle, req1, wait1, req2, wait2, cs;\n";
    os << "  init idle;\n";
    os << "  trans\n";
    os << "    idle -> idle {},\n";
    os << "    idle -> req1 { effect flag" << i << " = 1; },\n";
    os << "    req1 -> wait1 { effect victim1 = " << i << "; },\n";
    os << "    wait1 -> req2 { guard (flag" << j << " < 1 && flag" << k
       << " < 1) || victim1 != " << i << "; effect flag" << i << " = 2; },\n";
    os << "    req2 -> wait2 { effect victim2 = " << i << "; },\n";
    os << "    wait2 -> cs { guard (flag" << j << " < 2 && flag" << k
       << " < 2) || victim2 != " << i << "; },\n";
    os << "    cs -> idle { effect flag" << i << " = 0, l = (l + 1) % " << r << "; };\n";
    os << "}\n";
  }
  os << "\n";
  for (int i = 0; i < n; ++i) {
    os << "#property ap wait" << i << " = P" << i << "@wait1 || P" << i << "@wait2;\n";
    os << "#property ap crit" << i << " = P" << i << "@cs;\n";
  }
  os << "#property ltl \"";
  for (int i = 0; i < n; ++i)
    os << (i ? " && " : "") << "G (wait" << i << " -> F crit" << i << ")";
  os << "\";\n";
  return os.str();
}

}  // namespace cedas
