#pragma once

#include <string>
#include <vector>

#include "cedas/driver.hpp"

namespace cedas::test {

inline std::string models_dir() { return std::string(CEDAS_SOURCE_DIR) + "/models"; }
inline std::string golden_dir() { return std::string(CEDAS_SOURCE_DIR) + "/tests/golden"; }

inline DataSet ds1(std::vector<int> vals) {
  DataSet d(1);
  for (int v : vals) d.push_member(Evaluation{static_cast<Value>(v)});
  d.canonicalize();
  return d;
}

inline DataSet range1(int lo, int hi) {
  DataSet d(1);
  for (int v = lo; v <= hi; ++v) d.push_member(Evaluation{static_cast<Value>(v)});
  return d;
}

/// Property bundle over a hand-built automaton (bypasses LTL translation).
struct HandProperty {
  BuchiAutomaton automaton;
  std::vector<AtomicProposition> aps;
};

inline const char* example2_text() {
  return R"MDL(
// loop program: read a, then decrement while a > 10
input byte a = 0..255;

process main {
  state read, head, body, done;
  init read;
  trans
    read -> head {},
    head -> body { guard a > 10; },
    body -> head { effect a = a - 1; },
    head -> done { guard a <= 10; },
    done -> done {};
}

#property ap big = a > 10;
#property ltl "G true";
)MDL";
}

inline const char* example3_text() {
  return R"MDL(
// straight-line program: x = 1; read y; loop incrementing y forever
byte x = 0;
input byte y = 0..255;

process main {
  state start, readin, loop;
  init start;
  trans
    start -> readin { effect x = 1; },
    readin -> loop {},
    loop -> loop { effect y = y + 1; };
}

#property ap xone = x == 1;
#property ltl "F G xone";
)MDL";
}

inline const char* fig1_text() {
  return R"MDL(
// three threads over a shared open byte
input byte a = 0..255;

process t0 {
  state s1, s2;
  init s1;
  trans s1 -> s2 {}, s2 -> s2 {};
}

process t1 {
  state s1, s2, s3;
  init s1;
  trans
    s1 -> s2 { guard a > 3; },
    s2 -> s3 {},
    s3 -> s2 { effect a = a + 1; };
}

process t2 {
  state s1, s2, s3;
  init s1;
  trans
    s1 -> s2 { guard a * a <= 16; },
    s2 -> s3 {},
    s3 -> s2 { effect a = a - 10; };
}

#property ap big = a > 10;
#property ltl "F G big";
)MDL";
}

inline const char* subsumption_text() {
  return R"MDL(
// shrinking revisits of l0: matching a smaller set into a stored superset
// would close a cycle that the concrete system does not have
input byte a = 0..2;

process main {
  state l0, l1, l2;
  init l0;
  trans
    l0 -> l1 { effect a = a + 1; },
    l1 -> l0 { guard a <= 2; },
    l1 -> l2 { guard a > 2; },
    l2 -> l2 {};
}

#property ap at2 = main@l2;
#property ltl "G F at2";
)MDL";
}

/// The two-state acceptance automaton of the straight-line program's
/// specification: an unlabeled edge into an accepting sink that loops while
/// x == 1 holds.
inline HandProperty example3_hand_property(const Model& m) {
  HandProperty hp;
  hp.aps.push_back({0, "xone", parse_property_expr("x == 1", m)});
  hp.automaton.num_states = 2;
  hp.automaton.initial = 0;
  hp.automaton.transitions = {
      {0, 1, {}},                 // read anything, move to the sink
      {1, 1, {{{0, true}}}},      // stay while x == 1
  };
  hp.automaton.accepting = {false, true};
  hp.automaton.build_index();
  return hp;
}

inline Verdict run_algo(Algorithm algo, const TransitionSystemView& v, const StateCodec& c,
                        const SearchLimits& lim = {}) {
  return algo == Algorithm::Ndfs ? ndfs(v, c, lim) : owcty(v, c, lim);
}

}  // namespace cedas::test
