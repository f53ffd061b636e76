#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "cedas/driver.hpp"
#include "helpers.hpp"
#include "oracle_stepper.hpp"
#include "random_model.hpp"

using namespace cedas;
using test::ds1;
using test::range1;

namespace {

/// Figure-style fixture: three threads plus a two-state property automaton
/// with labels true / (a>10) and an accepting sink.
struct Fig1Fixture {
  Model m = parse_model(test::fig1_text(), "fig1");
  BuchiAutomaton a;
  std::vector<AtomicProposition> aps;
  ProductBinding b;

  Fig1Fixture() {
    aps.push_back({0, "big", parse_property_expr("a > 10", m)});
    a.num_states = 3;
    a.initial = 0;
    a.transitions = {{0, 1, {}},
                     {1, 1, {}},
                     {1, 2, {{{0, true}}}},
                     {2, 2, {{{0, true}}}}};
    a.accepting = {false, false, true};
    a.build_index();
    b = ProductBinding{&m, &a, &aps, {}};
  }

  MultiState find(const TransitionSystemView& v, std::vector<Value> locs, int buchi) {
    // breadth-first hunt for a state with the given control
    StateCodec codec(m, a);
    std::set<std::string> seen;
    std::vector<MultiState> queue = v.initial_states();
    for (size_t i = 0; i < queue.size(); ++i) {
      MultiState s = queue[i];
      if (s.control.locations == locs && s.control.buchi_state == buchi) return s;
      for (auto& sc : v.successors(s)) {
        auto key = codec.encode(sc.state);
        if (seen.insert(key).second) queue.push_back(sc.state);
      }
      if (queue.size() > 5000) break;
    }
    FAIL("state not found");
    return queue[0];
  }
};

}  // namespace

TEST_CASE("set-reduced successors reproduce the figure's pruned sets") {
  Fig1Fixture f;
  SymView view(f.b);
  // (t=2,0,0): t0 done, others at their guards, property still in state 1
  MultiState s = f.find(view, {1, 0, 0}, 1);
  REQUIRE(s.data == range1(0, 255));

  bool saw_t1 = false, saw_t2 = false;
  for (auto& sc : successors_sym(f.b, s)) {
    if (sc.state.control.locations == std::vector<Value>{1, 1, 0} &&
        sc.state.control.buchi_state == 1) {
      CHECK(sc.state.data == range1(4, 255));  // guard a > 3
      saw_t1 = true;
    }
    if (sc.state.control.locations == std::vector<Value>{1, 0, 1} &&
        sc.state.control.buchi_state == 1) {
      CHECK(sc.state.data == range1(0, 4));  // guard a*a <= 16
      saw_t2 = true;
    }
  }
  CHECK(saw_t1);
  CHECK(saw_t2);
}

TEST_CASE("the loop program chains prune then apply") {
  Model m = parse_model(test::example2_text(), "example2");
  // property: a single always-true self-loop, nothing accepting
  BuchiAutomaton a;
  a.num_states = 2;
  a.initial = 0;
  a.transitions = {{0, 1, {}}, {1, 1, {}}};
  a.accepting = {false, false};
  a.build_index();
  std::vector<AtomicProposition> aps;
  ProductBinding b{&m, &a, &aps, {}};

  auto inits = initial_multistates(b);
  REQUIRE(inits.size() == 1);
  // read -> head
  auto s1 = successors_sym(b, inits[0]);
  REQUIRE(s1.size() == 1);
  CHECK(s1[0].state.data == range1(0, 255));
  // head: loop branch prunes to {11..255}, exit branch to {0..10}
  auto s2 = successors_sym(b, s1[0].state);
  REQUIRE(s2.size() == 2);
  CHECK(s2[0].state.data == range1(11, 255));
  CHECK(s2[1].state.data == range1(0, 10));
  // body: the decrement maps {11..255} to {10..254}
  auto s3 = successors_sym(b, s2[0].state);
  REQUIRE(s3.size() == 1);
  CHECK(s3[0].state.data == range1(10, 254));
}

TEST_CASE("initial_multistates") {
  SECTION("single true-labelled initial edge keeps the full product") {
    Model m = parse_model(test::example2_text(), "example2");
    BuchiAutomaton a;
    a.num_states = 2;
    a.initial = 0;
    a.transitions = {{0, 1, {}}, {1, 1, {}}};
    a.accepting = {false, false};
    a.build_index();
    std::vector<AtomicProposition> aps;
    ProductBinding b{&m, &a, &aps, {}};
    auto inits = initial_multistates(b);
    REQUIRE(inits.size() == 1);
    CHECK(inits[0].data == range1(0, 255));
    CHECK(inits[0].data.size() == 256);
  }
  SECTION("a model without input variables gets the singleton empty tuple") {
    Model m = parse_model("byte g = 0;\nprocess P { state s; init s; trans s -> s {}; }");
    BuchiAutomaton a;
    a.num_states = 2;
    a.initial = 0;
    a.transitions = {{0, 1, {}}, {1, 1, {}}};
    a.accepting = {false, true};
    a.build_index();
    std::vector<AtomicProposition> aps;
    ProductBinding b{&m, &a, &aps, {}};
    auto inits = initial_multistates(b);
    REQUIRE(inits.size() == 1);
    CHECK(inits[0].data.arity() == 0);
    CHECK(inits[0].data.size() == 1);
    // degenerate data part: sym and exp successors coincide
    auto sym = successors_sym(b, inits[0]);
    auto exp = successors_exp(b, inits[0]);
    REQUIRE(sym.size() == exp.size());
    for (size_t i = 0; i < sym.size(); ++i) CHECK(sym[i].state == exp[i].state);
  }
  SECTION("peterson initials match the exp-mode initials grouped by control") {
    Model m = parse_model(generate_peterson(3), "peterson3");
    PropertySpec prop = assemble_property(m, std::nullopt);
    auto aut = ltl_to_buchi(negate(prop.formula));
    ProductBinding b{&m, &aut, &prop.aps, {}};
    auto sym_inits = initial_multistates(b);

    std::map<std::pair<std::vector<Value>, int>, DataSet> grouped;
    DataSet all = initial_dataset(m.input_layout);
    for (size_t i = 0; i < all.size(); ++i) {
      auto mem = all.member(i);
      for (auto& st : initial_exp_states(b, mem)) {
        auto key = std::make_pair(st.control.locations, st.control.buchi_state);
        auto it = grouped.try_emplace(key, DataSet(all.arity())).first;
        it->second.push_member(st.data.member(0));
      }
    }
    REQUIRE(grouped.size() == sym_inits.size());
    for (auto& s : sym_inits) {
      auto key = std::make_pair(s.control.locations, s.control.buchi_state);
      REQUIRE(grouped.count(key) == 1);
      DataSet d = grouped.at(key);
      d.canonicalize();
      CHECK(d == s.data);
    }
  }
}

TEST_CASE("successors_exp walks one concrete step") {
  Model m = parse_model(test::example2_text(), "example2");
  BuchiAutomaton a;
  a.num_states = 2;
  a.initial = 0;
  a.transitions = {{0, 1, {}}, {1, 1, {}}};
  a.accepting = {false, false};
  a.build_index();
  std::vector<AtomicProposition> aps;
  ProductBinding b{&m, &a, &aps, {}};

  // at the loop head with a = 12, the loop branch fires and the exit is disabled
  MultiState s{{{1 /*head*/}, {}, 1}, ds1({12})};
  auto succ = successors_exp(b, s);
  REQUIRE(succ.size() == 1);
  CHECK(succ[0].state.control.locations == std::vector<Value>{2});
  CHECK(succ[0].state.data == ds1({12}));
  auto succ2 = successors_exp(b, succ[0].state);
  REQUIRE(succ2.size() == 1);
  CHECK(succ2[0].state.data == ds1({11}));  // a--
}

TEST_CASE("acceptance is carried by the property state alone") {
  Fig1Fixture f;
  MultiState acc{{{1, 0, 0}, {}, 2}, ds1({11, 42})};
  MultiState rej{{{1, 0, 0}, {}, 1}, ds1({11, 42})};
  CHECK(is_accepting(f.b, acc));
  CHECK_FALSE(is_accepting(f.b, rej));
  // exists/forall liftings agree: every member shares the state's flag
  for (size_t i = 0; i < acc.data.size(); ++i) {
    DataSet one(1);
    one.push_member(acc.data.member(i));
    MultiState exp_state{acc.control, std::move(one)};
    CHECK(is_accepting(f.b, exp_state) == is_accepting(f.b, acc));
  }
}

TEST_CASE("refines relates explicit states to multi-states") {
  Fig1Fixture f;
  MultiState s{{{1, 0, 0}, {}, 1}, ds1({3, 5, 9})};
  MultiState t_in{{{1, 0, 0}, {}, 1}, ds1({5})};
  MultiState t_out{{{1, 0, 0}, {}, 1}, ds1({4})};
  MultiState t_ctrl{{{0, 0, 0}, {}, 1}, ds1({5})};
  CHECK(refines(f.b, t_in, s));
  CHECK_FALSE(refines(f.b, t_out, s));
  CHECK_FALSE(refines(f.b, t_ctrl, s));
  MultiState self{{{1, 0, 0}, {}, 1}, ds1({7})};
  CHECK(refines(f.b, self, MultiState{self.control, ds1({7})}));
}

TEST_CASE("every explicit path lifts to a set-reduced path under refines") {
  // breadth-first path lifting up to depth 6 over small-domain models
  for (const char* text : {test::subsumption_text(), test::example3_text()}) {
    Model m = parse_model(text);
    if (m.input_domain_size() > 16) {
      // shrink the open byte for the lifting check
      std::string shrunk(text);
      auto pos = shrunk.find("0..255");
      if (pos != std::string::npos) shrunk.replace(pos, 6, "0..9");
      m = parse_model(shrunk);
    }
    PropertySpec prop = assemble_property(m, std::nullopt);
    auto aut = ltl_to_buchi(negate(prop.formula));
    ExploreOptions opts;
    opts.self_loop_deadlocks = true;
    ProductBinding b{&m, &aut, &prop.aps, opts};

    struct Item {
      MultiState exp, sym;
    };
    std::vector<Item> layer;
    DataSet all = initial_dataset(m.input_layout);
    auto sym_inits = initial_multistates(b);
    for (size_t i = 0; i < all.size(); ++i) {
      for (auto& es : initial_exp_states(b, all.member(i))) {
        bool lifted = false;
        for (auto& ss : sym_inits)
          if (refines(b, es, ss)) {
            layer.push_back({es, ss});
            lifted = true;
            break;
          }
        REQUIRE(lifted);
      }
    }
    for (int depth = 0; depth < 6; ++depth) {
      std::vector<Item> next;
      size_t budget = 200;
      for (auto& it : layer) {
        if (next.size() > budget) break;
        auto exp_succ = successors_exp(b, it.exp);
        auto sym_succ = successors_sym(b, it.sym);
        for (auto& es : exp_succ) {
          bool lifted = false;
          for (auto& ss : sym_succ)
            if (es.edge == ss.edge && refines(b, es.state, ss.state)) {
              next.push_back({es.state, ss.state});
              lifted = true;
              break;
            }
          REQUIRE(lifted);
        }
      }
      layer = std::move(next);
    }
  }
}

TEST_CASE("grouping matches the brute-force per-evaluation oracle") {
  auto check_model_grouping = [](const Model& m, const PropertySpec& prop, size_t state_cap) {
    auto aut = ltl_to_buchi(negate(prop.formula));
    ExploreOptions opts;
    opts.self_loop_deadlocks = true;
    ProductBinding b{&m, &aut, &prop.aps, opts};
    StateCodec codec(m, aut);
    std::set<std::string> seen;
    std::vector<MultiState> queue = initial_multistates(b);
    for (auto& s : queue) seen.insert(codec.encode(s));
    for (size_t i = 0; i < queue.size() && i < state_cap; ++i) {
      std::string why;
      INFO(why);
      REQUIRE(test::grouping_matches(b, queue[i], &why));
      for (auto& sc : successors_sym(b, queue[i]))
        if (seen.insert(codec.encode(sc.state)).second) queue.push_back(sc.state);
    }
  };

  SECTION("bundled models") {
    for (const char* text : {test::subsumption_text(), test::example2_text()}) {
      Model m = parse_model(text);
      check_model_grouping(m, assemble_property(m, std::nullopt), 600);
    }
  }
  SECTION("random models") {
    for (uint64_t seed = 1; seed <= 12; ++seed) {
      test::RandomModelGen gen(seed);
      Model m = gen.generate("rnd" + std::to_string(seed));
      check_model_grouping(m, assemble_property(m, std::nullopt), 250);
    }
  }
}

TEST_CASE("members of one successor agree on every label-constrained proposition") {
  Fig1Fixture f;
  SymView view(f.b);
  StateCodec codec(f.m, f.a);
  std::set<std::string> seen;
  std::vector<MultiState> queue = view.initial_states();
  for (size_t i = 0; i < queue.size() && i < 400; ++i) {
    for (auto& sc : view.successors(queue[i])) {
      const auto& label = f.a.transitions[static_cast<size_t>(sc.edge.buchi_transition)].label;
      for (auto [ap, pos] : label.literals) {
        for (size_t k = 0; k < sc.state.data.size(); ++k) {
          uint32_t bits = ap_bits(f.b, sc.state.control, sc.state.data.member(k));
          CHECK(((bits >> ap) & 1u) == static_cast<uint32_t>(pos));
        }
      }
      if (seen.insert(codec.encode(sc.state)).second) queue.push_back(sc.state);
    }
  }
}

TEST_CASE("deadlocks are verification errors unless stuttering is requested") {
  Model m = parse_model(R"MDL(
input byte a = 0..3;
process P {
  state s0, s1;
  init s0;
  trans s0 -> s1 { guard a > 1; };
}
)MDL");
  BuchiAutomaton a;
  a.num_states = 2;
  a.initial = 0;
  a.transitions = {{0, 1, {}}, {1, 1, {}}};
  a.accepting = {false, true};
  a.build_index();
  std::vector<AtomicProposition> aps;

  SECTION("default: error names the dead evaluations") {
    ProductBinding b{&m, &a, &aps, {}};
    auto inits = initial_multistates(b);
    REQUIRE(inits.size() == 1);
    REQUIRE_THROWS_AS(successors_sym(b, inits[0]), VerificationError);
  }
  SECTION("stutter flag turns the dead subset into a self-loop") {
    ExploreOptions opts;
    opts.self_loop_deadlocks = true;
    ProductBinding b{&m, &a, &aps, opts};
    auto inits = initial_multistates(b);
    auto succ = successors_sym(b, inits[0]);
    bool saw_stutter = false;
    for (auto& sc : succ) {
      if (sc.edge.kind == EdgeAnnotation::Kind::Stutter) {
        saw_stutter = true;
        CHECK(sc.state.control.locations == inits[0].control.locations);
        CHECK(sc.state.data == ds1({0, 1}));  // the members with no enabled step
      }
    }
    CHECK(saw_stutter);
  }
}

TEST_CASE("guard evaluation errors surface with transition context") {
  Model m = parse_model(R"MDL(
input byte a = 0..3;
process P {
  state s0, s1;
  init s0;
  trans s0 -> s1 { guard 10 % a == 1; }, s0 -> s0 {};
}
)MDL");
  BuchiAutomaton aut;
  aut.num_states = 2;
  aut.initial = 0;
  aut.transitions = {{0, 1, {}}, {1, 1, {}}};
  aut.accepting = {false, false};
  aut.build_index();
  std::vector<AtomicProposition> aps;
  ProductBinding b{&m, &aut, &aps, {}};
  auto inits = initial_multistates(b);
  try {
    successors_sym(b, inits[0]);
    FAIL("expected VerificationError");
  } catch (const VerificationError& e) {
    std::string msg = e.what();
    CHECK(msg.find("P/t0") != std::string::npos);
    CHECK(msg.find("modulo by zero") != std::string::npos);
  }
}

TEST_CASE("rendezvous pairs move both processes atomically") {
  Model m = parse_model(R"MDL(
input byte v = 0..7;
byte g = 0;
chan c;
process S {
  state s0, s1;
  init s0;
  trans s0 -> s1 { guard v > 2; sync c!; effect g = v; }, s0 -> s0 { guard v <= 2; };
}
process R {
  state r0, r1;
  init r0;
  trans r0 -> r1 { sync c?; effect g = g + 1; }, r0 -> r0 { guard v <= 2; };
}
)MDL");
  BuchiAutomaton a;
  a.num_states = 2;
  a.initial = 0;
  a.transitions = {{0, 1, {}}, {1, 1, {}}};
  a.accepting = {false, false};
  a.build_index();
  std::vector<AtomicProposition> aps;
  ExploreOptions opts;
  opts.self_loop_deadlocks = true;
  ProductBinding b{&m, &a, &aps, opts};
  auto inits = initial_multistates(b);
  REQUIRE(inits.size() == 1);
  bool saw_pair = false;
  for (auto& sc : successors_sym(b, inits[0])) {
    if (sc.edge.kind == EdgeAnnotation::Kind::Rendezvous) {
      saw_pair = true;
      CHECK(sc.state.control.locations == std::vector<Value>{1, 1});
      // g = v then g = g + 1, split per v value
      REQUIRE(sc.state.data.size() == 1);
      CHECK(sc.state.control.explicits[0] == sc.state.data.member(0)[0] + 1);
    }
  }
  CHECK(saw_pair);
}

TEST_CASE("the loop program is the bundled reduction counter-case") {
  // the decrement walks the whole value chain, so the reduced system keeps
  // nearly one multi-state per original state instead of collapsing:
  // 1 read + 246 head sets ({0..255}, then {10..254} down to {10})
  // + 245 body sets + 2 done sets = 494
  Model m = parse_model(test::example2_text(), "example2");
  BuchiAutomaton a;
  a.num_states = 2;
  a.initial = 0;
  a.transitions = {{0, 1, {}}, {1, 1, {}}};
  a.accepting = {false, false};
  a.build_index();
  std::vector<AtomicProposition> aps;
  ProductBinding b{&m, &a, &aps, {}};
  StateCodec codec(m, a);

  std::set<std::string> seen;
  std::vector<MultiState> q = initial_multistates(b);
  uint64_t edges = 0;
  for (auto& s : q) seen.insert(codec.encode(s));
  for (size_t i = 0; i < q.size(); ++i)
    for (auto& sc : successors_sym(b, q[i])) {
      ++edges;
      if (seen.insert(codec.encode(sc.state)).second) q.push_back(sc.state);
    }
  CHECK(q.size() == 494);
  CHECK(edges == 739);

  // per-evaluation explicit total: sum over v>10 of 2(v-10)+3, plus 3 each
  // for v<=10 — still larger than the reduced count here
  uint64_t total = 0;
  DataSet all = initial_dataset(m.input_layout);
  for (size_t i = 0; i < all.size(); ++i) {
    std::set<std::string> es;
    std::vector<MultiState> eq = initial_exp_states(b, all.member(i));
    for (auto& s : eq) es.insert(codec.encode(s));
    for (size_t k = 0; k < eq.size(); ++k)
      for (auto& sc : successors_sym(b, eq[k]))
        if (es.insert(codec.encode(sc.state)).second) eq.push_back(sc.state);
    total += eq.size();
  }
  CHECK(total == 61038);
}

TEST_CASE("sym-reachable members flatten to exactly the exp-reachable states") {
  auto flatten_equal = [](const Model& m, const PropertySpec& prop) {
    auto aut = ltl_to_buchi(negate(prop.formula));
    ExploreOptions opts;
    opts.self_loop_deadlocks = true;
    ProductBinding b{&m, &aut, &prop.aps, opts};
    StateCodec codec(m, aut);
    StateCodec exp_codec(m, aut);

    std::set<std::string> sym_flat;
    {
      std::set<std::string> seen;
      std::vector<MultiState> q = initial_multistates(b);
      for (auto& s : q) seen.insert(codec.encode(s));
      for (size_t i = 0; i < q.size(); ++i) {
        for (size_t k = 0; k < q[i].data.size(); ++k) {
          DataSet one(q[i].data.arity());
          one.push_member(q[i].data.member(k));
          sym_flat.insert(exp_codec.encode(MultiState{q[i].control, std::move(one)}));
        }
        for (auto& sc : successors_sym(b, q[i]))
          if (seen.insert(codec.encode(sc.state)).second) q.push_back(sc.state);
      }
    }
    std::set<std::string> exp_flat;
    {
      DataSet all = initial_dataset(m.input_layout);
      for (size_t v = 0; v < all.size(); ++v) {
        std::vector<MultiState> q = initial_exp_states(b, all.member(v));
        for (auto& s : q) exp_flat.insert(exp_codec.encode(s));
        for (size_t i = 0; i < q.size(); ++i)
          for (auto& sc : successors_sym(b, q[i]))
            if (exp_flat.insert(exp_codec.encode(sc.state)).second) q.push_back(sc.state);
      }
    }
    return sym_flat == exp_flat;
  };

  Model sub = parse_model(test::subsumption_text(), "subsumption");
  CHECK(flatten_equal(sub, assemble_property(sub, std::nullopt)));
  for (uint64_t seed = 500; seed < 508; ++seed) {
    test::RandomModelGen gen(seed);
    Model m = gen.generate("rnd" + std::to_string(seed));
    INFO("seed " << seed);
    CHECK(flatten_equal(m, assemble_property(m, std::nullopt)));
  }
}
