#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "cedas/buchi.hpp"
#include "cedas/ltl.hpp"
#include "cedas/ltl_oracle.hpp"
#include "ltl_enum.hpp"

using namespace cedas;

namespace {

const std::map<std::string, int> kBinds{{"alpha", 0}, {"beta", 1}};

}  // namespace

TEST_CASE("parse_ltl desugars the derived operators") {
  SECTION("G beta is not-(true U not-beta)") {
    auto f = parse_ltl("G beta", kBinds);
    REQUIRE(f->op == LtlOp::Not);
    REQUIRE(f->lhs->op == LtlOp::Until);
    CHECK(f->lhs->lhs->op == LtlOp::True);
    REQUIRE(f->lhs->rhs->op == LtlOp::Not);
    CHECK(f->lhs->rhs->lhs->ap == 1);
  }
  SECTION("true becomes the constant true node") {
    auto f = parse_ltl("true", kBinds);
    CHECK(f->op == LtlOp::True);
  }
  SECTION("implication and disjunction reduce to and/not") {
    auto f = parse_ltl("alpha -> beta", kBinds);
    REQUIRE(f->op == LtlOp::Not);
    CHECK(f->lhs->op == LtlOp::And);
    auto g = parse_ltl("alpha || beta", kBinds);
    REQUIRE(g->op == LtlOp::Not);
    CHECK(g->lhs->op == LtlOp::And);
  }
  SECTION("U is right-associative and binds tighter than &&") {
    auto f = parse_ltl("alpha U beta U alpha", kBinds);
    REQUIRE(f->op == LtlOp::Until);
    CHECK(f->rhs->op == LtlOp::Until);
    auto g = parse_ltl("alpha U beta && beta", kBinds);
    CHECK(g->op == LtlOp::And);
  }
  SECTION("errors") {
    REQUIRE_THROWS_AS(parse_ltl("alpha U", kBinds), ParseError);
    REQUIRE_THROWS_AS(parse_ltl("gamma", kBinds), ParseError);
    REQUIRE_THROWS_AS(parse_ltl("(alpha", kBinds), ParseError);
  }
}

TEST_CASE("negate wraps once and cancels double negation") {
  // G beta desugars to a negation, so negating it unwraps instead of
  // stacking a second Not
  auto g = parse_ltl("G beta", kBinds);
  auto ng = negate(g);
  REQUIRE(g->op == LtlOp::Not);
  CHECK(ltl_equal(*ng, *g->lhs));
  CHECK(ltl_equal(*negate(ng), *g));  // double negation collapses

  auto u = parse_ltl("alpha U beta", kBinds);
  auto nu = negate(u);
  REQUIRE(nu->op == LtlOp::Not);
  CHECK(ltl_equal(*nu->lhs, *u));
  CHECK(ltl_equal(*negate(nu), *u));
}

TEST_CASE("ltl_eval_lasso follows the satisfaction rules") {
  LassoWord w{2, {1 /*alpha*/}, {2 /*beta*/}};
  CHECK(ltl_eval_lasso(*ltl_ap(0), w));        // alpha in w(0)
  CHECK_FALSE(ltl_eval_lasso(*ltl_ap(1), w));  // beta not in w(0)

  // X phi on w equals phi on the shifted word
  auto phi = parse_ltl("beta U alpha", kBinds);
  LassoWord w1{2, {}, w.cycle};
  CHECK(ltl_eval_lasso(*ltl_next(phi), w) == ltl_eval_lasso(*phi, w1));
}

TEST_CASE("ltl_eval_lasso duality") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 2000; ++i) {
    auto f = cedas::test::random_formula(rng, 4);
    auto w = cedas::test::random_lasso(rng, 3, 3);
    CHECK(ltl_eval_lasso(*ltl_not(f), w) == !ltl_eval_lasso(*f, w));
  }
}

TEST_CASE("ba_accepts_lasso basics") {
  SECTION("single accepting true self-loop accepts everything") {
    BuchiAutomaton a;
    a.num_states = 2;
    a.initial = 0;
    a.transitions = {{0, 1, {}}, {1, 1, {}}};
    a.accepting = {false, true};
    a.build_index();
    CHECK(ba_accepts_lasso(a, {2, {}, {0}}));
    CHECK(ba_accepts_lasso(a, {2, {3, 1}, {2, 0}}));
  }
  SECTION("empty accepting set rejects everything") {
    BuchiAutomaton a;
    a.num_states = 2;
    a.initial = 0;
    a.transitions = {{0, 1, {}}, {1, 1, {}}};
    a.accepting = {false, false};
    a.build_index();
    CHECK_FALSE(ba_accepts_lasso(a, {2, {}, {0}}));
    CHECK_FALSE(ba_accepts_lasso(a, {2, {1}, {3}}));
  }
  SECTION("translated G alpha accepts exactly the all-alpha lassos") {
    auto a = ltl_to_buchi(parse_ltl("G alpha", kBinds));
    CHECK(ba_accepts_lasso(a, {2, {}, {1}}));
    CHECK_FALSE(ba_accepts_lasso(a, {2, {}, {0}}));
  }
}

TEST_CASE("ltl_to_buchi of the constant false has an empty language") {
  auto a = ltl_to_buchi(ltl_false());
  for (const auto& w : cedas::test::lassos_up_to(2, 2)) CHECK_FALSE(ba_accepts_lasso(a, w));
}

TEST_CASE("translated automata have unique edges and satisfiable labels") {
  for (const auto& text : {"G alpha", "alpha U beta", "G F alpha", "F G (alpha && ! beta)",
                           "(alpha U beta) U alpha", "X (alpha || beta)"}) {
    auto a = ltl_to_buchi(parse_ltl(text, kBinds));
    std::set<std::pair<int, int>> seen;
    for (const auto& t : a.transitions) {
      CHECK(seen.emplace(t.src, t.dst).second);  // one edge per (src, dst)
      for (size_t i = 0; i + 1 < t.label.literals.size(); ++i)
        CHECK(t.label.literals[i].first < t.label.literals[i + 1].first);  // no p && !p
    }
  }
}

TEST_CASE("translation output is stable across calls") {
  auto f = parse_ltl("G (alpha -> F beta)", kBinds);
  auto a1 = ltl_to_buchi(f);
  auto a2 = ltl_to_buchi(f);
  REQUIRE(a1.num_states == a2.num_states);
  REQUIRE(a1.transitions.size() == a2.transitions.size());
  for (size_t i = 0; i < a1.transitions.size(); ++i) {
    CHECK(a1.transitions[i].src == a2.transitions[i].src);
    CHECK(a1.transitions[i].dst == a2.transitions[i].dst);
    CHECK(a1.transitions[i].label == a2.transitions[i].label);
  }
  CHECK(a1.accepting == a2.accepting);
}

TEST_CASE("translation agrees with direct evaluation on small formulae") {
  // scaled-down sweep; the acceptance suite runs the full criterion
  auto formulas = cedas::test::formulas_up_to(2);
  auto lassos = cedas::test::lassos_up_to(2, 2);
  for (const auto& f : formulas) {
    auto a = ltl_to_buchi(f);
    for (const auto& w : lassos)
      REQUIRE(ba_accepts_lasso(a, w) == ltl_eval_lasso(*f, w));
  }
}

TEST_CASE("translation agrees with direct evaluation on random formulae") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1500; ++i) {
    auto f = cedas::test::random_formula(rng, 4);
    auto a = ltl_to_buchi(f);
    for (int k = 0; k < 4; ++k) {
      auto w = cedas::test::random_lasso(rng, 3, 3);
      REQUIRE(ba_accepts_lasso(a, w) == ltl_eval_lasso(*f, w));
    }
  }
}
