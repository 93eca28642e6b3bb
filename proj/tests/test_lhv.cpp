#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "hyperbell/bell.hpp"
#include "hyperbell/hypergraph.hpp"
#include "hyperbell/lhv.hpp"
#include "hyperbell/sign_state.hpp"

using hyperbell::Dyadic;
using hyperbell::Family;
using hyperbell::Hypergraph;
using hyperbell::MeasurementEvent;
using hyperbell::SignState;
using hyperbell::brute_classical_max;
using hyperbell::brute_classical_min;
using hyperbell::build_expression;
using hyperbell::hardy_check;
using hyperbell::stabilizer_zero_events;

TEST_CASE("stabilizer zero events: structure and quantum probabilities") {
  const auto h3 = Hypergraph::single_edge(3);
  const auto events3 = stabilizer_zero_events(h3);
  CHECK(events3.size() == 12);

  const auto h4 = Hypergraph::single_edge(4);
  const auto events4 = stabilizer_zero_events(h4);
  CHECK(events4.size() == 32);  // 8 per qubit

  CHECK_THROWS_AS(stabilizer_zero_events(Hypergraph(1, {{0}})), std::invalid_argument);
  CHECK_THROWS_AS(stabilizer_zero_events(Hypergraph::complete_k_uniform(4, 3)),
                  std::invalid_argument);

  // every listed event has probability exactly zero on the state
  for (int n = 2; n <= 8; ++n) {
    const auto h = Hypergraph::single_edge(n);
    const SignState st = SignState::build(h);
    for (const auto& ev : stabilizer_zero_events(h)) {
      const Dyadic p = hyperbell::outcome_probability(st, hyperbell::parse_settings(ev.settings),
                                                      hyperbell::parse_outcomes(ev.outcomes));
      CHECK(p == Dyadic(0));
    }
  }
}

TEST_CASE("the three-qubit Hardy argument") {
  const auto zero_events = stabilizer_zero_events(Hypergraph::single_edge(3));
  CHECK(hardy_check(3, zero_events, {"XXX", "+--"}));
  CHECK(hardy_check(3, zero_events, {"XXX", "-+-"}));
  CHECK(hardy_check(3, zero_events, {"XXX", "--+"}));

  // without constraints the target is reachable
  CHECK_FALSE(hardy_check(3, {}, {"XXX", "+--"}));

  // the all-minus event is not forced to zero (and indeed P = 1/16 > 0)
  CHECK_FALSE(hardy_check(3, zero_events, {"XXX", "---"}));
}

TEST_CASE("the N-qubit Hardy family forces every mixed target to zero") {
  for (int n = 3; n <= 8; ++n) {
    const auto zero_events = stabilizer_zero_events(Hypergraph::single_edge(n));
    std::vector<MeasurementEvent> targets;
    const std::string all_x(n, 'X');
    for (std::uint32_t r = 0; r < (std::uint32_t(1) << n); ++r) {
      const int minus = std::popcount(r);
      if (minus < 2 || minus == n) continue;
      std::string outcomes(n, '+');
      for (int i = 0; i < n; ++i)
        if (r >> i & 1u) outcomes[i] = '-';
      targets.push_back({all_x, outcomes});
    }
    CHECK(int(targets.size()) == (1 << n) - n - 2);
    const auto verdicts = hyperbell::hardy_check_all(n, zero_events, targets);
    for (bool v : verdicts) CHECK(v);
  }
}

TEST_CASE("hardy_check is monotone under added constraints") {
  std::mt19937 rng(31415);
  const auto zero_events = stabilizer_zero_events(Hypergraph::single_edge(4));
  const MeasurementEvent target{"XXXX", "+--+"};
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<MeasurementEvent> subset, superset;
    for (const auto& ev : zero_events) {
      const bool in_subset = rng() & 1u;
      if (in_subset) subset.push_back(ev);
      superset.push_back(ev);
    }
    const bool small = hardy_check(4, subset, target);
    const bool big = hardy_check(4, superset, target);
    if (small) CHECK(big);  // adding zero events never flips true -> false
  }
}

TEST_CASE("enumeration caps") {
  CHECK_THROWS_AS(hardy_check(13, {}, {"X", "+"}), std::invalid_argument);
  CHECK_THROWS_AS(brute_classical_max(build_expression(Family::mermin_even, 11)),
                  std::invalid_argument);
}

TEST_CASE("brute-force classical bounds match the formula") {
  for (int n = 2; n <= 7; ++n) {
    const Dyadic formula = hyperbell::classical_bound_formula(Family::mermin_even, n);
    CHECK(brute_classical_max(build_expression(Family::mermin_even, n)) == formula);
    CHECK(brute_classical_max(build_expression(Family::mermin_odd, n)) == formula);
  }
}

TEST_CASE("hardy forms are nonnegative over local models") {
  for (int n = 3; n <= 6; ++n) {
    const auto e = build_expression(Family::hardyN, n);
    CHECK(brute_classical_min(e) == Dyadic(0));
    CHECK(brute_classical_max(e) > Dyadic(0));
  }
  // svetlichny3 over fully local models is also nonnegative
  CHECK(brute_classical_min(build_expression(Family::svetlichny3, 3)) == Dyadic(0));
}

namespace {

// Slow reference: evaluate an expression under one deterministic assignment
// by interpreting each term semantically (no bitmask tricks).
Dyadic evaluate_assignment(const hyperbell::BellExpression& expr,
                           const std::vector<std::pair<int, int>>& xz_outcomes) {
  Dyadic acc = 0;
  for (const auto& t : expr.terms) {
    if (t.kind == hyperbell::Term::Kind::probability) {
      bool produced = true;
      for (int i = 0; i < expr.parties && produced; ++i) {
        const int out = t.layout[i] == 'X' ? xz_outcomes[i].first : xz_outcomes[i].second;
        produced = out == (t.outcomes[i] == '+' ? +1 : -1);
      }
      if (produced) acc += t.coefficient;
    } else {
      int prod = 1;
      for (int i = 0; i < expr.parties; ++i) {
        if (t.layout[i] == 'B') prod *= xz_outcomes[i].first;   // B = X
        if (t.layout[i] == 'A') prod *= xz_outcomes[i].second;  // A = Z
      }
      acc += t.coefficient * Dyadic(prod);
    }
  }
  return acc;
}

}  // namespace

TEST_CASE("the compiled scan matches a slow per-assignment evaluation") {
  for (auto family : {Family::hardy3, Family::svetlichny3, Family::mermin_even,
                      Family::mermin_odd}) {
    const auto expr = build_expression(family, 3);
    Dyadic slow_max = 0;
    bool first = true;
    for (unsigned a = 0; a < 64; ++a) {
      std::vector<std::pair<int, int>> outcomes(3);
      for (int i = 0; i < 3; ++i)
        outcomes[i] = {(a >> (2 * i) & 1u) ? -1 : +1, (a >> (2 * i + 1) & 1u) ? -1 : +1};
      const Dyadic v = evaluate_assignment(expr, outcomes);
      if (first || v > slow_max) slow_max = v;
      first = false;
    }
    CHECK(slow_max == brute_classical_max(expr));
  }
}

TEST_CASE("brute max dominates explicit assignments") {
  // all-plus deterministic assignment, evaluated by hand on mermin_even(4):
  // every correlator is +1, so the value is the coefficient sum
  const auto e = build_expression(Family::mermin_even, 4);
  Dyadic coeff_sum = 0;
  for (const auto& t : e.terms) coeff_sum += t.coefficient;
  CHECK(brute_classical_max(e) >= coeff_sum);
  CHECK(brute_classical_min(e) <= coeff_sum);
}
