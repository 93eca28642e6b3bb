#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "hyperbell/hypergraph.hpp"
#include "hyperbell/lhv.hpp"
#include "hyperbell/polytope.hpp"
#include "hyperbell/sign_state.hpp"
#include "hyperbell/simplex.hpp"

using hyperbell::Behavior;
using hyperbell::Dyadic;
using hyperbell::Hypergraph;
using hyperbell::Model;
using hyperbell::SignState;
using hyperbell::SimplexSolver;
using hyperbell::SimplexStatus;
using hyperbell::Vertex;
using hyperbell::behavior_table;
using hyperbell::hybrid_vertices_3party;
using hyperbell::is_nonsignalling;
using hyperbell::local_vertices_3party;
using hyperbell::lp_membership;
using hyperbell::noise_threshold;
using hyperbell::ns_vertices_2party;

TEST_CASE("two-party vertex list") {
  const auto vs = ns_vertices_2party();
  CHECK(vs.size() == 24);
  for (const auto& v : vs) {
    CHECK(is_nonsignalling(v, 2));
    // normalized per setting
    for (unsigned s = 0; s < 4; ++s) {
      Dyadic total = 0;
      for (unsigned r = 0; r < 4; ++r) total += v.p[(s << 2) | r];
      CHECK(total == Dyadic(1));
    }
  }
  // first deterministic box: both outcomes +
  CHECK(vs[0].p[0] == Dyadic(1));
  // canonical PR box (alpha=beta=gamma=0): anti-correlated only at x=y=1
  const auto& pr = vs[16];
  CHECK(pr.p[(3 << 2) | 0] == Dyadic(0));  // P(++|11)
  CHECK(pr.p[(3 << 2) | 3] == Dyadic(0));  // P(--|11)
  CHECK(pr.p[(3 << 2) | 1] == Dyadic::pow2(-1));
  CHECK(pr.p[(3 << 2) | 2] == Dyadic::pow2(-1));
  CHECK(pr.p[0] == Dyadic::pow2(-1));      // P(++|00)
}

TEST_CASE("hybrid vertex list: 288 nonsignalling, normalized vertices") {
  const auto vs = hybrid_vertices_3party();
  CHECK(vs.size() == 288);
  for (const auto& v : vs) {
    CHECK(is_nonsignalling(v, 3));
    for (unsigned s = 0; s < 8; ++s) {
      Dyadic total = 0;
      for (unsigned r = 0; r < 8; ++r) total += v.p[(s << 3) | r];
      CHECK(total == Dyadic(1));
    }
  }
  CHECK(local_vertices_3party().size() == 64);

  // a fully deterministic product vertex shows up once per bipartition
  const auto locals = local_vertices_3party();
  int copies = 0;
  for (const auto& v : vs) copies += v.p == locals.front().p;
  CHECK(copies == 3);
}

TEST_CASE("every vertex is a member of its own polytope") {
  const auto vs = hybrid_vertices_3party();
  for (const auto& v : vs) {
    std::vector<double> p;
    for (const auto& d : v.p) p.push_back(d.to_double());
    CHECK(lp_membership(p, vs).member);
  }
}

TEST_CASE("H3 behavior: outside at low noise, inside at high noise") {
  const SignState st = SignState::build(Hypergraph::single_edge(3));
  const auto hybrid = hybrid_vertices_3party();

  const auto at0 = lp_membership(behavior_table(st, Dyadic(0)), hybrid);
  CHECK_FALSE(at0.member);
  CHECK(at0.violation == 1.0);
  // the returned certificate separates: lambda.p - C = 1, lambda.v <= C
  {
    const auto p = behavior_table(st, Dyadic(0)).as_doubles();
    double lp = 0;
    for (int i = 0; i < 64; ++i) lp += at0.lambda[i] * p[i];
    CHECK(lp - at0.bound_c == doctest::Approx(1.0));
    for (const auto& v : hybrid) {
      double lv = 0;
      for (int i = 0; i < 64; ++i) lv += at0.lambda[i] * v.p[i].to_double();
      CHECK(lv - at0.bound_c <= 1e-7);
    }
  }

  CHECK(lp_membership(behavior_table(st, Dyadic(1)), hybrid).member);
  // 0.10 exceeds the hybrid threshold
  CHECK(lp_membership(behavior_table(st, Dyadic::ratio(0x1999999a, 32)), hybrid).member);

  // convexity along the noise path: member stays member
  bool was_member = false;
  for (int k = 1; k <= 5; ++k) {
    const bool member = lp_membership(behavior_table(st, Dyadic::ratio(k, 3)), hybrid).member;
    if (was_member) CHECK(member);
    was_member = member;
  }
}

TEST_CASE("hardy-violating behavior sits outside the local polytope") {
  // cross-check with the assignment-enumeration oracle: the Hardy argument
  // says no deterministic model reproduces the zero events plus a positive
  // target, so the exact behavior must be outside the 64-vertex hull.
  const auto h = Hypergraph::single_edge(3);
  const SignState st = SignState::build(h);
  const auto zero_events = hyperbell::stabilizer_zero_events(h);
  CHECK(hyperbell::hardy_check(3, zero_events, {"XXX", "+--"}));
  CHECK(hyperbell::outcome_probability(st, hyperbell::parse_settings("XXX"),
                                       hyperbell::parse_outcomes("+--")) > Dyadic(0));
  CHECK_FALSE(lp_membership(behavior_table(st, Dyadic(0)), local_vertices_3party()).member);

  // while a product state is local from the start
  const SignState plus = SignState::build(Hypergraph(3, {}));
  CHECK(lp_membership(behavior_table(plus, Dyadic(0)), local_vertices_3party()).member);
}

TEST_CASE("noise thresholds") {
  const auto h3 = Hypergraph::single_edge(3);

  const auto hybrid = noise_threshold(h3, Model::hybrid, 1e-4);
  CHECK_FALSE(hybrid.member_at_zero);
  CHECK(hybrid.epsilon == doctest::Approx(1.0 / 13).epsilon(2e-2));
  CHECK(std::fabs(hybrid.epsilon - 1.0 / 13) < 1e-3);

  // the full-local boundary sits at exactly 1/5: just below, a separating
  // certificate exists; just above, the LP exhibits a convex decomposition
  const auto local = noise_threshold(h3, Model::full_local, 1e-4);
  CHECK(std::fabs(local.epsilon - 0.2) < 1e-3);

  const auto product = noise_threshold(Hypergraph(3, {}), Model::hybrid, 1e-4);
  CHECK(product.member_at_zero);
  CHECK(product.epsilon == 0.0);

  CHECK_THROWS_AS(noise_threshold(Hypergraph::single_edge(4), Model::hybrid, 1e-4),
                  std::invalid_argument);
  CHECK_THROWS_AS(noise_threshold(h3, Model::hybrid, 1e-7), std::invalid_argument);
}

TEST_CASE("state behaviors are nonsignalling by construction") {
  std::mt19937 rng(99);
  for (int rep = 0; rep < 6; ++rep) {
    std::vector<std::uint32_t> masks;
    std::uniform_int_distribution<std::uint32_t> dist(1, 7);
    for (int e = 0; e < 5; ++e) masks.push_back(dist(rng));
    const SignState st = SignState::build(Hypergraph::from_edge_masks(3, masks));
    for (const Dyadic& eps : {Dyadic(0), Dyadic::ratio(1, 2), Dyadic::pow2(-1)}) {
      const Behavior b = behavior_table(st, eps);
      Vertex as_vertex;
      for (std::uint32_t s = 0; s < 8; ++s)
        for (std::uint32_t r = 0; r < 8; ++r) as_vertex.p.push_back(b.entry(s, r));
      CHECK(is_nonsignalling(as_vertex, 3));
    }
  }
}

TEST_CASE("simplex edge cases") {
  const SimplexSolver solver;

  // infeasible equality system: x1 + x2 = 1 and x1 + x2 = 3, x >= 0
  const auto inf = solver.solve_equality_form({{1, 1}, {1, 1}}, {1, 3}, {0, 0});
  REQUIRE(inf.status == SimplexStatus::infeasible);
  CHECK(inf.objective > 0.5);
  // Farkas: y.A <= 0 columnwise, y.b > 0
  CHECK(inf.y[0] + inf.y[1] <= 1e-9);
  CHECK(inf.y[0] + 3 * inf.y[1] > 1e-9);

  // unbounded: max x subject to -x <= 1
  const auto unb = solver.maximize_inequality_form({{-1.0}}, {1.0}, {1.0});
  CHECK(unb.status == SimplexStatus::unbounded);

  // degenerate but bounded: max x + y with x <= 0, y <= 0, x + y <= 0
  const auto deg = solver.maximize_inequality_form({{1, 0}, {0, 1}, {1, 1}}, {0, 0, 0}, {1, 1});
  REQUIRE(deg.status == SimplexStatus::optimal);
  CHECK(deg.objective == doctest::Approx(0.0));
}

TEST_CASE("generic simplex wrapper solves the separating LP directly") {
  // dual route for the membership question at eps = 0: maximize
  // lambda.p - C subject to lambda.v - C <= 0 and lambda.p - C <= 1
  const SignState st = SignState::build(Hypergraph::single_edge(3));
  const auto p = behavior_table(st, Dyadic(0)).as_doubles();
  const auto verts = hybrid_vertices_3party();

  std::vector<std::vector<double>> A;
  std::vector<double> b;
  for (const auto& v : verts) {
    std::vector<double> row(65, 0.0);
    for (int i = 0; i < 64; ++i) row[i] = v.p[i].to_double();
    row[64] = -1.0;
    A.push_back(std::move(row));
    b.push_back(0.0);
  }
  std::vector<double> cap(65, 0.0);
  for (int i = 0; i < 64; ++i) cap[i] = p[i];
  cap[64] = -1.0;
  A.push_back(cap);
  b.push_back(1.0);

  std::vector<double> c(65, 0.0);
  for (int i = 0; i < 64; ++i) c[i] = p[i];
  c[64] = -1.0;

  const SimplexSolver solver;
  const auto r = solver.maximize_inequality_form(A, b, c);
  REQUIRE(r.status == SimplexStatus::optimal);
  CHECK(r.objective == doctest::Approx(1.0));  // outside: capped optimum

  // and a small textbook instance: max x+y, x<=2, y<=3, x+y<=4
  const auto tiny = solver.maximize_inequality_form(
      {{1, 0}, {0, 1}, {1, 1}}, {2, 3, 4}, {1, 1});
  REQUIRE(tiny.status == SimplexStatus::optimal);
  CHECK(tiny.objective == doctest::Approx(4.0));
}
