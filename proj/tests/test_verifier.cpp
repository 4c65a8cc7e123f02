#include <cmath>
#include <memory>
#include <vector>

#include "doctest.h"
#include "hjnet/solvers.hpp"
#include "hjnet/verifier.hpp"

using namespace hjnet;

namespace {

std::shared_ptr<const NetworkGrid> star_grid(int n_edges, int nodes) {
  std::vector<EdgeSpec> edges;
  for (int j = 0; j < n_edges; ++j) {
    edges.push_back({1.0, 6.28318530717958647 * j / n_edges});
  }
  return std::make_shared<NetworkGrid>(StarNetwork(edges),
                                       std::vector<int>(n_edges, nodes));
}

Hamiltonian eikonal_control(int n_edges) {
  const std::vector<Action> acts = {{1.0, 1.0}, {-1.0, 1.0}};
  std::vector<EdgeHamiltonian> edges(n_edges, ControlFormEdge{acts, nullptr});
  return Hamiltonian(std::move(edges), 5.0);
}

// fills u(j, y) = f_j(y) on every edge
template <typename F>
NetworkFunction fill(std::shared_ptr<const NetworkGrid> g, F f) {
  NetworkFunction u(g);
  u.set_vertex_value(f(0, 0.0));
  for (int j = 0; j < g->num_edges(); ++j) {
    for (int i = 1; i <= g->nodes_per_edge(j); ++i) {
      u.set_value(j, i, f(j, g->node_y(j, i)));
    }
  }
  return u;
}

}  // namespace

TEST_CASE("differential estimation recovers linear slopes") {
  const auto g = star_grid(3, 64);
  // u = slope_j * y with slopes 1, -0.5, 0
  const double slopes[3] = {1.0, -0.5, 0.0};
  const NetworkFunction u =
      fill(g, [&](int j, double y) { return slopes[j] * y; });
  const VertexDifferentials d = estimate_differentials(u);
  REQUIRE(d.edges.size() == 3);
  for (int j = 0; j < 3; ++j) {
    CHECK_FALSE(d.edges[j].super_empty);
    CHECK_FALSE(d.edges[j].sub_empty);
    // bracket [super_lo, sub_hi] contains the true slope
    CHECK(d.edges[j].super_lo <= slopes[j] + 1e-12);
    CHECK(d.edges[j].sub_hi >= slopes[j] - 1e-12);
    CHECK(d.edges[j].sub_hi - d.edges[j].super_lo <=
          2.0 * d.slope_tolerance + 1e-12);
  }
}

TEST_CASE("diverging quotients empty the one-sided differential") {
  const auto g = star_grid(2, 256);
  // u = sqrt(y): quotients blow up near the vertex, so no superdifferential
  // test slope is finite (the subdifferential stays empty-free from above)
  const NetworkFunction u =
      fill(g, [](int, double y) { return std::sqrt(y); });
  const VertexDifferentials d = estimate_differentials(u);
  for (const EdgeDifferential& e : d.edges) {
    CHECK(e.quotient_spread > 1.0);
    // the smallest-scale quotient is the largest, so the supersolution side
    // (lower endpoint -> +inf) is marked empty
    CHECK(e.super_empty);
    CHECK_FALSE(e.sub_empty);
  }
}

TEST_CASE("junction checks on the exact eikonal solution and its shifts") {
  const auto g = star_grid(3, 50);
  const Hamiltonian h = eikonal_control(3);
  const double tol = 5.0 * g->max_spacing();

  SUBCASE("the solution u = 1 passes all six checks") {
    const NetworkFunction u = fill(g, [](int, double) { return 1.0; });
    const VerifierReport rep = run_all_checks(u, h, tol);
    CHECK(rep.acct_sub.status == CheckStatus::Pass);
    CHECK(rep.acct_super.status == CheckStatus::Pass);
    CHECK(rep.imz_sub.status == CheckStatus::Pass);
    CHECK(rep.imz_super.status == CheckStatus::Pass);
    CHECK(rep.cs_sub.status == CheckStatus::Pass);
    CHECK(rep.cs_super.status == CheckStatus::Pass);
    CHECK(rep.interior.passed);
    CHECK(rep.all_applicable_pass());
  }
  SUBCASE("u = 0 is a strict subsolution: super checks fail") {
    const NetworkFunction u = fill(g, [](int, double) { return 0.0; });
    const VertexDifferentials d = estimate_differentials(u);
    CHECK(check_imz(u, h, d, Role::Subsolution, tol).status ==
          CheckStatus::Pass);
    CHECK(check_imz(u, h, d, Role::Supersolution, tol).status ==
          CheckStatus::Fail);
    CHECK(check_acct(u, h, d, Role::Supersolution, tol).status ==
          CheckStatus::Fail);
    CHECK(check_cs(u, h, d, Role::Supersolution, tol).status ==
          CheckStatus::Fail);
  }
  SUBCASE("u = 2 is a strict supersolution: sub checks fail") {
    const NetworkFunction u = fill(g, [](int, double) { return 2.0; });
    const VertexDifferentials d = estimate_differentials(u);
    CHECK(check_imz(u, h, d, Role::Subsolution, tol).status ==
          CheckStatus::Fail);
    CHECK(check_imz(u, h, d, Role::Supersolution, tol).status ==
          CheckStatus::Pass);
    CHECK(check_acct(u, h, d, Role::Subsolution, tol).status ==
          CheckStatus::Fail);
    CHECK(check_cs(u, h, d, Role::Subsolution, tol).status ==
          CheckStatus::Fail);
  }
}

TEST_CASE("check equivalences across the three junction conditions") {
  // over a family of candidates the acct and imz verdicts agree exactly,
  // the cs subsolution verdict matches the imz one, and an imz
  // supersolution pass forces a cs supersolution pass
  const auto g = star_grid(3, 50);
  const Hamiltonian h = eikonal_control(3);
  const double tol = 5.0 * g->max_spacing();

  const SolveResult sol = solve_imz(h, g, {});
  REQUIRE(sol.converged);

  std::vector<NetworkFunction> candidates;
  candidates.push_back(sol.solution);
  for (double c : {-1.0, -0.5, 0.5, 1.0}) {
    NetworkFunction u = sol.solution;
    u.set_vertex_value(u.vertex_value() + c);
    for (int j = 0; j < 3; ++j) {
      for (int i = 1; i <= 50; ++i) u.set_value(j, i, u.value(j, i) + c);
    }
    candidates.push_back(u);
  }
  candidates.push_back(fill(g, [](int, double) { return 0.0; }));
  candidates.push_back(fill(g, [](int, double) { return 2.0; }));
  candidates.push_back(fill(g, [](int j, double y) { return 0.3 * y; }));
  candidates.push_back(
      fill(g, [](int j, double y) { return 1.0 - 0.5 * y; }));
  {
    NetworkFunction bump = sol.solution;
    bump.set_vertex_value(bump.vertex_value() + 0.2);
    candidates.push_back(bump);
  }

  REQUIRE(candidates.size() >= 10);
  for (const NetworkFunction& u : candidates) {
    const VertexDifferentials d = estimate_differentials(u);
    for (const Role role : {Role::Subsolution, Role::Supersolution}) {
      const CheckEntry a = check_acct(u, h, d, role, tol);
      const CheckEntry m = check_imz(u, h, d, role, tol);
      CHECK(a.status == m.status);
      const CheckEntry c = check_cs(u, h, d, role, tol);
      if (role == Role::Subsolution) {
        CHECK(c.status == m.status);
      } else if (m.status == CheckStatus::Pass) {
        CHECK(c.status == CheckStatus::Pass);
      }
    }
  }
}

TEST_CASE("cs checks are not applicable without vertex continuity") {
  const auto g = star_grid(2, 30);
  std::vector<EdgeHamiltonian> edges;
  edges.push_back(ControlFormEdge{{{1.0, 1.0}, {-1.0, 1.0}}, nullptr});
  edges.push_back(ControlFormEdge{{{1.0, 2.0}, {-1.0, 2.0}}, nullptr});
  const Hamiltonian h(std::move(edges), 5.0);
  const NetworkFunction u = fill(g, [](int, double) { return 1.0; });
  const VertexDifferentials d = estimate_differentials(u);
  const CheckEntry c = check_cs(u, h, d, Role::Subsolution, 0.1);
  CHECK(c.status == CheckStatus::NotApplicable);
  CHECK_FALSE(c.note.empty());
}

TEST_CASE("acct check requires a control-form hamiltonian") {
  const auto g = star_grid(2, 30);
  std::vector<EdgeHamiltonian> edges(
      2, EdgeHamiltonian{ClosedFormEdge{
             [](double, double p) { return std::fabs(p) - 1.0; }, "eikonal"}});
  const Hamiltonian h(std::move(edges), 5.0);
  const NetworkFunction u = fill(g, [](int, double) { return 1.0; });
  const VertexDifferentials d = estimate_differentials(u);
  CHECK(check_acct(u, h, d, Role::Subsolution, 0.1).status ==
        CheckStatus::NotApplicable);
  // the flux-limiter check itself works on closed forms
  CHECK(check_imz(u, h, d, Role::Subsolution, 0.1).status ==
        CheckStatus::Pass);
}

TEST_CASE("difference-quotient limit check separates solutions from shifts") {
  const auto g = star_grid(3, 64);
  const Hamiltonian h = eikonal_control(3);
  const SolveResult sol = solve_imz(h, g, {});
  REQUIRE(sol.converged);
  const double tol = 5.0 * g->max_spacing();

  for (int j = 0; j < 3; ++j) {
    CHECK(check_lemma54(sol.solution, h, j, 4, tol).status ==
          CheckStatus::Pass);
  }

  NetworkFunction up = sol.solution;
  up.set_vertex_value(up.vertex_value() + 1.0);
  for (int j = 0; j < 3; ++j) {
    for (int i = 1; i <= 64; ++i) up.set_value(j, i, up.value(j, i) + 1.0);
  }
  for (int j = 0; j < 3; ++j) {
    CHECK(check_lemma54(up, h, j, 4, tol).status == CheckStatus::Fail);
  }

  // requesting more halvings than the grid supports is an error
  CHECK_THROWS(check_lemma54(sol.solution, h, 0, 12, tol));
}

TEST_CASE("interior audit localizes a planted defect") {
  const auto g = star_grid(2, 40);
  const Hamiltonian h = eikonal_control(2);
  const SolveResult sol = solve_imz(h, g, {});
  REQUIRE(sol.converged);
  CHECK(check_interior(sol.solution, h, 1e-8).passed);

  NetworkFunction bad = sol.solution;
  bad.set_value(1, 20, bad.value(1, 20) - 0.4);
  const InteriorReport rep = check_interior(bad, h, 1e-8);
  CHECK_FALSE(rep.passed);
  CHECK(rep.worst_edge == 1);
  CHECK(std::abs(rep.worst_node - 20) <= 1);
}
