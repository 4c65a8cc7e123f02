#include "hjnet/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hjnet/solvers.hpp"

namespace hjnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp_to(double p, double lo, double hi) {
  return std::min(std::max(p, lo), hi);
}

}  // namespace

VertexDifferentials estimate_differentials(const NetworkFunction& u,
                                           const DifferentialOptions& opts) {
  const NetworkGrid& g = u.grid();
  if (opts.scales.empty()) {
    throw std::invalid_argument("estimate_differentials: empty scale list");
  }
  VertexDifferentials d;
  d.slope_tolerance = opts.slope_tolerance >= 0.0
                          ? opts.slope_tolerance
                          : 2.0 * g.max_spacing() * opts.curvature_bound;
  d.edges.resize(g.num_edges());
  for (int j = 0; j < g.num_edges(); ++j) {
    double qmin = kInf, qmax = -kInf, q_small = 0.0;
    for (int m : opts.scales) {
      if (m < 1 || m > g.nodes_per_edge(j)) {
        throw std::invalid_argument(
            "estimate_differentials: scale " + std::to_string(m) +
            " exceeds the grid on edge " + std::to_string(j + 1));
      }
      const double q = (u.value(j, m) - u.vertex_value()) / g.node_y(j, m);
      if (m == *std::min_element(opts.scales.begin(), opts.scales.end())) {
        q_small = q;
      }
      qmin = std::min(qmin, q);
      qmax = std::max(qmax, q);
    }
    EdgeDifferential& e = d.edges[j];
    e.quotient_spread = qmax - qmin;
    e.super_lo = qmax - d.slope_tolerance;
    e.sub_hi = qmin + d.slope_tolerance;
    if (e.quotient_spread > opts.divergence_threshold) {
      // quotients blowing up at the smallest scale: the corresponding
      // one-sided set is estimated empty
      if (q_small >= qmax - 1e-12) e.super_empty = true;
      if (q_small <= qmin + 1e-12) e.sub_empty = true;
    }
  }
  return d;
}

namespace {

// Shared body of the ACCT and IMZ vertex checks: both reduce to
// u(v) + max_j G_j(binding slope) against the tolerance, where G_j is
// non-increasing in the test slope. `edge_value(j, q)` supplies G_j.
template <typename EdgeValue>
CheckEntry monotone_vertex_check(const NetworkFunction& u,
                                 const VertexDifferentials& d, Role role,
                                 double tol, EdgeValue edge_value) {
  CheckEntry e;
  const int n = static_cast<int>(d.edges.size());

  // A C^1_* test function needs an admissible slope on every edge at once;
  // one empty per-edge set empties the whole family.
  for (int j = 0; j < n; ++j) {
    const bool empty = (role == Role::Subsolution) ? d.edges[j].super_empty
                                                   : d.edges[j].sub_empty;
    if (empty) {
      e.status = CheckStatus::Pass;
      e.vacuous = true;
      e.violation = -kInf;
      e.witness_edge = j;
      e.note = "vacuous: empty test family";
      return e;
    }
  }

  double worst = -kInf;
  for (int j = 0; j < n; ++j) {
    const double q = (role == Role::Subsolution) ? d.edges[j].super_lo
                                                 : d.edges[j].sub_hi;
    const double val = edge_value(j, q);
    if (val > worst) {
      worst = val;
      e.witness_edge = j;
      e.witness_slope = q;
    }
  }
  const double value = u.vertex_value() + worst;
  e.violation = (role == Role::Subsolution) ? value : -value;
  e.status = e.violation <= tol ? CheckStatus::Pass : CheckStatus::Fail;
  return e;
}

}  // namespace

CheckEntry check_imz(const NetworkFunction& u, const Hamiltonian& h,
                     const VertexDifferentials& d, Role role, double tol) {
  return monotone_vertex_check(
      u, d, role, tol, [&](int j, double q) { return h.h_minus(j, q); });
}

CheckEntry check_acct(const NetworkFunction& u, const Hamiltonian& h,
                      const VertexDifferentials& d, Role role, double tol) {
  if (!h.is_control_form()) {
    CheckEntry e;
    e.status = CheckStatus::NotApplicable;
    e.note = "control form required";
    return e;
  }
  std::vector<FLSet> fl;
  fl.reserve(h.num_edges());
  for (int j = 0; j < h.num_edges(); ++j) fl.push_back(fl_set(h, j));
  return monotone_vertex_check(
      u, d, role, tol, [&](int j, double q) { return fl_support(fl[j], q); });
}

CheckEntry check_cs(const NetworkFunction& u, const Hamiltonian& h,
                    const VertexDifferentials& d, Role role, double tol) {
  CheckEntry e;
  const AssumptionReport ar = h.check_assumptions(u.grid().network());
  if (!ar.vertex_continuity.passed || !ar.vertex_symmetry.passed) {
    e.status = CheckStatus::NotApplicable;
    e.note = !ar.vertex_continuity.passed
                 ? "vertex continuity hypothesis fails"
                 : "vertex symmetry hypothesis fails";
    return e;
  }
  const int n = h.num_edges();
  const double uv = u.vertex_value();
  auto H = [&](double p) { return h.eval(0, 0.0, p); };

  if (role == Role::Subsolution) {
    // (j,k)-upper tests carry slopes q in [super_lo_j, -super_lo_k]; the max
    // of the quasiconvex profile over an interval sits at an endpoint.
    double worst = -kInf;
    bool any_family = false;
    for (int j = 0; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        if (d.edges[j].super_empty || d.edges[k].super_empty) continue;
        const double lo = d.edges[j].super_lo;
        const double hi = -d.edges[k].super_lo;
        if (lo > hi) continue;  // empty admissible family for this pair
        any_family = true;
        for (double q : {lo, hi}) {
          const double val = uv + H(q);
          if (val > worst) {
            worst = val;
            e.witness_edge = j;
            e.witness_edge2 = k;
            e.witness_slope = q;
          }
        }
      }
    }
    if (!any_family) {
      e.status = CheckStatus::Pass;
      e.vacuous = true;
      e.violation = -kInf;
      e.note = "vacuous: no admissible pair test";
      return e;
    }
    e.violation = worst;
    e.status = e.violation <= tol ? CheckStatus::Pass : CheckStatus::Fail;
    return e;
  }

  // Supersolution: for each j find a feasible k (ascending, first success).
  // Admissible (j,k)-lower test slopes lie in [-sub_hi_k, sub_hi_j]; the min
  // of the profile over the interval is at the projection of the minimizer.
  const double p0 = h.argmin_p(0);
  double worst = -kInf;
  for (int j = 0; j < n; ++j) {
    double best_shortfall = kInf;
    int chosen = -1;
    for (int k = 0; k < n && chosen < 0; ++k) {
      if (k == j) continue;
      if (d.edges[j].sub_empty || d.edges[k].sub_empty) {
        chosen = k;  // no admissible pair test: k feasible vacuously
        best_shortfall = -kInf;
        break;
      }
      const double lo = -d.edges[k].sub_hi;
      const double hi = d.edges[j].sub_hi;
      if (lo > hi) {
        chosen = k;  // empty admissible family
        best_shortfall = -kInf;
        break;
      }
      const double q = clamp_to(p0, lo, hi);
      const double shortfall = -(uv + H(q));  // pass iff <= tol
      if (shortfall <= tol) {
        chosen = k;
        best_shortfall = shortfall;
      } else if (shortfall < best_shortfall) {
        best_shortfall = shortfall;
        e.witness_slope = q;
      }
    }
    if (chosen >= 0) {
      e.feasible_edge[j] = chosen;
      if (best_shortfall > worst && best_shortfall > -kInf) {
        worst = best_shortfall;
        e.witness_edge = j;
        e.witness_edge2 = chosen;
      }
    } else {
      if (best_shortfall > worst) {
        worst = best_shortfall;
        e.witness_edge = j;
      }
    }
  }
  if (worst == -kInf) {
    e.vacuous = true;
    worst = -kInf;
  }
  e.violation = worst;
  e.status = (static_cast<int>(e.feasible_edge.size()) == n)
                 ? CheckStatus::Pass
                 : CheckStatus::Fail;
  return e;
}

InteriorReport check_interior(const NetworkFunction& u, const Hamiltonian& h,
                              double tol) {
  const NetworkGrid& g = u.grid();
  InteriorReport rep;
  for (int j = 0; j < g.num_edges(); ++j) {
    const double dy = g.spacing(j);
    for (int i = 1; i < g.nodes_per_edge(j); ++i) {
      const double pl = (u.value(j, i) - u.value(j, i - 1)) / dy;
      const double pr = (u.value(j, i + 1) - u.value(j, i)) / dy;
      const double r =
          u.value(j, i) + godunov_flux(h, j, g.node_y(j, i), pl, pr);
      if (std::fabs(r) > std::fabs(rep.worst)) {
        rep.worst = r;
        rep.worst_edge = j;
        rep.worst_node = i;
      }
    }
  }
  rep.passed = std::fabs(rep.worst) <= tol;
  return rep;
}

CheckEntry check_lemma54(const NetworkFunction& u, const Hamiltonian& h, int j,
                         int depth, double tol) {
  const NetworkGrid& g = u.grid();
  if (depth < 1) throw std::invalid_argument("check_lemma54: depth must be >= 1");
  if ((1 << (depth - 1)) > g.nodes_per_edge(j)) {
    throw std::invalid_argument(
        "check_lemma54: depth exceeds the available scales on edge " +
        std::to_string(j + 1));
  }
  CheckEntry e;
  e.witness_edge = j;
  const double uv = u.vertex_value();
  double best = kInf;
  for (int level = depth - 1; level >= 0; --level) {
    const int m = 1 << level;  // descending node scales ... 8, 4, 2, 1
    const double ym = g.node_y(j, m);
    const double q = (u.value(j, m) - uv) / ym;
    const double val = uv + h.eval(j, 0.0, q);
    if (val < best) {
      best = val;
      e.witness_slope = q;
    }
  }
  e.violation = best;  // finite-scale surrogate for the limit bound
  e.status = best <= tol ? CheckStatus::Pass : CheckStatus::Fail;
  return e;
}

bool VerifierReport::all_applicable_pass() const {
  for (const CheckEntry* c :
       {&acct_sub, &acct_super, &imz_sub, &imz_super, &cs_sub, &cs_super}) {
    if (c->status == CheckStatus::Fail) return false;
  }
  return true;
}

VerifierReport run_all_checks(const NetworkFunction& u, const Hamiltonian& h,
                              double tol, const DifferentialOptions& dopts) {
  VerifierReport rep;
  rep.tolerance = tol;
  const VertexDifferentials d = estimate_differentials(u, dopts);
  rep.slope_tolerance = d.slope_tolerance;
  rep.acct_sub = check_acct(u, h, d, Role::Subsolution, tol);
  rep.acct_super = check_acct(u, h, d, Role::Supersolution, tol);
  rep.imz_sub = check_imz(u, h, d, Role::Subsolution, tol);
  rep.imz_super = check_imz(u, h, d, Role::Supersolution, tol);
  rep.cs_sub = check_cs(u, h, d, Role::Subsolution, tol);
  rep.cs_super = check_cs(u, h, d, Role::Supersolution, tol);
  rep.interior = check_interior(u, h, tol);
  const int max_m = [&] {
    int m = u.grid().nodes_per_edge(0);
    for (int j = 1; j < u.grid().num_edges(); ++j) {
      m = std::min(m, u.grid().nodes_per_edge(j));
    }
    return m;
  }();
  int depth = 1;
  while (depth < 4 && (1 << depth) <= max_m) ++depth;
  for (int j = 0; j < u.grid().num_edges(); ++j) {
    rep.lemma54.push_back(check_lemma54(u, h, j, depth, tol));
  }
  rep.boundary_note =
      "outer endpoints closed with the state-constraint condition unless a "
      "Dirichlet value is given";
  return rep;
}

}  // namespace hjnet
