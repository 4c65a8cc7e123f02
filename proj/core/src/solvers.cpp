#include "hjnet/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hjnet {

namespace {

std::vector<BoundaryCondition> resolve_boundary(const SolveOptions& opts,
                                                int num_edges) {
  if (opts.boundary.empty()) {
    return std::vector<BoundaryCondition>(num_edges, BoundaryCondition{});
  }
  if (static_cast<int>(opts.boundary.size()) != num_edges) {
    throw std::invalid_argument("SolveOptions: boundary list size mismatch");
  }
  return opts.boundary;
}

void validate_common(const Hamiltonian& h, const NetworkGrid& grid,
                     const SolveOptions& opts) {
  if (h.num_edges() != grid.num_edges()) {
    throw std::invalid_argument("solver: Hamiltonian/grid edge count mismatch");
  }
  if (!(opts.damping > 0.0) || opts.damping > 1.0) {
    throw std::invalid_argument("SolveOptions: damping must be in (0, 1]");
  }
  if (!(opts.residual_tolerance > 0.0)) {
    throw std::invalid_argument("SolveOptions: residual_tolerance must be > 0");
  }
}

// Root of an increasing scalar map by bracket expansion + bisection.
template <typename F>
double solve_increasing(F f, double lo, double hi, const std::string& where) {
  double flo = f(lo), fhi = f(hi);
  for (int k = 0; k < 60 && flo > 0.0; ++k) {
    lo -= (hi - lo);
    flo = f(lo);
  }
  for (int k = 0; k < 60 && fhi < 0.0; ++k) {
    hi += (hi - lo);
    fhi = f(hi);
  }
  if (flo > 0.0 || fhi < 0.0) {
    throw std::runtime_error("bisection bracket failure at " + where +
                             " (increase p_max or the bracket bound)");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-15 * (1.0 + std::fabs(mid))) break;
    (f(mid) <= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double sup_diff(const NetworkFunction& a, const NetworkFunction& b) {
  double s = std::fabs(a.vertex_value() - b.vertex_value());
  for (int j = 0; j < a.grid().num_edges(); ++j) {
    for (int i = 1; i <= a.grid().nodes_per_edge(j); ++i) {
      s = std::max(s, std::fabs(a.value(j, i) - b.value(j, i)));
    }
  }
  return s;
}

double imz_residual_at(const NetworkFunction& u, const Hamiltonian& h,
                       const std::vector<BoundaryCondition>& bc, int j, int i) {
  const NetworkGrid& g = u.grid();
  const double dy = g.spacing(j);
  const int m = g.nodes_per_edge(j);
  if (i == m) {
    if (bc[j].type == BoundaryType::Dirichlet) {
      return u.value(j, m) - bc[j].value;
    }
    const double back = (u.value(j, m) - u.value(j, m - 1)) / dy;
    return u.value(j, m) +
           h.eval(j, g.network().length(j), std::max(back, h.argmin_p(j)));
  }
  const double pl = (u.value(j, i) - u.value(j, i - 1)) / dy;
  const double pr = (u.value(j, i + 1) - u.value(j, i)) / dy;
  return u.value(j, i) + godunov_flux(h, j, g.node_y(j, i), pl, pr);
}

double imz_vertex_residual(const NetworkFunction& u, const Hamiltonian& h) {
  double m = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < u.grid().num_edges(); ++j) {
    const double q =
        (u.value(j, 1) - u.vertex_value()) / u.grid().spacing(j);
    m = std::max(m, h.h_minus(j, q));
  }
  return u.vertex_value() + m;
}

// ---- semi-Lagrangian machinery ------------------------------------------

// One DP candidate at a node: the foot of the step lands between grid nodes
// k and k+1 of the carrying edge, with interpolation weight t on node k+1.
struct Cand {
  int edge = 0;
  int k = 0;
  double t = 0.0;
  double cost = 0.0;
};

struct SLTables {
  double h = 0.0;
  std::vector<BoundaryCondition> bc;
  std::vector<Cand> vertex;                          // candidates at v
  std::vector<std::vector<std::vector<Cand>>> node;  // [j][i-1] for i=1..M_j
};

double max_action_speed(const Hamiltonian& h) {
  double s = 0.0;
  for (int j = 0; j < h.num_edges(); ++j) {
    for (const Action& a : h.actions(j)) s = std::max(s, std::fabs(a.speed));
  }
  return s;
}

Cand make_cand(const NetworkGrid& g, int j, double foot, double cost) {
  const double dy = g.spacing(j);
  const int m = g.nodes_per_edge(j);
  double pos = foot / dy;
  int k = static_cast<int>(std::floor(pos));
  double t = pos - k;
  if (k >= m) {
    k = m - 1;
    t = 1.0;
  }
  if (k < 0) {
    k = 0;
    t = 0.0;
  }
  return Cand{j, k, t, cost};
}

// Sampled boundary of the convex hull of a finite (speed, cost) point set:
// extreme points plus a uniform subdivision of every hull segment. The DP
// objective is piecewise linear in the speed, so minima sit at extreme
// points or at interpolation kinks; the sampling bounds the kink error.
std::vector<std::array<double, 2>> hull_boundary_samples(
    std::vector<std::array<double, 2>> pts) {
  constexpr int kSamplesPerSegment = 33;
  auto hull = convex_hull(std::move(pts));
  std::vector<std::array<double, 2>> out = hull;
  const size_t n = hull.size();
  if (n < 2) return out;
  const size_t nseg = (n == 2) ? 1 : n;
  for (size_t s = 0; s < nseg; ++s) {
    const auto& a = hull[s];
    const auto& b = hull[(s + 1) % n];
    for (int q = 1; q + 1 < kSamplesPerSegment; ++q) {
      const double t = static_cast<double>(q) / (kSamplesPerSegment - 1);
      out.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])});
    }
  }
  return out;
}

SLTables build_sl_tables(const Hamiltonian& h, const NetworkGrid& g,
                         double step, const std::vector<BoundaryCondition>& bc,
                         bool with_hull) {
  SLTables tab;
  tab.h = step;
  tab.bc = bc;
  tab.node.resize(g.num_edges());

  for (int j = 0; j < g.num_edges(); ++j) {
    const double l = g.network().length(j);
    const int m = g.nodes_per_edge(j);

    std::vector<std::array<double, 2>> moves;  // (speed, base cost)
    if (with_hull) {
      std::vector<std::array<double, 2>> pts;
      for (const Action& a : h.actions(j)) pts.push_back({a.speed, a.cost});
      moves = hull_boundary_samples(std::move(pts));
    } else {
      for (const Action& a : h.actions(j)) moves.push_back({a.speed, a.cost});
    }

    // At a state-constrained outer endpoint only inward or zero motion is
    // admissible; clamping outward feet there would fake a cheap stay.
    std::vector<std::array<double, 2>> outer_moves;
    if (bc[j].type == BoundaryType::StateConstraint) {
      if (with_hull) {
        std::vector<std::array<double, 2>> pts;
        for (const Action& a : h.actions(j)) pts.push_back({-a.speed, a.cost});
        for (auto& mv : clip_nonnegative_speed(std::move(pts))) {
          outer_moves.push_back({-mv[0], mv[1]});
        }
        outer_moves = hull_boundary_samples(std::move(outer_moves));
      } else {
        for (const Action& a : h.actions(j)) {
          if (a.speed <= 0.0) outer_moves.push_back({a.speed, a.cost});
        }
      }
      if (outer_moves.empty()) {
        throw std::invalid_argument(
            "semi-Lagrangian solver: no admissible control at the "
            "state-constrained endpoint of edge " + std::to_string(j + 1));
      }
    }

    tab.node[j].resize(m);
    for (int i = 1; i <= m; ++i) {
      const double y = g.node_y(j, i);
      const bool constrained_end =
          (i == m && bc[j].type == BoundaryType::StateConstraint);
      const auto& node_moves = constrained_end ? outer_moves : moves;
      auto& cands = tab.node[j][i - 1];
      cands.reserve(node_moves.size());
      for (const auto& mv : node_moves) {
        const double foot = std::clamp(y + step * mv[0], 0.0, l);
        double cost = mv[1];
        // x-dependent interior cost modifier, if declared for this edge
        cost += h.cost_at(j, y, Action{0.0, 0.0});
        cands.push_back(make_cand(g, j, foot, cost));
      }
    }

    // vertex candidates: outgoing (speed, cost) pairs of this edge
    std::vector<std::array<double, 2>> vmoves;
    if (with_hull) {
      const FLSet fl = fl_set(h, j);
      if (!fl.empty()) {
        std::vector<std::array<double, 2>> pts(fl.extreme_points.begin(),
                                               fl.extreme_points.end());
        vmoves = hull_boundary_samples(std::move(pts));
      }
    } else {
      for (const Action& a : h.actions(j)) {
        if (a.speed >= 0.0) vmoves.push_back({a.speed, a.cost});
      }
    }
    for (const auto& mv : vmoves) {
      const double foot = std::clamp(step * mv[0], 0.0, l);
      tab.vertex.push_back(make_cand(g, j, foot, mv[1]));
    }
  }
  if (tab.vertex.empty()) {
    throw std::invalid_argument(
        "semi-Lagrangian solver: no admissible control at the vertex "
        "(every edge has an empty outgoing action set)");
  }
  return tab;
}

// Per-candidate value with the self-referencing interpolation weight solved
// in place (the update stays a (1-h)-contraction in the other node values).
double cand_value(const NetworkFunction& u, const SLTables& tab,
                  const Cand& c, int self_edge, int self_node) {
  const double h = tab.h;
  const double lo = u.value(c.edge, c.k);
  const double hi = u.value(c.edge, c.k + 1);
  double w = 0.0, other;
  const bool k_is_self =
      (c.k == 0 && self_node == 0) || (c.edge == self_edge && c.k == self_node);
  const bool k1_is_self = (c.edge == self_edge && c.k + 1 == self_node);
  if (k_is_self) {
    w = 1.0 - c.t;
    other = c.t * hi;
  } else if (k1_is_self) {
    w = c.t;
    other = (1.0 - c.t) * lo;
  } else {
    other = (1.0 - c.t) * lo + c.t * hi;
  }
  return ((1.0 - h) * other + h * c.cost) / (1.0 - (1.0 - h) * w);
}

double best_value(const NetworkFunction& u, const SLTables& tab,
                  const std::vector<Cand>& cands, int self_edge,
                  int self_node) {
  double best = std::numeric_limits<double>::infinity();
  for (const Cand& c : cands) {
    best = std::min(best, cand_value(u, tab, c, self_edge, self_node));
  }
  return best;
}

// Plain (unresolved) one-step DP right-hand side, for residual reporting.
double plain_value(const NetworkFunction& u, const SLTables& tab,
                   const std::vector<Cand>& cands) {
  double best = std::numeric_limits<double>::infinity();
  for (const Cand& c : cands) {
    const double interp = (1.0 - c.t) * u.value(c.edge, c.k) +
                          c.t * u.value(c.edge, c.k + 1);
    best = std::min(best, (1.0 - tab.h) * interp + tab.h * c.cost);
  }
  return best;
}

double acct_residual_sup(const NetworkFunction& u, const SLTables& tab) {
  double sup = std::fabs(u.vertex_value() - plain_value(u, tab, tab.vertex)) /
               tab.h;
  for (int j = 0; j < u.grid().num_edges(); ++j) {
    const int m = u.grid().nodes_per_edge(j);
    for (int i = 1; i <= m; ++i) {
      double r;
      if (i == m && tab.bc[j].type == BoundaryType::Dirichlet) {
        r = u.value(j, m) - tab.bc[j].value;
      } else {
        r = (u.value(j, i) - plain_value(u, tab, tab.node[j][i - 1])) / tab.h;
      }
      sup = std::max(sup, std::fabs(r));
    }
  }
  return sup;
}

double pick_time_step(const Hamiltonian& h, const NetworkGrid& g,
                      const SolveOptions& opts) {
  const double vmax = max_action_speed(h);
  double step = opts.sl_time_step;
  if (step <= 0.0) step = g.min_spacing() / std::max(vmax, 1.0);
  if (!(step > 0.0) || step >= 1.0) {
    throw std::invalid_argument("semi-Lagrangian time step must be in (0, 1)");
  }
  if (step * vmax > g.min_spacing() * (1.0 + 1e-12)) {
    throw std::invalid_argument(
        "semi-Lagrangian step bound violated: h * max|speed| must not exceed "
        "the smallest grid spacing");
  }
  return step;
}

}  // namespace

double godunov_flux(const Hamiltonian& h, int j, double x, double p_left,
                    double p_right) {
  const double p0 = h.argmin_p(j);
  return std::max(h.eval(j, x, std::max(p_left, p0)),
                  h.eval(j, x, std::min(p_right, p0)));
}

SolveResult solve_imz(const Hamiltonian& h,
                      std::shared_ptr<const NetworkGrid> grid,
                      const SolveOptions& opts) {
  const NetworkGrid& g = *grid;
  validate_common(h, g, opts);
  const auto bc = resolve_boundary(opts, g.num_edges());
  for (int j = 0; j < g.num_edges(); ++j) h.argmin_p(j);  // fail early

  // bracket bound for the nodal scalar equations
  double max_h0 = 0.0, max_bv = 0.0;
  for (int j = 0; j < g.num_edges(); ++j) {
    for (int i = 0; i <= g.nodes_per_edge(j); ++i) {
      max_h0 = std::max(max_h0, std::fabs(h.eval(j, g.node_y(j, i), 0.0)));
    }
    if (bc[j].type == BoundaryType::Dirichlet) {
      max_bv = std::max(max_bv, std::fabs(bc[j].value));
    }
  }
  const double bound = 1.0 + max_h0 + max_bv;

  SolveResult res{NetworkFunction(grid), 0, 0.0, false, {}};
  NetworkFunction& u = res.solution;
  for (int j = 0; j < g.num_edges(); ++j) {
    if (bc[j].type == BoundaryType::Dirichlet) {
      u.set_value(j, g.nodes_per_edge(j), bc[j].value);
    }
  }

  auto damp = [&](double old_v, double root) {
    return old_v + opts.damping * (root - old_v);
  };

  double res_sup = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const NetworkFunction prev = u;
    const NetworkFunction& src = opts.jacobi ? prev : u;

    {  // vertex first
      auto f = [&](double w) {
        double m = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < g.num_edges(); ++j) {
          m = std::max(m, h.h_minus(j, (src.value(j, 1) - w) / g.spacing(j)));
        }
        return w + m;
      };
      u.set_vertex_value(
          damp(u.vertex_value(), solve_increasing(f, -bound, bound, "vertex")));
    }

    for (int j = 0; j < g.num_edges(); ++j) {
      const double dy = g.spacing(j);
      const int m = g.nodes_per_edge(j);
      for (int i = 1; i < m; ++i) {
        const double a = src.value(j, i - 1);
        const double b = src.value(j, i + 1);
        const double x = g.node_y(j, i);
        auto f = [&](double w) {
          return w + godunov_flux(h, j, x, (w - a) / dy, (b - w) / dy);
        };
        const std::string where = "edge " + std::to_string(j + 1) + ", node " +
                                  std::to_string(i);
        u.set_value(j, i,
                    damp(u.value(j, i), solve_increasing(f, -bound, bound, where)));
      }
      if (bc[j].type == BoundaryType::StateConstraint) {
        const double a = src.value(j, m - 1);
        const double l = g.network().length(j);
        const double p0 = h.argmin_p(j);
        auto f = [&](double w) {
          return w + h.eval(j, l, std::max((w - a) / dy, p0));
        };
        const std::string where = "edge " + std::to_string(j + 1) + ", outer node";
        u.set_value(j, m,
                    damp(u.value(j, m), solve_increasing(f, -bound, bound, where)));
      }
    }

    res.sweep_deltas.push_back(sup_diff(u, prev));
    res.iterations_used = it;

    res_sup = std::fabs(imz_vertex_residual(u, h));
    for (int j = 0; j < g.num_edges(); ++j) {
      for (int i = 1; i <= g.nodes_per_edge(j); ++i) {
        res_sup = std::max(res_sup, std::fabs(imz_residual_at(u, h, bc, j, i)));
      }
    }
    if (res_sup <= opts.residual_tolerance) {
      res.converged = true;
      break;
    }
  }
  res.final_residual = res_sup;
  return res;
}

SolveResult solve_acct(const Hamiltonian& h,
                       std::shared_ptr<const NetworkGrid> grid,
                       const SolveOptions& opts) {
  const NetworkGrid& g = *grid;
  validate_common(h, g, opts);
  if (!h.is_control_form()) {
    throw std::invalid_argument("solve_acct: control form required");
  }
  const auto bc = resolve_boundary(opts, g.num_edges());
  const double step = pick_time_step(h, g, opts);
  const SLTables tab = build_sl_tables(h, g, step, bc, /*with_hull=*/true);

  SolveResult res{NetworkFunction(grid), 0, 0.0, false, {}};
  NetworkFunction& u = res.solution;
  for (int j = 0; j < g.num_edges(); ++j) {
    if (bc[j].type == BoundaryType::Dirichlet) {
      u.set_value(j, g.nodes_per_edge(j), bc[j].value);
    }
  }

  const double delta_tol = opts.residual_tolerance * step;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const NetworkFunction prev = u;
    const NetworkFunction& src = opts.jacobi ? prev : u;

    u.set_vertex_value(u.vertex_value() +
                       opts.damping * (best_value(src, tab, tab.vertex, -1, 0) -
                                       u.vertex_value()));
    for (int j = 0; j < g.num_edges(); ++j) {
      const int m = g.nodes_per_edge(j);
      const int last = (bc[j].type == BoundaryType::Dirichlet) ? m - 1 : m;
      for (int i = 1; i <= last; ++i) {
        const double v = best_value(src, tab, tab.node[j][i - 1], j, i);
        u.set_value(j, i, u.value(j, i) + opts.damping * (v - u.value(j, i)));
      }
    }

    res.sweep_deltas.push_back(sup_diff(u, prev));
    res.iterations_used = it;
    if (res.sweep_deltas.back() <= delta_tol) {
      res.final_residual = acct_residual_sup(u, tab);
      if (res.final_residual <= opts.residual_tolerance) {
        res.converged = true;
        break;
      }
    }
  }
  if (!res.converged) res.final_residual = acct_residual_sup(u, tab);
  return res;
}

NetworkFunction oracle_dp(const Hamiltonian& h,
                          std::shared_ptr<const NetworkGrid> fine_grid,
                          double fine_h, int iterations,
                          const std::vector<BoundaryCondition>& boundary) {
  const NetworkGrid& g = *fine_grid;
  if (!h.is_control_form()) {
    throw std::invalid_argument("oracle_dp: control form required");
  }
  std::vector<BoundaryCondition> bc = boundary;
  if (bc.empty()) bc.assign(g.num_edges(), BoundaryCondition{});
  SolveOptions probe;
  probe.sl_time_step = fine_h;
  const double step = pick_time_step(h, g, probe);
  const SLTables tab = build_sl_tables(h, g, step, bc, /*with_hull=*/false);

  NetworkFunction u(fine_grid);
  for (int j = 0; j < g.num_edges(); ++j) {
    if (bc[j].type == BoundaryType::Dirichlet) {
      u.set_value(j, g.nodes_per_edge(j), bc[j].value);
    }
  }
  for (int it = 0; it < iterations; ++it) {
    u.set_vertex_value(best_value(u, tab, tab.vertex, -1, 0));
    for (int j = 0; j < g.num_edges(); ++j) {
      const int m = g.nodes_per_edge(j);
      const int last = (bc[j].type == BoundaryType::Dirichlet) ? m - 1 : m;
      for (int i = 1; i <= last; ++i) {
        u.set_value(j, i, best_value(u, tab, tab.node[j][i - 1], j, i));
      }
    }
  }
  return u;
}

ResidualReport residual(const NetworkFunction& u, const Hamiltonian& h,
                        Scheme scheme, const SolveOptions& opts) {
  const NetworkGrid& g = u.grid();
  const auto bc = resolve_boundary(opts, g.num_edges());
  ResidualReport rep;
  rep.edge.resize(g.num_edges());

  if (scheme == Scheme::Imz) {
    rep.vertex = imz_vertex_residual(u, h);
    rep.sup = std::fabs(rep.vertex);
    for (int j = 0; j < g.num_edges(); ++j) {
      rep.edge[j].resize(g.nodes_per_edge(j));
      for (int i = 1; i <= g.nodes_per_edge(j); ++i) {
        rep.edge[j][i - 1] = imz_residual_at(u, h, bc, j, i);
        rep.sup = std::max(rep.sup, std::fabs(rep.edge[j][i - 1]));
      }
    }
    return rep;
  }

  const double step = pick_time_step(h, g, opts);
  const SLTables tab = build_sl_tables(h, g, step, bc, /*with_hull=*/true);
  rep.vertex = (u.vertex_value() - plain_value(u, tab, tab.vertex)) / step;
  rep.sup = std::fabs(rep.vertex);
  for (int j = 0; j < g.num_edges(); ++j) {
    const int m = g.nodes_per_edge(j);
    rep.edge[j].resize(m);
    for (int i = 1; i <= m; ++i) {
      double r;
      if (i == m && bc[j].type == BoundaryType::Dirichlet) {
        r = u.value(j, m) - bc[j].value;
      } else {
        r = (u.value(j, i) - plain_value(u, tab, tab.node[j][i - 1])) / step;
      }
      rep.edge[j][i - 1] = r;
      rep.sup = std::max(rep.sup, std::fabs(r));
    }
  }
  return rep;
}

Difference compare(const NetworkFunction& a, const NetworkFunction& b) {
  const NetworkGrid& ga = a.grid();
  const NetworkGrid& gb = b.grid();
  if (ga.num_edges() != gb.num_edges()) {
    throw std::invalid_argument("compare: edge count mismatch");
  }
  for (int j = 0; j < ga.num_edges(); ++j) {
    if (ga.nodes_per_edge(j) != gb.nodes_per_edge(j) ||
        std::fabs(ga.network().length(j) - gb.network().length(j)) > 1e-12) {
      throw std::invalid_argument("compare: grid mismatch on edge " +
                                  std::to_string(j + 1));
    }
  }
  Difference d;
  const double dv = std::fabs(a.vertex_value() - b.vertex_value());
  d.sup_norm = dv;
  d.l1_norm = ga.max_spacing() * dv;
  for (int j = 0; j < ga.num_edges(); ++j) {
    for (int i = 1; i <= ga.nodes_per_edge(j); ++i) {
      const double diff = std::fabs(a.value(j, i) - b.value(j, i));
      d.sup_norm = std::max(d.sup_norm, diff);
      d.l1_norm += ga.spacing(j) * diff;
    }
  }
  return d;
}

}  // namespace hjnet
