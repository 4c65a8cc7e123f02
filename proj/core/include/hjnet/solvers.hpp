#pragma once

#include <memory>
#include <vector>

#include "hjnet/hamiltonian.hpp"
#include "hjnet/network.hpp"

namespace hjnet {

enum class BoundaryType { StateConstraint, Dirichlet };

struct BoundaryCondition {
  BoundaryType type = BoundaryType::StateConstraint;
  double value = 0.0;  // Dirichlet only
};

struct SolveOptions {
  int max_iterations = 100000;
  double residual_tolerance = 1e-10;
  double damping = 1.0;        // in (0, 1]
  double sl_time_step = 0.0;   // semi-Lagrangian step; 0 = auto from the grid
  std::vector<BoundaryCondition> boundary;  // per edge; empty = all state-constraint
  bool jacobi = false;  // frozen-sweep updates instead of Gauss-Seidel
};

struct SolveResult {
  NetworkFunction solution;
  int iterations_used = 0;
  double final_residual = 0.0;
  bool converged = false;
  std::vector<double> sweep_deltas;  // sup-norm update per sweep
};

enum class Scheme { Imz, Acct };

/// Godunov numerical Hamiltonian for a quasiconvex H^j:
///   max( H(x, max(p_left, p0)), H(x, min(p_right, p0)) ),
/// nondecreasing in p_left and nonincreasing in p_right.
double godunov_flux(const Hamiltonian& h, int j, double x, double p_left,
                    double p_right);

/// Monotone finite-difference solver with the flux-limiter junction
/// condition: the vertex equation uses max_j H^-_j of the forward quotients.
/// Gauss-Seidel sweeps, vertex first, then each edge outward.
SolveResult solve_imz(const Hamiltonian& h,
                      std::shared_ptr<const NetworkGrid> grid,
                      const SolveOptions& opts);

/// Semi-Lagrangian value iteration on the discounted dynamic programming
/// principle. Interior candidates are the extreme points of the convex hull
/// of the edge's action points plus a uniform sampling of the hull boundary;
/// vertex candidates come from the clipped FL sets of every edge.
/// Control-form Hamiltonians only.
SolveResult solve_acct(const Hamiltonian& h,
                       std::shared_ptr<const NetworkGrid> grid,
                       const SolveOptions& opts);

/// Brute-force dynamic-programming oracle: the same one-step recursion as
/// solve_acct but with the raw action list only, run for a fixed iteration
/// count with no early exit. Kept deliberately simple; used to pin expected
/// values for the other solvers.
NetworkFunction oracle_dp(const Hamiltonian& h,
                          std::shared_ptr<const NetworkGrid> fine_grid,
                          double fine_h, int iterations,
                          const std::vector<BoundaryCondition>& boundary = {});

struct ResidualReport {
  double sup = 0.0;
  double vertex = 0.0;
  std::vector<std::vector<double>> edge;  // [j][i-1], nodes 1..M_j
};

/// Nodal residuals of the discrete equation: the scheme form for Imz, the
/// one-step DP defect divided by the time step for Acct.
ResidualReport residual(const NetworkFunction& u, const Hamiltonian& h,
                        Scheme scheme, const SolveOptions& opts);

struct Difference {
  double sup_norm = 0.0;
  double l1_norm = 0.0;  // grid-weighted; the vertex carries weight max_j dy_j
};

Difference compare(const NetworkFunction& a, const NetworkFunction& b);

}  // namespace hjnet
