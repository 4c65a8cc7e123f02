#pragma once

#include <map>
#include <string>
#include <vector>

#include "hjnet/hamiltonian.hpp"
#include "hjnet/network.hpp"

namespace hjnet {

struct DifferentialOptions {
  std::vector<int> scales = {1, 2, 4, 8};  // node counts from the vertex
  double slope_tolerance = -1.0;  // < 0: auto, 2 * max_j dy_j * curvature_bound
  double curvature_bound = 1.0;
  double divergence_threshold = 1.0;  // quotient spread flagging an empty estimate
};

/// Estimated one-sided differential brackets at the vertex along one edge:
/// the superdifferential is [super_lo, +inf), the subdifferential
/// (-inf, sub_hi]. Estimates come from difference quotients at several node
/// scales; a diverging spread marks the corresponding set as empty.
struct EdgeDifferential {
  double super_lo = 0.0;
  double sub_hi = 0.0;
  bool super_empty = false;
  bool sub_empty = false;
  double quotient_spread = 0.0;
};

struct VertexDifferentials {
  std::vector<EdgeDifferential> edges;
  double slope_tolerance = 0.0;
};

VertexDifferentials estimate_differentials(const NetworkFunction& u,
                                           const DifferentialOptions& opts = {});

enum class Role { Subsolution, Supersolution };
enum class CheckStatus { Pass, Fail, NotApplicable };

struct CheckEntry {
  CheckStatus status = CheckStatus::NotApplicable;
  double violation = 0.0;  // worst signed residual; pass iff <= tolerance
  int witness_edge = -1;
  int witness_edge2 = -1;
  double witness_slope = 0.0;
  bool vacuous = false;
  std::map<int, int> feasible_edge;  // CS supersolution: j -> chosen k
  std::string note;
};

/// Flux-limiter junction condition of the quasiconvex definition. The
/// binding test slope on each edge is the superdifferential lower endpoint
/// (sub role) or the subdifferential upper endpoint (super role); an empty
/// per-edge set empties the whole test family.
CheckEntry check_imz(const NetworkFunction& u, const Hamiltonian& h,
                     const VertexDifferentials& d, Role role, double tol);

/// Control-theoretic junction condition through the FL-set support
/// functionals. Control-form Hamiltonians only.
CheckEntry check_acct(const NetworkFunction& u, const Hamiltonian& h,
                      const VertexDifferentials& d, Role role, double tol);

/// Pair-test junction condition. Applicable only when the vertex
/// continuity and symmetry hypotheses hold; the supersolution role searches
/// a feasible edge k for every j (ascending index, first success).
CheckEntry check_cs(const NetworkFunction& u, const Hamiltonian& h,
                    const VertexDifferentials& d, Role role, double tol);

struct InteriorReport {
  bool passed = true;
  double worst = 0.0;
  int worst_edge = -1;
  int worst_node = -1;
};

/// Godunov residual audit at every interior node (the standard viscosity
/// conditions away from the vertex, at scheme accuracy).
InteriorReport check_interior(const NetworkFunction& u, const Hamiltonian& h,
                              double tol);

/// Difference-quotient limit bound along edge j: evaluates
/// u(v) + H^j(v, (u^j(y_m) - u(v)) / y_m) on descending node scales and
/// passes when the minimum over the tail is <= tol.
CheckEntry check_lemma54(const NetworkFunction& u, const Hamiltonian& h, int j,
                         int depth, double tol);

struct VerifierReport {
  CheckEntry acct_sub, acct_super;
  CheckEntry imz_sub, imz_super;
  CheckEntry cs_sub, cs_super;
  InteriorReport interior;
  std::vector<CheckEntry> lemma54;  // per edge
  double tolerance = 0.0;
  double slope_tolerance = 0.0;
  std::string boundary_note;

  bool all_applicable_pass() const;
};

VerifierReport run_all_checks(const NetworkFunction& u, const Hamiltonian& h,
                              double tol,
                              const DifferentialOptions& dopts = {});

}  // namespace hjnet
