#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hjnet/network.hpp"

namespace hjnet {

/// One control choice: a signed speed along the edge direction (positive =
/// away from the vertex) and a running cost.
struct Action {
  double speed = 0.0;
  double cost = 0.0;
};

/// Closed-form edge Hamiltonian H^j(x, p).
struct ClosedFormEdge {
  std::function<double(double x, double p)> evaluate;
  std::string name;  // diagnostic label ("eikonal", "quadratic", ...)
};

/// Control-theoretic edge Hamiltonian: H^j(x, p) = max_a (-speed_a * p - cost_a(x)),
/// with cost_a(x) = cost_a + cost_shift(x). Speeds and base costs are
/// x-independent at the vertex; cost_shift (if set) must vanish at x = 0.
struct ControlFormEdge {
  std::vector<Action> actions;
  std::function<double(double x)> cost_shift;  // optional, interior only
};

using EdgeHamiltonian = std::variant<ClosedFormEdge, ControlFormEdge>;

/// Sublevel thresholds of p -> H^j(v, p) at a given level:
///   H > level  iff  p outside [p_minus, p_plus],
///   H < level  iff  p inside (p_low, p_high).
/// An empty sublevel set is reported with the sentinel p_low > p_high.
struct Thresholds {
  double p_minus = 0.0;
  double p_low = 0.0;
  double p0 = 0.0;
  double p_high = 0.0;
  double p_plus = 0.0;
  double level = 0.0;
  bool empty = false;
};

/// Convex polygon of admissible (speed, cost) pairs at the vertex for one
/// edge: the convex hull of the edge's action points clipped to speed >= 0.
/// Extreme points are in convex position, counterclockwise.
struct FLSet {
  int edge = -1;
  std::vector<std::array<double, 2>> extreme_points;  // (zeta, xi)
  bool empty() const { return extreme_points.empty(); }
};

struct CheckResult {
  bool passed = true;
  double worst = 0.0;     // worst violation magnitude
  int witness_edge = -1;  // 0-based
  int witness_edge2 = -1;
  double witness_p = 0.0;
  double witness_x = 0.0;
};

/// Numerical audit of the standing assumptions: coercivity on the declared
/// window, quasiconvexity at the vertex, and the vertex continuity/symmetry
/// hypotheses of the pair-test definition.
struct AssumptionReport {
  CheckResult coercivity;
  CheckResult quasiconvexity;
  CheckResult vertex_continuity;
  CheckResult vertex_symmetry;
  bool all_passed() const {
    return coercivity.passed && quasiconvexity.passed &&
           vertex_continuity.passed && vertex_symmetry.passed;
  }
};

struct AssumptionOptions {
  int p_samples = 2001;
  int x_samples = 101;
  double coercivity_margin = 1e-6;
  double equality_tolerance = 1e-9;
};

/// Per-edge Hamiltonian family with a declared slope window [-p_max, p_max]
/// for all numerical scans. Immutable after construction; evaluation is pure.
class Hamiltonian {
 public:
  Hamiltonian(std::vector<EdgeHamiltonian> edges, double p_max);

  int num_edges() const { return static_cast<int>(edges_.size()); }
  double p_max() const { return p_max_; }

  double eval(int j, double x, double p) const;

  bool is_control_form() const;
  bool is_control_form(int j) const;
  const std::vector<Action>& actions(int j) const;
  double cost_at(int j, double x, const Action& a) const;

  /// True when edge j is control-form with all speeds of one sign; such an
  /// edge carries one-way dynamics and its H^j(v, .) is monotone in p.
  bool is_one_signed_control(int j) const;

  /// Minimizer of p -> H^j(v, p) on the declared window (leftmost point of a
  /// flat minimum). One-signed control edges return the window endpoint on
  /// the monotone side; any other boundary minimum signals an insufficient
  /// window and throws.
  double argmin_p(int j) const;

  /// Flux limiter: the non-increasing envelope inf_{q <= 0} H^j(v, p + q),
  /// i.e. H^j(v, p) below the minimizer and the minimum value beyond it.
  double h_minus(int j, double p) const;

  Thresholds sublevel_thresholds(int j, double level) const;

  AssumptionReport check_assumptions(const StarNetwork& net,
                                     const AssumptionOptions& opts = {}) const;

 private:
  std::vector<EdgeHamiltonian> edges_;
  double p_max_;
  std::vector<double> p0_;                // per-edge minimizer (or NaN)
  std::vector<std::string> p0_error_;     // nonempty when argmin failed
  void compute_minimizers();
};

/// Builds FL_j(v): hull of the edge's (speed, cost) action points clipped to
/// the outgoing half-plane speed >= 0. All speeds negative yields the legal
/// empty set (the edge contributes nothing at the vertex).
FLSet fl_set(const Hamiltonian& h, int j);

/// Support-type functional sup_{(zeta,xi) in S} (-slope * zeta - xi).
/// By linearity the sup is attained at an extreme point. Empty set: -inf.
double fl_support(const FLSet& s, double slope);

/// 2D convex hull (monotone chain), counterclockwise, collinear points
/// dropped. Exposed for tests.
std::vector<std::array<double, 2>> convex_hull(
    std::vector<std::array<double, 2>> points);

/// Extreme points of co(points) intersected with the half-plane
/// {first coordinate >= 0}. Points are (speed, cost) pairs.
std::vector<std::array<double, 2>> clip_nonnegative_speed(
    std::vector<std::array<double, 2>> points);

}  // namespace hjnet
