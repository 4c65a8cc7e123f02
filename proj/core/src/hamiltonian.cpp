#include "hjnet/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hjnet {

namespace {

constexpr double kGolden = 0.6180339887498949;  // (sqrt(5) - 1) / 2
constexpr double kPlateauEps = 1e-12;

double cross(const std::array<double, 2>& o, const std::array<double, 2>& a,
             const std::array<double, 2>& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

}  // namespace

Hamiltonian::Hamiltonian(std::vector<EdgeHamiltonian> edges, double p_max)
    : edges_(std::move(edges)), p_max_(p_max) {
  if (edges_.empty()) throw std::invalid_argument("Hamiltonian: no edges");
  if (!(p_max_ > 0.0) || !std::isfinite(p_max_)) {
    throw std::invalid_argument("Hamiltonian: p_max must be positive");
  }
  for (size_t j = 0; j < edges_.size(); ++j) {
    if (const auto* cf = std::get_if<ControlFormEdge>(&edges_[j])) {
      if (cf->actions.empty()) {
        throw std::invalid_argument("Hamiltonian: empty action list on edge " +
                                    std::to_string(j + 1));
      }
      for (const Action& a : cf->actions) {
        if (!std::isfinite(a.speed) || !std::isfinite(a.cost)) {
          throw std::invalid_argument(
              "Hamiltonian: non-finite action on edge " + std::to_string(j + 1));
        }
      }
    } else {
      const auto& ce = std::get<ClosedFormEdge>(edges_[j]);
      if (!ce.evaluate) {
        throw std::invalid_argument(
            "Hamiltonian: missing evaluator on edge " + std::to_string(j + 1));
      }
    }
  }
  compute_minimizers();
}

double Hamiltonian::cost_at(int j, double x, const Action& a) const {
  const auto& cf = std::get<ControlFormEdge>(edges_.at(j));
  return a.cost + (cf.cost_shift ? cf.cost_shift(x) : 0.0);
}

double Hamiltonian::eval(int j, double x, double p) const {
  const EdgeHamiltonian& e = edges_.at(j);
  if (const auto* cf = std::get_if<ControlFormEdge>(&e)) {
    const double shift = cf->cost_shift ? cf->cost_shift(x) : 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (const Action& a : cf->actions) {
      best = std::max(best, -a.speed * p - a.cost - shift);
    }
    return best;
  }
  return std::get<ClosedFormEdge>(e).evaluate(x, p);
}

bool Hamiltonian::is_control_form(int j) const {
  return std::holds_alternative<ControlFormEdge>(edges_.at(j));
}

bool Hamiltonian::is_control_form() const {
  for (int j = 0; j < num_edges(); ++j) {
    if (!is_control_form(j)) return false;
  }
  return true;
}

const std::vector<Action>& Hamiltonian::actions(int j) const {
  const auto* cf = std::get_if<ControlFormEdge>(&edges_.at(j));
  if (!cf) {
    throw std::invalid_argument("Hamiltonian: edge " + std::to_string(j + 1) +
                                " is not control-form");
  }
  return cf->actions;
}

bool Hamiltonian::is_one_signed_control(int j) const {
  const auto* cf = std::get_if<ControlFormEdge>(&edges_.at(j));
  if (!cf) return false;
  bool has_pos = false, has_neg = false;
  for (const Action& a : cf->actions) {
    if (a.speed > 0.0) has_pos = true;
    if (a.speed < 0.0) has_neg = true;
  }
  return !(has_pos && has_neg);
}

void Hamiltonian::compute_minimizers() {
  const int n = 2001;
  p0_.assign(edges_.size(), std::numeric_limits<double>::quiet_NaN());
  p0_error_.assign(edges_.size(), "");
  for (int j = 0; j < num_edges(); ++j) {
    const double step = 2.0 * p_max_ / (n - 1);
    double vmin = std::numeric_limits<double>::infinity();
    int imin = 0;
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i) {
      vals[i] = eval(j, 0.0, -p_max_ + i * step);
      if (vals[i] < vmin) vmin = vals[i];
    }
    // leftmost sample attaining the minimum (within the plateau tolerance)
    while (imin < n && vals[imin] > vmin + kPlateauEps) ++imin;

    auto boundary_case = [&](double boundary_p) {
      if (is_one_signed_control(j)) {
        p0_[j] = boundary_p;  // one-way dynamics: monotone H, window endpoint
      } else {
        p0_error_[j] = "minimum of H^" + std::to_string(j + 1) +
                       "(v,.) lies at the window boundary; increase p_max";
      }
    };
    if (imin == 0) {
      boundary_case(-p_max_);
      continue;
    }
    if (imin == n - 1) {
      boundary_case(p_max_);
      continue;
    }

    // golden-section refinement on the bracketing cell pair
    double a = -p_max_ + (imin - 1) * step;
    double b = -p_max_ + (imin + 1) * step;
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = eval(j, 0.0, x1), f2 = eval(j, 0.0, x2);
    while (b - a > 1e-10) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kGolden * (b - a);
        f1 = eval(j, 0.0, x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kGolden * (b - a);
        f2 = eval(j, 0.0, x2);
      }
    }
    double pm = 0.5 * (a + b);
    vmin = std::min(vmin, eval(j, 0.0, pm));

    // leftmost point of a flat minimum: bisection on the "still at the
    // minimum value" predicate, which is monotone on the decreasing branch
    auto at_min = [&](double p) { return eval(j, 0.0, p) <= vmin + kPlateauEps; };
    if (at_min(-p_max_)) {
      boundary_case(-p_max_);
      continue;
    }
    double lo = -p_max_, hi = pm;  // predicate false at lo, true at hi
    for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
      const double mid = 0.5 * (lo + hi);
      (at_min(mid) ? hi : lo) = mid;
    }
    p0_[j] = hi;
  }
}

double Hamiltonian::argmin_p(int j) const {
  if (!p0_error_.at(j).empty()) throw std::runtime_error(p0_error_[j]);
  return p0_[j];
}

double Hamiltonian::h_minus(int j, double p) const {
  const double p0 = argmin_p(j);
  return p < p0 ? eval(j, 0.0, p) : eval(j, 0.0, p0);
}

Thresholds Hamiltonian::sublevel_thresholds(int j, double level) const {
  const double p0 = argmin_p(j);
  Thresholds t;
  t.p0 = p0;
  t.level = level;
  const double vmin = eval(j, 0.0, p0);
  if (vmin > level) {
    t.empty = true;
    t.p_minus = t.p_low = std::numeric_limits<double>::infinity();
    t.p_high = t.p_plus = -std::numeric_limits<double>::infinity();
    return t;
  }

  // Monotone-predicate bisection on one branch. pred must be true at `lo`
  // and false at `hi`; returns the transition point to ~1e-10.
  auto bisect = [&](double lo, double hi, auto pred) {
    for (int it = 0; it < 200 && std::fabs(hi - lo) > 1e-10; ++it) {
      const double mid = 0.5 * (lo + hi);
      (pred(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };

  // decreasing branch
  if (p0 <= -p_max_ + 1e-14) {
    t.p_minus = t.p_low = -p_max_;  // window truncation (one-way edge)
  } else {
    if (eval(j, 0.0, -p_max_) <= level) {
      throw std::runtime_error(
          "sublevel_thresholds: sublevel set reaches the window boundary on "
          "edge " + std::to_string(j + 1) + "; increase p_max");
    }
    t.p_minus = bisect(-p_max_, p0,
                       [&](double p) { return eval(j, 0.0, p) > level; });
    t.p_low = (eval(j, 0.0, p0) >= level - kPlateauEps && vmin >= level - kPlateauEps)
                  ? p0
                  : bisect(-p_max_, p0,
                           [&](double p) { return eval(j, 0.0, p) >= level; });
  }
  // increasing branch
  if (p0 >= p_max_ - 1e-14) {
    t.p_high = t.p_plus = p_max_;
  } else {
    if (eval(j, 0.0, p_max_) <= level) {
      throw std::runtime_error(
          "sublevel_thresholds: sublevel set reaches the window boundary on "
          "edge " + std::to_string(j + 1) + "; increase p_max");
    }
    t.p_plus = bisect(p_max_, p0,
                      [&](double p) { return eval(j, 0.0, p) > level; });
    t.p_high = (vmin >= level - kPlateauEps)
                   ? p0
                   : bisect(p_max_, p0,
                            [&](double p) { return eval(j, 0.0, p) >= level; });
  }
  // enforce the ordering against bisection round-off
  t.p_low = std::max(t.p_low, t.p_minus);
  t.p_high = std::min(t.p_high, t.p_plus);
  return t;
}

AssumptionReport Hamiltonian::check_assumptions(
    const StarNetwork& net, const AssumptionOptions& opts) const {
  if (net.num_edges() != num_edges()) {
    throw std::invalid_argument("check_assumptions: edge count mismatch");
  }
  AssumptionReport rep;
  const int np = opts.p_samples;
  const int nx = opts.x_samples;
  const double pstep = 2.0 * p_max_ / (np - 1);

  // coercivity: H at +-p_max exceeds H at 0 by the margin, for every x sample
  {
    CheckResult& c = rep.coercivity;
    c.worst = std::numeric_limits<double>::infinity();
    for (int j = 0; j < num_edges(); ++j) {
      for (int ix = 0; ix < nx; ++ix) {
        const double x = net.length(j) * ix / (nx - 1);
        const double h0 = eval(j, x, 0.0);
        for (double pw : {-p_max_, p_max_}) {
          const double excess = eval(j, x, pw) - h0;
          if (excess < c.worst) {
            c.worst = excess;
            c.witness_edge = j;
            c.witness_p = pw;
            c.witness_x = x;
          }
        }
      }
    }
    c.passed = c.worst > opts.coercivity_margin;
  }

  // quasiconvexity of p -> H^j(v, p): non-increasing then non-decreasing
  {
    CheckResult& c = rep.quasiconvexity;
    c.worst = 0.0;
    for (int j = 0; j < num_edges(); ++j) {
      std::vector<double> h(np);
      for (int i = 0; i < np; ++i) h[i] = eval(j, 0.0, -p_max_ + i * pstep);
      int m = 0;
      for (int i = 1; i < np; ++i) {
        if (h[i] < h[m]) m = i;
      }
      for (int i = 0; i + 1 < np; ++i) {
        const double rise = (i < m) ? h[i + 1] - h[i] : h[i] - h[i + 1];
        if (rise > c.worst) {
          c.worst = rise;
          c.witness_edge = j;
          c.witness_p = -p_max_ + i * pstep;
        }
      }
    }
    c.passed = c.worst <= opts.equality_tolerance;
  }

  // vertex continuity across edges: H^j(v,p) = H^k(v,p)
  {
    CheckResult& c = rep.vertex_continuity;
    c.worst = 0.0;
    for (int i = 0; i < np; ++i) {
      const double p = -p_max_ + i * pstep;
      for (int j = 0; j < num_edges(); ++j) {
        const double hj = eval(j, 0.0, p);
        for (int k = j + 1; k < num_edges(); ++k) {
          const double gap = std::fabs(hj - eval(k, 0.0, p));
          if (gap > c.worst) {
            c.worst = gap;
            c.witness_edge = j;
            c.witness_edge2 = k;
            c.witness_p = p;
          }
        }
      }
    }
    c.passed = c.worst <= opts.equality_tolerance;
  }

  // vertex symmetry: H^j(v,p) = H^j(v,-p)
  {
    CheckResult& c = rep.vertex_symmetry;
    c.worst = 0.0;
    for (int i = 0; i < np; ++i) {
      const double p = -p_max_ + i * pstep;
      for (int j = 0; j < num_edges(); ++j) {
        const double gap = std::fabs(eval(j, 0.0, p) - eval(j, 0.0, -p));
        if (gap > c.worst) {
          c.worst = gap;
          c.witness_edge = j;
          c.witness_p = p;
        }
      }
    }
    c.passed = c.worst <= opts.equality_tolerance;
  }
  return rep;
}

std::vector<std::array<double, 2>> convex_hull(
    std::vector<std::array<double, 2>> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const auto& a, const auto& b) {
                          return std::fabs(a[0] - b[0]) < 1e-14 &&
                                 std::fabs(a[1] - b[1]) < 1e-14;
                        }),
            pts.end());
  const size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<std::array<double, 2>> hull(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {  // lower chain
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 1e-12) --k;
    hull[k++] = pts[i];
  }
  const size_t lower = k + 1;
  for (size_t i = n - 1; i-- > 0;) {  // upper chain
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 1e-12) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);  // last point repeats the first
  return hull;
}

std::vector<std::array<double, 2>> clip_nonnegative_speed(
    std::vector<std::array<double, 2>> pts) {
  auto hull = convex_hull(std::move(pts));
  if (hull.empty()) return hull;
  if (hull.size() == 1) {
    if (hull[0][0] >= -1e-12) return {{std::max(0.0, hull[0][0]), hull[0][1]}};
    return {};
  }

  // Sutherland-Hodgman clip against the half-plane zeta >= 0: keep inside
  // points and insert the intersections with the zeta = 0 line.
  std::vector<std::array<double, 2>> clipped;
  const size_t n = hull.size();
  const size_t nseg = (n == 2) ? 1 : n;
  for (size_t i = 0; i < nseg; ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % n];
    const bool ain = a[0] >= -1e-12;
    const bool bin = b[0] >= -1e-12;
    if (ain) clipped.push_back({std::max(0.0, a[0]), a[1]});
    if (ain != bin) {
      const double t = a[0] / (a[0] - b[0]);
      clipped.push_back({0.0, a[1] + t * (b[1] - a[1])});
    }
    if (n == 2 && bin) clipped.push_back({std::max(0.0, b[0]), b[1]});
  }
  return convex_hull(std::move(clipped));
}

FLSet fl_set(const Hamiltonian& h, int j) {
  std::vector<std::array<double, 2>> pts;
  for (const Action& a : h.actions(j)) pts.push_back({a.speed, a.cost});

  FLSet s;
  s.edge = j;
  s.extreme_points = clip_nonnegative_speed(std::move(pts));
  return s;
}

double fl_support(const FLSet& s, double slope) {
  if (s.empty()) return -std::numeric_limits<double>::infinity();
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& pt : s.extreme_points) {
    best = std::max(best, -slope * pt[0] - pt[1]);
  }
  return best;
}

}  // namespace hjnet
