#include "tubenav/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tubenav/errors.hpp"

namespace tubenav {

namespace {

constexpr double kQuadTol = 1e-13;
constexpr double kFdStep = 1e-6;

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

// Single Gauss-Kronrod rule on [a, b]. Boost reports the non-adaptive error on the reference
// interval [-1, 1], so it is rescaled here.
template <class F>
double kronrod(F& f, double a, double b, double& error, double* l1 = nullptr) {
  const double estimate = Kronrod::integrate(f, a, b, 0, 0.0, &error, l1);
  error *= 0.5 * std::abs(b - a);
  return estimate;
}

// Bisection driven by an absolute error budget. Boost's own recursion measures error relative to
// the running estimate, which never converges when the integral cancels to about zero.
template <class F>
double refine(F& f, double a, double b, double budget, int depth, double estimate, double error) {
  if (error <= budget || depth == 0) return estimate;
  const double mid = 0.5 * (a + b);
  double err_lo = 0.0, err_hi = 0.0;
  const double lo = kronrod(f, a, mid, err_lo);
  const double hi = kronrod(f, mid, b, err_hi);
  return refine(f, a, mid, 0.5 * budget, depth - 1, lo, err_lo) +
         refine(f, mid, b, 0.5 * budget, depth - 1, hi, err_hi);
}

template <class F>
double integrate_within(F& f, double a, double b, double budget) {
  if (a == b) return 0.0;
  double error = 0.0;
  const double estimate = kronrod(f, a, b, error);
  return refine(f, a, b, budget, 20, estimate, error);
}

double budget_for(double l1) { return kQuadTol * std::max(l1, 1e-300); }

template <class F>
double integrate(F&& f, double a, double b) {
  if (a == b) return 0.0;
  double error = 0.0, l1 = 0.0;
  const double estimate = kronrod(f, a, b, error, &l1);
  return refine(f, a, b, budget_for(l1), 20, estimate, error);
}

// Integral over [a, b] (a <= b) split at an interior point where the integrand peaks. The error
// budget comes from the whole range so a piece that nearly vanishes is not refined forever.
template <class F>
double integrate_split(F&& f, double a, double b, double peak) {
  if (peak <= a || peak >= b) return integrate(f, a, b);
  double error = 0.0, l1 = 0.0;
  kronrod(f, a, b, error, &l1);
  const double budget = budget_for(l1);
  return integrate_within(f, a, peak, budget * (peak - a) / (b - a)) +
         integrate_within(f, peak, b, budget * (b - peak) / (b - a));
}

struct PanelFrame {
  double lo, hi, sign;  // integration range in panel coordinates, sign of the oriented integral
  double along;         // coordinate of the foot of p on the panel line
  double lateral;       // signed distance of p from the panel line
  Vec2 normal;
};

PanelFrame frame_of(const Vec2& p, const Panel& panel) {
  PanelFrame f;
  f.sign = panel.g2 >= panel.g1 ? 1.0 : -1.0;
  f.lo = std::min(panel.g1, panel.g2);
  f.hi = std::max(panel.g1, panel.g2);
  const Vec2 r = p - panel.anchor;
  f.along = r.dot(panel.direction);
  f.normal = rotate_left(panel.direction);
  f.lateral = r.dot(f.normal);
  const double nearest = std::clamp(f.along, f.lo, f.hi);
  const double gap = std::hypot(f.along - nearest, f.lateral);
  if (!(gap > panel.threshold))
    fail(Fault::PanelTouchesPoint, "point within threshold distance of panel (gap " + std::to_string(gap) + ")");
  return f;
}

double pair_denominator(double dist, const AvoidanceParams& prm, const SmoothSaturation& sat, double& slope) {
  const double x = dist / (2.0 * prm.r_s);
  slope = (1.0 + prm.eps_m) - sat.derivative(x);
  return (1.0 + prm.eps_m) * dist - 2.0 * prm.r_s * sat(x);
}

}  // namespace

PairBarrier pair_barrier(double dist, const AvoidanceParams& prm) {
  if (!(dist > 0.0)) fail(Fault::CoincidentPositions, "robots share a position");
  const Bump sigma(2.0 * prm.r_s, prm.r_a + prm.r_s);
  if (dist >= sigma.d2()) return {};
  const SmoothSaturation sat(prm.eps_s);
  double den_slope = 0.0;
  const double den = pair_denominator(dist, prm, sat, den_slope);
  const double sig = sigma(dist);
  const double value = prm.k2 * sig / den;
  const double dvalue = prm.k2 * (sigma.derivative(dist) * den - sig * den_slope) / (den * den);
  return {value, -dvalue / dist};
}

PairBarrier pair_barrier(const Vec2& p_i, const Vec2& p_j, const AvoidanceParams& prm) {
  return pair_barrier((p_i - p_j).norm(), prm);
}

double panel_potential(const Vec2& p, const Panel& panel) {
  const PanelFrame f = frame_of(p, panel);
  const double h2 = f.lateral * f.lateral;
  auto integrand = [&](double x) {
    const double dx = f.along - x;
    return std::log(std::sqrt(dx * dx + h2) - panel.threshold);
  };
  return f.sign * integrate_split(integrand, f.lo, f.hi, f.along);
}

Vec2 panel_gradient(const Vec2& p, const Panel& panel) {
  const PanelFrame f = frame_of(p, panel);
  const double h2 = f.lateral * f.lateral;
  auto dist = [&](double x) { return std::hypot(f.along - x, f.lateral); };
  // Along the panel the integrand is an exact derivative: d/dx log(D - d) = -(along - x) / (D (D - d)).
  const double along = std::log(dist(f.lo) - panel.threshold) - std::log(dist(f.hi) - panel.threshold);
  auto lateral_integrand = [&](double x) {
    const double dx = f.along - x;
    const double d = std::sqrt(dx * dx + h2);
    return f.lateral / (d * (d - panel.threshold));
  };
  const double lateral = integrate_split(lateral_integrand, f.lo, f.hi, f.along);
  return f.sign * (along * panel.direction + lateral * f.normal);
}

TubeKeepParams TubeKeepParams::for_radii(double r_s, double r_a) {
  TubeKeepParams p;
  p.r_s = r_s;
  p.r_a = r_a;
  p.ahead_extent = 0.5 * r_a;
  p.behind_extent = -3.0 * r_a;
  return p;
}

Vec2 length_gradient(const VirtualTube& tube, const Vec2& p) {
  const Vec2 ex(kFdStep, 0.0), ey(0.0, kFdStep);
  return {(project(tube, p + ex).l - project(tube, p - ex).l) / (2.0 * kFdStep),
          (project(tube, p + ey).l - project(tube, p - ey).l) / (2.0 * kFdStep)};
}

namespace {

struct BoundarySample {
  Vec2 left, left_tangent, right, right_tangent;
  double l;
};

// Station k of the boundary, continued straight past either end so the window never runs short.
BoundarySample boundary_sample(const VirtualTube& tube, std::ptrdiff_t k) {
  const auto last = static_cast<std::ptrdiff_t>(tube.size()) - 1;
  const auto at = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(k, 0, last));
  BoundarySample b{tube.left_point(at), tube.left_tangent(at), tube.right_point(at), tube.right_tangent(at),
                   tube.station(at).l};
  const double beyond = tube.spacing() * static_cast<double>(k - static_cast<std::ptrdiff_t>(at));
  if (beyond != 0.0) {
    b.left += beyond * b.left_tangent;
    b.right += beyond * b.right_tangent;
    b.l += beyond;
  }
  return b;
}

}  // namespace

BoundaryBarriers tube_boundary_barriers(const VirtualTube& tube, const Vec2& p, const TubeKeepParams& prm) {
  if (!(prm.ahead_extent > 0.0 && prm.behind_extent < 0.0))
    fail(Fault::InvalidConfig, "panel extents must satisfy ahead > 0 > behind");
  const TubeProjection at = project(tube, p);
  const Bump window(0.5 * prm.r_a, prm.r_a);
  const double weight = tube.spacing();
  BoundaryBarriers out;
  Vec2 l_grad = Vec2::Zero();
  bool have_l_grad = false;

  const auto pad = static_cast<std::ptrdiff_t>(std::ceil(prm.r_a / weight)) + 1;
  const auto count = static_cast<std::ptrdiff_t>(tube.size());
  for (std::ptrdiff_t k = -pad; k < count + pad; ++k) {
    const BoundarySample b = boundary_sample(tube, k);
    const double offset = b.l - at.l;
    const double reach = std::abs(offset);
    if (reach >= prm.r_a) continue;
    const Panel left{b.left, b.left_tangent, prm.ahead_extent, prm.behind_extent, prm.r_s};
    const Panel right{b.right, b.right_tangent, prm.ahead_extent, prm.behind_extent, prm.r_s};
    const double w = window(reach);
    const Vec2 gl = panel_gradient(p, left);
    const Vec2 gr = panel_gradient(p, right);
    for (const Vec2& g : {gl, gr}) {
      const double dir = -at.t_c.dot(g);
      if (dir < out.min_directional) {
        out.min_directional = dir;
        out.min_directional_station = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(k, 0, count - 1));
      }
    }
    const double phi_l = panel_potential(p, left);
    const double phi_r = panel_potential(p, right);
    out.left += prm.k3 * weight * w * phi_l;
    out.right += prm.k3 * weight * w * phi_r;
    out.grad_left += prm.k3 * weight * w * gl;
    out.grad_right += prm.k3 * weight * w * gr;
    const double dw = window.derivative(reach);
    if (dw != 0.0) {
      if (!have_l_grad) {
        l_grad = length_gradient(tube, p);
        have_l_grad = true;
      }
      // d reach / dp = -sign(offset) * grad l
      const Vec2 dreach = (offset > 0.0 ? -1.0 : 1.0) * l_grad;
      out.grad_left += prm.k3 * weight * phi_l * dw * dreach;
      out.grad_right += prm.k3 * weight * phi_r * dw * dreach;
    }
    ++out.panels;
  }
  if (prm.enforce_directional && out.panels > 0 && out.min_directional < -1e-12)
    fail(Fault::DirectionalConstraintViolated,
         "panel at station " + std::to_string(out.min_directional_station) +
             " pushes against the moving direction (-t_c.grad = " + std::to_string(out.min_directional) + ")");
  return out;
}

UnifiedBarrier unified_barrier_profile(double d_t, double r_sp, const TubeKeepParams& prm) {
  UnifiedBarrier out;
  out.distance = d_t;
  if (!(r_sp > 0.0 && r_sp < prm.r_a))
    fail(Fault::InvalidConfig, "modified safety radius must lie in (0, r_a)");
  const Bump sigma(r_sp, prm.r_a);
  if (d_t >= sigma.d2()) return out;
  const double d = std::max(d_t, 1e-9);
  const SmoothSaturation sat(prm.eps_s);
  const double den = (1.0 + prm.eps_t) * d - r_sp * sat(d / r_sp);
  const double den_slope = (1.0 + prm.eps_t) - sat.derivative(d / r_sp);
  const double sig = sigma(d);
  out.value = prm.k3 * sig / den;
  out.slope = prm.k3 * (sigma.derivative(d) * den - sig * den_slope) / (den * den);
  return out;
}

Vec2 boundary_distance_gradient(const VirtualTube& tube, const Vec2& p, const TubeProjection& at) {
  const Vec2 off = p - at.middle;
  const double r = off.norm();
  if (r < 1e-12) return Vec2::Zero();
  const Vec2 u = off / r;
  Vec2 grad_width;
  Mat2 jac_middle;
  for (int axis = 0; axis < 2; ++axis) {
    Vec2 e = Vec2::Zero();
    e[axis] = kFdStep;
    const TubeProjection fwd = project(tube, p + e);
    const TubeProjection bwd = project(tube, p - e);
    grad_width[axis] = (fwd.half_width - bwd.half_width) / (2.0 * kFdStep);
    jac_middle.col(axis) = (fwd.middle - bwd.middle) / (2.0 * kFdStep);
  }
  return grad_width - (Mat2::Identity() - jac_middle).transpose() * u;
}

UnifiedBarrier unified_tube_barrier(const VirtualTube& tube, const Vec2& p, const TubeKeepParams& prm) {
  const TubeProjection at = project(tube, p);
  UnifiedBarrier out = unified_barrier_profile(at.boundary_distance, tube.r_s_prime(), prm);
  if (out.slope != 0.0) out.c = out.slope * boundary_distance_gradient(tube, p, at);
  return out;
}

double line_integral_lyapunov(const VirtualTube& tube, const Vec2& y, double k1, double v_max) {
  if (!(k1 > 0.0 && v_max > 0.0)) fail(Fault::InvalidConfig, "k1 and v_max must be positive");
  const TubeProjection at = project(tube, y);
  const auto& st = tube.stations();
  const double lambda = at.lambda;
  auto curvature_at = [&](double l) {
    if (l <= st.front().l) return st.front().kappa;
    if (l >= st.back().l) return st.back().kappa;
    const double pos = (l - st.front().l) / tube.spacing();
    const auto k = std::min(static_cast<std::size_t>(pos), st.size() - 2);
    const double u = pos - static_cast<double>(k);
    return (1.0 - u) * st[k].kappa + u * st[k + 1].kappa;
  };
  auto integrand = [&](double l) {
    const double stretch = 1.0 - curvature_at(l) * lambda;
    const double eta = stretch > 0.0 ? std::clamp(1.0 / stretch, tube.eta_min(), tube.eta_max()) : tube.eta_max();
    return std::min(k1 * std::abs(l), v_max / eta);
  };
  const double lo = std::min(at.l, 0.0);
  const double hi = std::max(at.l, 0.0);
  // Piecewise over station intervals so each piece has a smooth curvature profile.
  double total = 0.0;
  double a = lo;
  for (const auto& s : st) {
    if (s.l <= a) continue;
    if (s.l >= hi) break;
    total += integrate(integrand, a, s.l);
    a = s.l;
  }
  total += integrate(integrand, a, hi);
  return total;
}

}  // namespace tubenav
