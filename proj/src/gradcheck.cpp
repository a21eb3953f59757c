#include "tubenav/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "tubenav/potentials.hpp"
#include "tubenav/scenario.hpp"

namespace tubenav {

namespace {

template <class F>
Vec2 central_difference(F&& f, const Vec2& p, double h) {
  const Vec2 ex(h, 0.0), ey(0.0, h);
  return {(f(p + ex) - f(p - ex)) / (2.0 * h), (f(p + ey) - f(p - ey)) / (2.0 * h)};
}

double relative_error(const Vec2& analytic, const Vec2& numeric) {
  const double scale = std::max({analytic.norm(), numeric.norm(), 1e-12});
  return (analytic - numeric).norm() / scale;
}

Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

GradcheckResult check_pair(std::size_t points, std::mt19937_64& rng) {
  const AvoidanceParams prm;
  std::uniform_real_distribution<double> coord(-5.0, 5.0), angle(0.0, 2.0 * std::numbers::pi), pick(0.0, 1.0);
  std::uniform_real_distribution<double> apart(2.0 * prm.r_s + 0.02, prm.r_s + prm.r_a - 1e-3);
  std::uniform_real_distribution<double> overlap(0.6 * prm.r_s, 1.9 * prm.r_s);
  GradcheckResult out{"V_m pair barrier (b)", points};
  for (std::size_t n = 0; n < points; ++n) {
    const Vec2 pj(coord(rng), coord(rng));
    const bool overlapping = pick(rng) >= 0.8;
    const double d = overlapping ? overlap(rng) : apart(rng);
    const Vec2 pi = pj + d * unit(angle(rng));
    const Vec2 analytic = -pair_barrier(pi, pj, prm).b * (pi - pj);
    // Overlapping values are ~1/eps_m, so a finer step drowns in cancellation.
    const double h = overlapping ? 1e-4 : 1e-6;
    const Vec2 numeric = central_difference([&](const Vec2& q) { return pair_barrier(q, pj, prm).value; }, pi, h);
    out.max_relative_error = std::max(out.max_relative_error, relative_error(analytic, numeric));
  }
  return out;
}

GradcheckResult check_panel(std::size_t points, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coord(-3.0, 3.0), angle(0.0, 2.0 * std::numbers::pi), pick(0.0, 1.0);
  std::uniform_real_distribution<double> ahead(0.2, 1.0), behind(-3.0, -0.5), gap(0.45, 3.0);
  GradcheckResult out{"phi panel", points};
  for (std::size_t n = 0; n < points; ++n) {
    Panel panel{Vec2(coord(rng), coord(rng)), unit(angle(rng)), ahead(rng), behind(rng), 0.4};
    if (pick(rng) < 0.5) std::swap(panel.g1, panel.g2);
    // Point at a prescribed gap from the nearest panel point.
    const double x = std::lerp(std::min(panel.g1, panel.g2) - 1.0, std::max(panel.g1, panel.g2) + 1.0, pick(rng));
    const double lo = std::min(panel.g1, panel.g2), hi = std::max(panel.g1, panel.g2);
    const double off = x - std::clamp(x, lo, hi);
    const double g = gap(rng);
    if (std::abs(off) >= g) {
      --n;
      continue;
    }
    const double lateral = std::sqrt(g * g - off * off) * (pick(rng) < 0.5 ? -1.0 : 1.0);
    const Vec2 p = panel.anchor + x * panel.direction + lateral * rotate_left(panel.direction);
    const Vec2 analytic = panel_gradient(p, panel);
    const Vec2 numeric = central_difference([&](const Vec2& q) { return panel_potential(q, panel); }, p, 1e-5);
    out.max_relative_error = std::max(out.max_relative_error, relative_error(analytic, numeric));
  }
  return out;
}

GradcheckResult check_unified(std::size_t points, std::mt19937_64& rng) {
  const VirtualTube base = sine_tube({});
  const VirtualTube tube = base.with_r_s_prime(modified_safety_radius(base, 0.4));
  const TubeKeepParams prm = TubeKeepParams::for_radii(0.4, 0.8);
  std::uniform_int_distribution<std::size_t> segment(0, tube.size() - 2);
  std::uniform_real_distribution<double> frac(0.05, 0.95), pick(0.0, 1.0);
  std::uniform_real_distribution<double> clearance(tube.r_s_prime() + 0.02, prm.r_a - 5e-3);
  GradcheckResult out{"V_t unified barrier (c)", points};
  std::size_t accepted = 0;
  while (accepted < points) {
    const std::size_t k = segment(rng);
    const double u = frac(rng);
    const Station& a = tube.station(k);
    const Station& b = tube.station(k + 1);
    const Vec2 t = ((1.0 - u) * a.t_c + u * b.t_c).normalized();
    const Vec2 foot = (1.0 - u) * a.p + u * b.p;
    const double lam_l = std::lerp(a.lambda_l, b.lambda_l, u), lam_r = std::lerp(a.lambda_r, b.lambda_r, u);
    const double mid = 0.5 * (lam_l + lam_r), half = 0.5 * (lam_r - lam_l);
    const double lambda = mid + (pick(rng) < 0.5 ? -1.0 : 1.0) * (half - clearance(rng));
    const Vec2 p = foot + lambda * rotate_left(t);
    const TubeProjection at = project(tube, p);
    if (at.segment != k || std::abs(at.fraction - u) > 1e-6) continue;
    ++accepted;
    const Vec2 analytic = unified_tube_barrier(tube, p, prm).c;
    const Vec2 numeric =
        central_difference([&](const Vec2& q) { return unified_tube_barrier(tube, q, prm).value; }, p, 1e-6);
    out.max_relative_error = std::max(out.max_relative_error, relative_error(analytic, numeric));
  }
  return out;
}

}  // namespace

std::vector<GradcheckResult> gradient_battery(std::size_t points, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<GradcheckResult> out;
  out.push_back(check_pair(points, rng));
  out.push_back(check_panel(points, rng));
  out.push_back(check_unified(points, rng));
  return out;
}

}  // namespace tubenav
