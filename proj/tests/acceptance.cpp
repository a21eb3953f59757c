#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tubenav/baseline_cbf.hpp"
#include "tubenav/errors.hpp"
#include "tubenav/gradcheck.hpp"
#include "tubenav/potentials.hpp"
#include "tubenav/scenario.hpp"
#include "tubenav/simulator.hpp"

using namespace tubenav;

namespace {

struct Verdict {
  bool pass = true;
  std::vector<std::string> lines;

  [[gnu::format(printf, 3, 4)]] void require(bool ok, const char* format, ...) {
    std::va_list args;
    va_start(args, format);
    add(ok ? "  ok    " : "  FAIL  ", format, args);
    va_end(args);
    pass = pass && ok;
  }
  [[gnu::format(printf, 2, 3)]] void note(const char* format, ...) {
    std::va_list args;
    va_start(args, format);
    add("  info  ", format, args);
    va_end(args);
  }

 private:
  void add(const char* tag, const char* format, std::va_list args) {
    char buf[512];
    std::vsnprintf(buf, sizeof buf, format, args);
    lines.push_back(tag + std::string(buf));
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Point on the interpolated cross section at fraction u of segment k, offset lambda.
Vec2 section_point(const VirtualTube& tube, std::size_t k, double u, double lambda) {
  const Station& a = tube.station(k);
  const Station& b = tube.station(k + 1);
  const Vec2 t = ((1.0 - u) * a.t_c + u * b.t_c).normalized();
  return (1.0 - u) * a.p + u * b.p + lambda * rotate_left(t);
}

struct Sampled {
  Vec2 p;
  std::size_t segment;
  double fraction;
};

// Uniform over station segments and cross-section offsets, with a margin kept from both sides.
Sampled sample_inside(const VirtualTube& tube, std::mt19937_64& rng, double margin) {
  std::uniform_int_distribution<std::size_t> seg(0, tube.size() - 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t k = seg(rng);
  const double u = unit(rng);
  const double lo = std::lerp(tube.station(k).lambda_l, tube.station(k + 1).lambda_l, u) + margin;
  const double hi = std::lerp(tube.station(k).lambda_r, tube.station(k + 1).lambda_r, u) - margin;
  return {section_point(tube, k, u, std::lerp(lo, hi, unit(rng))), k, u};
}

Verdict reproduction_run() {
  Verdict v;
  const ScenarioConfig cfg = load_scenario("scenarios/sine_tube.json");
  std::set<double> speeds;
  for (const auto& r : cfg.robots) speeds.insert(r.params.v_max);
  const auto& c = cfg.controller;
  v.require(cfg.robots.size() == 20 && cfg.robots.front().params.r_s == 0.4 && cfg.robots.front().params.r_a == 0.8,
            "M = %zu, r_s = %.2f m, r_a = %.2f m", cfg.robots.size(), cfg.robots.front().params.r_s,
            cfg.robots.front().params.r_a);
  v.require(c.k2 == 1.0 && c.k3 == 1.0 && c.eps_m == 1e-6 && c.eps_t == 1e-6 && c.eps_s == 1e-6 &&
                c.variant == Variant::Modified && cfg.duration == 25.0 && cfg.dt == 0.01,
            "modified controller, k2 = k3 = 1, eps = 1e-6, 25 s at dt 0.01");
  v.require(speeds == std::set<double>{0.9, 1.6, 2.3, 3.0}, "speed groups {0.9, 1.6, 2.3, 3.0} m/s");

  const auto t0 = std::chrono::steady_clock::now();
  const SimulationLog log = run(cfg);
  const double wall = seconds_since(t0);
  const RunSummary s = metrics(log);
  v.require(!log.violation, "no safety violation");
  v.require(s.min_pair > 0.8, "min pairwise distance %.6f m > 0.8 m", s.min_pair);
  v.require(s.min_boundary > 0.4, "min boundary distance of unfinished robots %.6f m > 0.4 m", s.min_boundary);
  v.require(s.all_finished && s.last_finish_time <= 25.0, "%zu/20 robots finished, last at %.2f s", s.finished_count,
            s.last_finish_time);
  v.require(wall <= 10.0, "wall time %.3f s <= 10 s", wall);
  return v;
}

Verdict lab_analog() {
  Verdict v;
  const ScenarioConfig cfg = load_scenario("scenarios/lab_analog.json");
  const auto& r0 = cfg.robots.front().params;
  v.require(cfg.robots.size() == 6 && r0.r_s == 0.2 && r0.r_a == 0.4 && r0.v_max == 0.5 && cfg.duration == 22.0,
            "M = %zu, r_s = %.2f m, r_a = %.2f m, v_m = %.2f m/s, %.0f s", cfg.robots.size(), r0.r_s, r0.r_a,
            r0.v_max, cfg.duration);
  const SimulationLog log = run(cfg);
  const RunSummary s = metrics(log);
  v.require(!log.violation, "no safety violation");
  v.require(s.min_pair > 0.4, "min pairwise distance %.6f m > 0.4 m", s.min_pair);
  v.require(s.min_boundary > 0.2, "min boundary distance of in-tube robots %.6f m > 0.2 m", s.min_boundary);
  v.note("%zu/6 robots finished, last at %.2f s", s.finished_count, s.last_finish_time);
  return v;
}

Verdict lyapunov_monotonicity() {
  Verdict v;
  const ScenarioConfig cfg = load_scenario("scenarios/full_three.json");
  v.require(cfg.robots.size() == 3 && cfg.controller.variant == Variant::Full, "3 robots, full controller");
  const SimulationLog log = run(cfg);
  const RunSummary s = metrics(log);
  v.require(!log.violation, "no safety violation");
  v.require(s.max_Vdot <= 1e-9, "max dV/dt %.3e <= 1e-9 over %zu steps", s.max_Vdot, s.steps);
  v.require(s.max_V_increase <= 1e-6, "max step increase of V %.3e <= 1e-6", s.max_V_increase);
  v.note("V from %.6f to %.6f; %zu/3 finished, last at %.2f s", log.metrics.front().V, log.metrics.back().V,
         s.finished_count, s.last_finish_time);
  return v;
}

Verdict gradient_battery_check() {
  Verdict v;
  for (const auto& r : gradient_battery(1000))
    v.require(r.pass() && r.points == 1000, "%s: %zu points, max relative error %.3e <= %.0e", r.potential.c_str(),
              r.points, r.max_relative_error, r.tolerance);
  return v;
}

Verdict lyapunov_lower_bound() {
  Verdict v;
  const double k1 = 1.0, v_m = 1.0;
  std::vector<std::pair<std::string, VirtualTube>> tubes;
  tubes.emplace_back("straight", straight_tube(12.0, 2.0, 0.1));
  {
    std::vector<Vec2> pts;
    for (int k = 0; k <= 400; ++k) {
      const double a = std::numbers::pi / 2 * k / 400;
      pts.emplace_back(8.0 * std::sin(a), 8.0 * (1.0 - std::cos(a)));
    }
    tubes.emplace_back("arc", build_tube_from_waypoints(pts, {1.5}, 0.1));
  }
  tubes.emplace_back("sine", sine_tube({}));

  std::mt19937_64 rng(5);
  double worst = std::numeric_limits<double>::infinity();
  double worst_l = 0.0;
  double eta_top = 0.0;
  std::size_t violations = 0, zero_mismatch = 0, samples = 0;
  for (const auto& [name, tube] : tubes) {
    const double eta_max = tube.eta_max();
    eta_top = std::max(eta_top, eta_max);
    for (int n = 0; n < 334; ++n, ++samples) {
      const Sampled s = sample_inside(tube, rng, 0.05);
      const double l = project(tube, s.p).l;
      const double V = line_integral_lyapunov(tube, s.p, k1, v_m);
      const double gap = V - (v_m / eta_max) * std::abs(l);
      if (gap < worst) {
        worst = gap;
        worst_l = l;
      }
      if (gap < -1e-8) ++violations;
      if ((V <= 1e-12) != (std::abs(l) <= 1e-12)) ++zero_mismatch;
    }
    // Points on the finishing line.
    const Station& f = tube.stations().back();
    for (double lam : {-0.5, 0.0, 0.5}) {
      ++samples;
      const Vec2 p = f.p + lam * f.n_c;
      const double V = line_integral_lyapunov(tube, p, k1, v_m);
      if ((V <= 1e-12) != (std::abs(project(tube, p).l) <= 1e-12)) ++zero_mismatch;
    }
  }
  v.require(zero_mismatch == 0, "V_l = 0 exactly when l = 0 at %zu points", samples);
  v.require(violations == 0,
            "V_l >= (v_m / eta_max)|l| - 1e-8: %zu of %zu points violate, worst margin %.4e at l = %.4f", violations,
            samples, worst, worst_l);
  // The saturated integrand min(k1 s, v_m / eta) falls short of v_m / eta over the first v_m / (k1 eta) of arc.
  v.note("largest shortfall v_m^2 / (2 k1 eta_max^2) = %.4f at |l| = v_m / (k1 eta_max) = %.4f, eta_max = %.3f",
         v_m * v_m / (2 * k1 * eta_top * eta_top), v_m / (k1 * eta_top), eta_top);
  return v;
}

Verdict panel_geometry() {
  Verdict v;
  // Panel along +y from -1 to 1, threshold zero.
  const Panel panel{Vec2::Zero(), Vec2(0.0, 1.0), -1.0, 1.0, 0.0};
  const double phi = panel_potential(Vec2(1.0, 0.0), panel);
  // Midpoint Riemann sum with 10^6 cells.
  constexpr int kCells = 1000000;
  double riemann = 0.0;
  for (int k = 0; k < kCells; ++k) {
    const double x = -1.0 + (k + 0.5) * 2.0 / kCells;
    riemann += std::log(std::sqrt(1.0 + x * x));
  }
  riemann *= 2.0 / kCells;
  const double closed = std::log(2.0) - 2.0 + std::numbers::pi / 2;
  v.require(std::abs(phi - riemann) <= 1e-9 && std::abs(phi - closed) <= 1e-12,
            "phi([1,0]) = %.12f, Riemann sum %.12f, closed form %.12f", phi, riemann, closed);

  double worst_bisector = 0.0, worst_axis = 0.0, worst_mirror = 0.0;
  for (double s : {-4.0, -2.0, -0.7, -0.2, 0.05, 0.3, 1.0, 2.5, 6.0}) {
    const Vec2 g = panel_gradient(Vec2(s, 0.0), panel);
    worst_bisector = std::max(worst_bisector, std::abs(std::atan2(g.y(), std::abs(g.x()))));
  }
  for (double s : {1.05, 1.5, 2.0, 3.0, 8.0, -1.05, -2.0, -5.0}) {
    const Vec2 g = panel_gradient(Vec2(0.0, s), panel);
    worst_axis = std::max(worst_axis, std::abs(std::atan2(g.x(), std::abs(g.y()))));
  }
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  for (int n = 0; n < 200; ++n) {
    const Vec2 p(coord(rng), coord(rng));
    if (std::abs(p.x()) < 1e-3) continue;
    worst_mirror =
        std::max(worst_mirror, std::abs(panel_potential(p, panel) - panel_potential(Vec2(-p.x(), p.y()), panel)));
  }
  v.require(worst_bisector <= 1e-8, "gradient orthogonal to the panel on its bisector: worst %.2e rad",
            worst_bisector);
  v.require(worst_axis <= 1e-8, "gradient parallel to the panel on its axis: worst %.2e rad", worst_axis);
  v.require(worst_mirror <= 1e-12, "mirror symmetry: worst %.2e", worst_mirror);

  const VirtualTube tube = sine_tube({});
  const TubeKeepParams prm = ControllerConfig{}.tube_keep(RobotParams{});
  std::size_t checked = 0, violated = 0, touched = 0;
  double worst_dir = std::numeric_limits<double>::infinity(), farthest_violation = 0.0;
  for (int n = 0; n < 10000; ++n) {
    const Sampled s = sample_inside(tube, rng, prm.r_s + 1e-3);
    try {
      const BoundaryBarriers w = tube_boundary_barriers(tube, s.p, prm);
      worst_dir = std::min(worst_dir, w.min_directional);
    } catch (const Error& e) {
      if (e.fault() == Fault::DirectionalConstraintViolated) {
        ++violated;
        farthest_violation = std::max(farthest_violation, project(tube, s.p).boundary_distance);
      } else if (e.fault() == Fault::PanelTouchesPoint) {
        ++touched;
      } else {
        throw;
      }
    }
    ++checked;
  }
  v.require(violated == 0 && touched == 0,
            "directional constraints at %zu in-tube points (extents %+.2f / %+.2f m): %zu violations, "
            "%zu points within r_s of a panel, min -t_c . grad phi over passing points = %.3e",
            checked, prm.ahead_extent, prm.behind_extent, violated, touched, worst_dir);
  if (violated > 0) v.note("every violating point lies within %.4f m of the boundary", farthest_violation);
  return v;
}

Verdict barrier_regimes() {
  Verdict v;
  const AvoidanceParams prm;  // k2 = 1, eps_m = eps_s = 1e-6, r_s = 0.4, r_a = 0.8
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> far(prm.r_s + prm.r_a, 10.0), near(1e-3, 2.0 * prm.r_s);

  std::size_t nonzero = 0;
  for (int n = 0; n < 10000; ++n) {
    const double d = std::nextafter(far(rng), 11.0);
    if (pair_barrier(d, prm).value != 0.0) ++nonzero;
  }
  v.require(nonzero == 0, "V_m = 0 exactly beyond r_s + r_a at 10^4 separations (%zu nonzero)", nonzero);

  // Random separations below 2 r_s, plus probes that approach 2 r_s from below.
  const double floor_m = prm.k2 / (2.0 * prm.eps_m * prm.r_s) * (1.0 - 1e-3);
  std::vector<double> seps;
  for (int n = 0; n < 10000; ++n) seps.push_back(near(rng));
  for (int k = 1; k <= 12; ++k) seps.push_back(2.0 * prm.r_s * (1.0 - std::pow(10.0, -k)));
  double worst = std::numeric_limits<double>::infinity(), worst_d = 0.0;
  for (double d : seps) {
    const double ratio = pair_barrier(d, prm).value / floor_m;
    if (ratio < worst) {
      worst = ratio;
      worst_d = d;
    }
  }
  v.require(worst >= 1.0, "V_m >= k2 / (2 eps_m r_s) (1 - 1e-3) below 2 r_s: worst ratio %.6f at d = %.12f m", worst,
            worst_d);

  const VirtualTube tube = sine_tube({});
  const double r_sp = modified_safety_radius(tube, 0.4);
  const TubeKeepParams keep = TubeKeepParams::for_radii(0.4, 0.8);
  std::uniform_real_distribution<double> beyond(keep.r_a, 5.0), below(1e-3, r_sp);
  nonzero = 0;
  for (int n = 0; n < 10000; ++n)
    if (unified_barrier_profile(std::nextafter(beyond(rng), 6.0), r_sp, keep).value != 0.0) ++nonzero;
  v.require(nonzero == 0, "V_t = 0 exactly beyond r_a at 10^4 distances (%zu nonzero)", nonzero);

  const double floor_t = keep.k3 / (keep.eps_t * r_sp) * (1.0 - 1e-3);
  std::vector<double> dists;
  for (int n = 0; n < 10000; ++n) dists.push_back(below(rng));
  for (int k = 1; k <= 12; ++k) dists.push_back(r_sp * (1.0 - std::pow(10.0, -k)));
  worst = std::numeric_limits<double>::infinity();
  for (double d : dists) {
    const double ratio = unified_barrier_profile(d, r_sp, keep).value / floor_t;
    if (ratio < worst) {
      worst = ratio;
      worst_d = d;
    }
  }
  v.require(worst >= 1.0, "V_t >= k3 / (eps_t r_s') (1 - 1e-3) below r_s' = %.6f m: worst ratio %.6f at d_t = %.12f m",
            r_sp, worst, worst_d);
  return v;
}

Verdict cbf_ordering() {
  Verdict v;
  const std::vector<std::size_t> sizes{5, 10, 20, 40};
  // Best of three repetitions per cell, to keep scheduler noise out of the comparison.
  std::map<std::pair<std::size_t, std::string>, double> best;
  for (int rep = 0; rep < 3; ++rep) {
    for (const auto& row : timing_benchmark(sizes, 100)) {
      const auto key = std::pair{row.robots, row.variant};
      const auto it = best.find(key);
      if (it == best.end() || row.mean_step_ns < it->second) best[key] = row.mean_step_ns;
    }
  }
  for (std::size_t m : sizes) {
    const double ours = best[{m, "ours-distributed"}], cbf = best[{m, "cbf-distributed"}];
    v.require(ours < cbf, "M = %2zu: ours-distributed %.0f ns < cbf-distributed %.0f ns", m, ours, cbf);
  }
  const double ours_growth = best[{40, "ours-centralized-sum"}] / best[{5, "ours-centralized-sum"}];
  const double cbf_growth = best[{40, "cbf-centralized"}] / best[{5, "cbf-centralized"}];
  v.require(cbf_growth > ours_growth, "growth from M = 5 to 40: cbf-centralized x%.2f > ours-centralized-sum x%.2f",
            cbf_growth, ours_growth);
  return v;
}

// Intersection of two closed segments by solving for both parameters.
bool crosses(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
  const Vec2 r = a1 - a0, s = b1 - b0, q = b0 - a0;
  const double den = r.x() * s.y() - r.y() * s.x();
  if (std::abs(den) < 1e-15) {
    if (std::abs(q.x() * r.y() - q.y() * r.x()) > 1e-12) return false;
    const double rr = r.squaredNorm();
    const double t0 = q.dot(r) / rr, t1 = (b1 - a0).dot(r) / rr;
    return std::max(t0, t1) >= 0.0 && std::min(t0, t1) <= 1.0;
  }
  const double t = (q.x() * s.y() - q.y() * s.x()) / den;
  const double u = (q.x() * r.y() - q.y() * r.x()) / den;
  return t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0;
}

bool brute_force_proper(const VirtualTube& tube) {
  const std::size_t n = tube.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Station& a = tube.station(i);
    const Vec2 a0 = a.p + a.lambda_l * a.n_c, a1 = a.p + a.lambda_r * a.n_c;
    for (std::size_t j = i + 1; j < n; ++j) {
      const Station& b = tube.station(j);
      if (crosses(a0, a1, b.p + b.lambda_l * b.n_c, b.p + b.lambda_r * b.n_c)) return false;
    }
  }
  return true;
}

VirtualTube widened(const VirtualTube& base, double left, double right) {
  std::vector<Station> st = base.stations();
  for (auto& s : st) {
    s.lambda_l = -left;
    s.lambda_r = right;
  }
  return VirtualTube(std::move(st));
}

std::vector<Vec2> hairpin(double radius, double leg) {
  std::vector<Vec2> pts;
  for (int k = 0; k <= 40; ++k) pts.emplace_back(leg * k / 40.0, 0.0);
  for (int k = 1; k <= 200; ++k) {
    const double a = std::numbers::pi * k / 200.0;
    pts.emplace_back(leg + radius * std::sin(a), radius * (1.0 - std::cos(a)));
  }
  for (int k = 1; k <= 40; ++k) pts.emplace_back(leg * (1.0 - k / 40.0), 2.0 * radius);
  return pts;
}

Verdict geometry_oracles() {
  Verdict v;
  std::vector<std::pair<std::string, VirtualTube>> suite;
  suite.emplace_back("straight", straight_tube(12.0, 2.0, 0.1));
  suite.emplace_back("sine", sine_tube({}));
  suite.emplace_back("lab", load_tube_or_scenario("scenarios/lab_analog.json"));
  suite.emplace_back("teach", load_tube_or_scenario("scenarios/teach_loop.json"));
  const VirtualTube pin = build_tube_from_waypoints(hairpin(3.0, 6.0), {1.0}, 0.1);
  suite.emplace_back("hairpin w1.0", pin);
  suite.emplace_back("hairpin w2.8", widened(pin, 2.8, 2.8));
  suite.emplace_back("hairpin w3.4", widened(pin, 3.4, 3.4));
  suite.emplace_back("sine w4.5", widened(sine_tube({}), 4.5, 4.5));
  suite.emplace_back("sine lopsided", widened(sine_tube({}), 1.0, 5.0));
  {
    std::vector<Station> st;
    for (int k = 0; k <= 40; ++k) {
      Station s;
      const bool second = k > 20;
      s.p = second ? Vec2(2.0, 0.1 * (k - 20)) : Vec2(0.1 * k, 0.0);
      s.t_c = second ? Vec2(0.0, 1.0) : Vec2(1.0, 0.0);
      s.n_c = rotate_left(s.t_c);
      s.s = 0.1 * k;
      s.l = 0.1 * (k - 40);
      s.lambda_l = -0.8;
      s.lambda_r = 0.8;
      st.push_back(s);
    }
    suite.emplace_back("corner", VirtualTube(std::move(st)));
  }
  std::size_t agree = 0, improper = 0;
  for (const auto& [name, tube] : suite) {
    const bool fast = validate_proper(tube).proper();
    const bool slow = brute_force_proper(tube);
    agree += fast == slow;
    improper += !slow;
    v.note("%-14s validate_proper %-8s brute force %s", name.c_str(), fast ? "proper" : "improper",
           slow ? "proper" : "improper");
  }
  v.require(agree == suite.size() && improper > 0 && improper < suite.size(),
            "validate_proper agrees with brute force on %zu/%zu tubes (%zu improper)", agree, suite.size(), improper);

  const VirtualTube tube = sine_tube({});
  const double r_s = 0.4;
  const double r_sp = modified_safety_radius(tube, r_s);
  std::mt19937_64 rng(17);
  std::size_t tested = 0, eroded = 0;
  double worst_clear = std::numeric_limits<double>::infinity();
  while (tested < 10000) {
    const Sampled s = sample_inside(tube, rng, 0.0);
    const TubeProjection at = project(tube, s.p);
    if (at.boundary_distance < r_sp) continue;
    ++tested;
    const double clear = boundary_clearance(tube, s.p);
    worst_clear = std::min(worst_clear, clear);
    if (clear < r_s - 1e-9) ++eroded;
  }
  v.require(eroded == 0, "d_t >= r_s' = %.6f m keeps the safety disk inside at %zu points (min clearance %.6f m)",
            r_sp, tested, worst_clear);

  double worst_trip = 0.0;
  std::size_t trips = 0;
  while (trips < 10000) {
    const Sampled s = sample_inside(tube, rng, 0.01);
    const TubeProjection at = project(tube, s.p);
    if (at.segment != s.segment) continue;  // a closer cross section owns the point
    ++trips;
    worst_trip = std::max(worst_trip, (at.foot + at.lambda * at.n_c - s.p).norm());
  }
  v.require(worst_trip <= 1e-9, "projection round trip at %zu points: worst %.2e m", trips, worst_trip);
  return v;
}

const std::vector<std::pair<const char*, std::function<Verdict()>>> kCriteria = {
    {"sine-tube reproduction, 20 robots", reproduction_run},
    {"six-robot lab analog", lab_analog},
    {"Lyapunov monotonicity, full controller", lyapunov_monotonicity},
    {"gradient battery", gradient_battery_check},
    {"line-integral Lyapunov lower bound", lyapunov_lower_bound},
    {"panel-field geometry", panel_geometry},
    {"barrier regimes", barrier_regimes},
    {"CBF-QP timing ordering", cbf_ordering},
    {"geometry oracles", geometry_oracles},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> which;
  for (int a = 1; a < argc; ++a) {
    const int k = std::atoi(argv[a]);
    if (k < 1 || k > static_cast<int>(kCriteria.size())) {
      std::fprintf(stderr, "usage: %s [criterion 1-%zu ...]\n", argv[0], kCriteria.size());
      return 2;
    }
    which.push_back(static_cast<std::size_t>(k));
  }
  if (which.empty())
    for (std::size_t k = 1; k <= kCriteria.size(); ++k) which.push_back(k);

  bool all = true;
  for (std::size_t k : which) {
    const auto& [title, check] = kCriteria[k - 1];
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.require(false, "threw: %s", e.what());
    }
    std::printf("criterion %zu: %s (%s)\n", k, v.pass ? "PASS" : "FAIL", title);
    for (const auto& line : v.lines) std::printf("%s\n", line.c_str());
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
