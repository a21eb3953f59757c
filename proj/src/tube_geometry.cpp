#include "tubenav/tube_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Geometry>

#include "tubenav/errors.hpp"

namespace tubenav {

namespace {

std::vector<Vec2> dedupe(const std::vector<Vec2>& pts) {
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (const auto& p : pts) {
    if (!p.allFinite()) fail(Fault::InvalidConfig, "non-finite curve point");
    if (out.empty() || (p - out.back()).norm() > 1e-12) out.push_back(p);
  }
  return out;
}

void check_simple(const std::vector<Vec2>& pts) {
  if ((pts.front() - pts.back()).norm() <= kGeomTol)
    fail(Fault::SelfIntersectingCurve, "generating curve is closed");
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 2; j + 1 < n; ++j) {
      if (segments_intersect(pts[i], pts[i + 1], pts[j], pts[j + 1]))
        fail(Fault::SelfIntersectingCurve, "generating curve crosses itself between segments " +
                                               std::to_string(i) + " and " + std::to_string(j));
    }
  }
}

// Arc-length resampling of a polyline; returns station positions and arc coordinates.
std::vector<Vec2> resample(const std::vector<Vec2>& pts, double spacing, double& step) {
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    fail(Fault::DegenerateSpacing, "resample spacing must be positive");
  std::vector<double> cum(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) cum[i] = cum[i - 1] + (pts[i] - pts[i - 1]).norm();
  const double total = cum.back();
  if (!(total > kGeomTol)) fail(Fault::DegenerateSpacing, "generating curve has zero length");
  const double segments = std::ceil(total / spacing - 1e-9);
  if (segments > 1e6) fail(Fault::DegenerateSpacing, "resample spacing too small for curve length");
  const auto n = static_cast<std::size_t>(std::max(1.0, segments)) + 1;
  step = total / static_cast<double>(n - 1);

  std::vector<Vec2> out;
  out.reserve(n);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = (k + 1 == n) ? total : step * static_cast<double>(k);
    while (seg + 2 < pts.size() && cum[seg + 1] < s) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double u = std::clamp((s - cum[seg]) / len, 0.0, 1.0);
    out.push_back((1.0 - u) * pts[seg] + u * pts[seg + 1]);
  }
  return out;
}

std::vector<Station> frames(const std::vector<Vec2>& pos, double step) {
  const std::size_t n = pos.size();
  std::vector<Station> st(n);
  const double total = step * static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2& a = pos[k == 0 ? 0 : k - 1];
    const Vec2& b = pos[k + 1 == n ? n - 1 : k + 1];
    st[k].p = pos[k];
    st[k].t_c = (b - a).normalized();
    st[k].n_c = rotate_left(st[k].t_c);
    st[k].s = step * static_cast<double>(k);
    st[k].l = st[k].s - total;
  }
  st.back().l = 0.0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const Vec2& ta = st[k - 1].t_c;
    const Vec2& tb = st[k + 1].t_c;
    const double angle = std::atan2(cross(ta, tb), ta.dot(tb));
    // End tangents are one-sided chords, centred half a step inside the tube.
    const double reach = static_cast<double>((k - 1 == 0) + (k + 1 == n - 1));
    st[k].kappa = angle / (st[k + 1].s - st[k - 1].s - 0.5 * step * reach);
  }
  if (n > 2) {
    st.front().kappa = st[1].kappa;
    st.back().kappa = st[n - 2].kappa;
  }
  return st;
}

VirtualTube finalize(std::vector<Station> st) {
  VirtualTube tube(std::move(st));
  const auto diag = validate_proper(tube);
  if (!diag.proper()) fail(Fault::ImproperTube, "tube violates the proper-tube condition: " + diag.summary());
  return tube;
}

struct Section {
  Vec2 p, t, n;
  double lambda_l, lambda_r;
};

Section section_at(const VirtualTube& tube, std::size_t k, double u) {
  const Station& a = tube.station(k);
  if (u == 0.0 || k + 1 == tube.size()) return {a.p, a.t_c, a.n_c, a.lambda_l, a.lambda_r};
  const Station& b = tube.station(k + 1);
  const Vec2 t = ((1.0 - u) * a.t_c + u * b.t_c).normalized();
  return {(1.0 - u) * a.p + u * b.p, t, rotate_left(t), (1.0 - u) * a.lambda_l + u * b.lambda_l,
          (1.0 - u) * a.lambda_r + u * b.lambda_r};
}

}  // namespace

VirtualTube::VirtualTube(std::vector<Station> stations, double r_s_prime, double eta_min, double eta_max)
    : stations_(std::move(stations)), r_s_prime_(r_s_prime), eta_min_(eta_min), eta_max_(eta_max) {
  const std::size_t n = stations_.size();
  if (n < 2) fail(Fault::DegenerateSpacing, "tube needs at least two stations");
  if (!(eta_min > 0.0 && eta_min <= 1.0 && eta_max >= 1.0 && std::isfinite(eta_max)))
    fail(Fault::InvalidConfig, "scaling-factor bounds must satisfy 0 < eta_min <= 1 <= eta_max");
  left_.resize(n);
  right_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Station& s = stations_[k];
    if (!(s.lambda_l <= 0.0 && s.lambda_r >= 0.0 && s.lambda_r > s.lambda_l))
      fail(Fault::InvalidConfig, "station " + std::to_string(k) + " has invalid lateral extents");
    left_[k] = s.p + s.lambda_l * s.n_c;
    right_[k] = s.p + s.lambda_r * s.n_c;
  }
  auto tangents = [n, this](const std::vector<Vec2>& pts) {
    std::vector<Vec2> out(n);
    for (std::size_t k = 0; k < n; ++k) {
      const Vec2 d = pts[k + 1 == n ? n - 1 : k + 1] - pts[k == 0 ? 0 : k - 1];
      out[k] = d.norm() > kGeomTol ? Vec2(d.normalized()) : stations_[k].t_c;
    }
    return out;
  };
  left_tangent_ = tangents(left_);
  right_tangent_ = tangents(right_);
  spacing_ = length() / static_cast<double>(n - 1);
}

double VirtualTube::half_width(std::size_t k) const {
  return 0.5 * std::abs(stations_[k].lambda_r - stations_[k].lambda_l);
}

Vec2 VirtualTube::middle(std::size_t k) const { return 0.5 * (left_[k] + right_[k]); }

double VirtualTube::min_half_width() const {
  double w = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < size(); ++k) w = std::min(w, half_width(k));
  return w;
}

VirtualTube VirtualTube::with_r_s_prime(double r) const {
  VirtualTube copy = *this;
  copy.r_s_prime_ = r;
  return copy;
}

VirtualTube VirtualTube::with_eta_bounds(double lo, double hi) const {
  return VirtualTube(stations_, r_s_prime_, lo, hi);
}

TubeProjection project(const VirtualTube& tube, const Vec2& y) {
  const auto& st = tube.stations();
  const std::size_t n = st.size();

  struct Candidate {
    std::size_t segment;
    double u;
    Extent extent;
    double lambda;
  };
  Candidate best{0, 0.0, Extent::Within, std::numeric_limits<double>::infinity()};
  bool found = false;
  auto consider = [&](const Candidate& c) {
    if (!found || std::abs(c.lambda) < std::abs(best.lambda)) {
      best = c;
      found = true;
    }
  };

  double f_prev = (y - st[0].p).dot(st[0].t_c);
  if (f_prev < 0.0) consider({0, 0.0, Extent::BeforeStart, (y - st[0].p).dot(st[0].n_c)});
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double f_next = (y - st[k + 1].p).dot(st[k + 1].t_c);
    if (f_prev >= 0.0 && f_next < 0.0) {
      const Vec2 dp = st[k + 1].p - st[k].p;
      const Vec2 dt = st[k + 1].t_c - st[k].t_c;
      const Vec2 r0 = y - st[k].p;
      const double a0 = f_prev;
      const double a1 = r0.dot(dt) - dp.dot(st[k].t_c);
      const double a2 = -dp.dot(dt);
      auto f = [&](double u) { return a0 + (a1 + a2 * u) * u; };
      // Bracketed Newton on the quadratic residual f(0) >= 0 > f(1).
      double lo = 0.0, hi = 1.0;
      double u = a0 / (a0 - f_next);
      for (int it = 0; it < 100; ++it) {
        const double fu = f(u);
        if (fu == 0.0) break;
        if (fu > 0.0) lo = u; else hi = u;
        const double df = a1 + 2.0 * a2 * u;
        double next = df != 0.0 ? u - fu / df : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - u) <= 1e-17 || hi - lo <= 1e-16) {
          u = next;
          break;
        }
        u = next;
      }
      const Vec2 t = ((1.0 - u) * st[k].t_c + u * st[k + 1].t_c).normalized();
      const Vec2 p = st[k].p + u * dp;
      consider({k, u, Extent::Within, (y - p).dot(rotate_left(t))});
    }
    f_prev = f_next;
  }
  if (f_prev >= 0.0) consider({n - 2, 1.0, Extent::PastFinish, (y - st[n - 1].p).dot(st[n - 1].n_c)});
  if (!found) fail(Fault::ProjectionFailed, "no cross section contains the query point");

  TubeProjection out;
  out.segment = best.segment;
  out.fraction = best.u;
  out.extent = best.extent;
  out.lambda = best.lambda;
  if (best.extent == Extent::Within) {
    const Station& a = st[best.segment];
    const Station& b = st[best.segment + 1];
    const double u = best.u;
    out.t_c = ((1.0 - u) * a.t_c + u * b.t_c).normalized();
    out.n_c = rotate_left(out.t_c);
    out.foot = a.p + u * (b.p - a.p);
    out.l = (1.0 - u) * a.l + u * b.l;
    out.kappa = (1.0 - u) * a.kappa + u * b.kappa;
    out.lambda_l = (1.0 - u) * a.lambda_l + u * b.lambda_l;
    out.lambda_r = (1.0 - u) * a.lambda_r + u * b.lambda_r;
  } else {
    const Station& e = best.extent == Extent::PastFinish ? st.back() : st.front();
    out.t_c = e.t_c;
    out.n_c = e.n_c;
    const double along = (y - e.p).dot(e.t_c);
    out.foot = e.p + along * e.t_c;
    out.l = e.l + along;
    out.kappa = e.kappa;
    out.lambda_l = e.lambda_l;
    out.lambda_r = e.lambda_r;
  }
  const double stretch = 1.0 - out.kappa * out.lambda;
  out.eta = stretch > 0.0 ? std::clamp(1.0 / stretch, tube.eta_min(), tube.eta_max()) : tube.eta_max();
  out.half_width = 0.5 * (out.lambda_r - out.lambda_l);
  out.middle = out.foot + 0.5 * (out.lambda_l + out.lambda_r) * out.n_c;
  out.boundary_distance = out.half_width - (y - out.middle).norm();
  out.inside = out.extent == Extent::Within && out.lambda >= out.lambda_l && out.lambda <= out.lambda_r;
  return out;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  const double u = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + u * ab)).norm();
}

double distance_to_boundary(const VirtualTube& tube, const Vec2& y) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < tube.size(); ++k) {
    best = std::min(best, point_segment_distance(y, tube.left_point(k), tube.left_point(k + 1)));
    best = std::min(best, point_segment_distance(y, tube.right_point(k), tube.right_point(k + 1)));
  }
  return best;
}

bool segments_intersect(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
  auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) { return cross(q - p, r - p); };
  auto on_segment = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    return std::min(p.x(), r.x()) <= q.x() && q.x() <= std::max(p.x(), r.x()) &&
           std::min(p.y(), r.y()) <= q.y() && q.y() <= std::max(p.y(), r.y());
  };
  const double o1 = orient(a0, a1, b0);
  const double o2 = orient(a0, a1, b1);
  const double o3 = orient(b0, b1, a0);
  const double o4 = orient(b0, b1, a1);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0)))
    return true;
  if (o1 == 0 && on_segment(a0, b0, a1)) return true;
  if (o2 == 0 && on_segment(a0, b1, a1)) return true;
  if (o3 == 0 && on_segment(b0, a0, b1)) return true;
  if (o4 == 0 && on_segment(b0, a1, b1)) return true;
  return false;
}

std::string ProperDiagnostics::summary(std::size_t max_items) const {
  if (proper()) return "PASS";
  std::ostringstream os;
  os << "FAIL";
  if (!curvature_violations.empty()) {
    os << " curvature at stations";
    for (std::size_t i = 0; i < std::min(max_items, curvature_violations.size()); ++i)
      os << ' ' << curvature_violations[i];
    if (curvature_violations.size() > max_items) os << " ... (" << curvature_violations.size() << " total)";
    os << ';';
  }
  if (!intersecting.empty()) {
    os << " intersecting cross sections";
    for (std::size_t i = 0; i < std::min(max_items, intersecting.size()); ++i)
      os << " (" << intersecting[i].first << ',' << intersecting[i].second << ')';
    if (intersecting.size() > max_items) os << " ... (" << intersecting.size() << " total)";
  }
  return os.str();
}

ProperDiagnostics validate_proper(const VirtualTube& tube) {
  ProperDiagnostics diag;
  const std::size_t n = tube.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Station& s = tube.station(k);
    if (1.0 - s.kappa * s.lambda_l <= kProperMargin || 1.0 - s.kappa * s.lambda_r <= kProperMargin)
      diag.curvature_violations.push_back(k);
  }
  std::vector<Eigen::AlignedBox2d> boxes(n);
  for (std::size_t k = 0; k < n; ++k) {
    boxes[k].extend(tube.left_point(k));
    boxes[k].extend(tube.right_point(k));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!boxes[i].intersects(boxes[j])) continue;
      if (segments_intersect(tube.left_point(i), tube.right_point(i), tube.left_point(j), tube.right_point(j)))
        diag.intersecting.emplace_back(i, j);
    }
  }
  return diag;
}

VirtualTube build_tube_from_waypoints(const std::vector<Vec2>& waypoints,
                                      const std::vector<double>& half_widths, double spacing) {
  if (waypoints.size() < 2) fail(Fault::InvalidConfig, "need at least two waypoints");
  if (half_widths.size() != waypoints.size() && half_widths.size() != 1)
    fail(Fault::InvalidConfig, "half_widths must have one entry or one per waypoint");
  for (double w : half_widths)
    if (!(w > 0.0)) fail(Fault::InvalidConfig, "half widths must be positive");
  if (half_widths.size() == 1) {
    const double w = half_widths.front();
    return build_tube_from_waypoints(waypoints, [w](double, double) { return std::pair{w, w}; }, spacing);
  }
  std::vector<double> cum(waypoints.size(), 0.0);
  for (std::size_t i = 1; i < waypoints.size(); ++i)
    cum[i] = cum[i - 1] + (waypoints[i] - waypoints[i - 1]).norm();
  auto widths = [cum, half_widths](double s, double) {
    const auto it = std::upper_bound(cum.begin(), cum.end(), s);
    if (it == cum.begin()) return std::pair{half_widths.front(), half_widths.front()};
    if (it == cum.end()) return std::pair{half_widths.back(), half_widths.back()};
    const auto i = static_cast<std::size_t>(it - cum.begin());
    const double span = cum[i] - cum[i - 1];
    const double u = span > 0.0 ? (s - cum[i - 1]) / span : 0.0;
    const double w = (1.0 - u) * half_widths[i - 1] + u * half_widths[i];
    return std::pair{w, w};
  };
  return build_tube_from_waypoints(waypoints, widths, spacing);
}

VirtualTube build_tube_from_waypoints(const std::vector<Vec2>& waypoints, const HalfWidthFn& widths,
                                      double spacing) {
  const auto pts = dedupe(waypoints);
  if (pts.size() < 2) fail(Fault::InvalidConfig, "need at least two distinct waypoints");
  check_simple(pts);
  double step = 0.0;
  const auto samples = resample(pts, spacing, step);
  auto st = frames(samples, step);
  const double total = st.back().s;
  for (auto& s : st) {
    const auto [left, right] = widths(s.s, total);
    if (!(left > 0.0 && right > 0.0)) fail(Fault::InvalidConfig, "half widths must be positive");
    s.lambda_l = -left;
    s.lambda_r = right;
  }
  return finalize(std::move(st));
}

VirtualTube build_tube_from_trajectory(const std::vector<Vec2>& trajectory,
                                       const std::vector<Vec2>& obstacles, double clearance_cap,
                                       double spacing) {
  const auto pts = dedupe(trajectory);
  if (pts.size() < 2) fail(Fault::EmptyTrajectory, "trajectory needs at least two distinct points");
  if (!(clearance_cap > 0.0)) fail(Fault::InvalidConfig, "clearance cap must be positive");
  check_simple(pts);
  double step = 0.0;
  const auto samples = resample(pts, spacing, step);
  auto st = frames(samples, step);
  for (auto& s : st) {
    double left = clearance_cap, right = clearance_cap;
    for (const auto& o : obstacles) {
      const Vec2 d = o - s.p;
      const double side = d.dot(s.n_c);
      if (side > 0.0) right = std::min(right, d.norm());
      else if (side < 0.0) left = std::min(left, d.norm());
      else {
        left = std::min(left, d.norm());
        right = std::min(right, d.norm());
      }
    }
    if (!(left > kGeomTol && right > kGeomTol))
      fail(Fault::ImproperTube, "an obstacle lies on the trajectory");
    s.lambda_l = -left;
    s.lambda_r = right;
  }
  return finalize(std::move(st));
}

double modified_safety_radius(const VirtualTube& tube, double r_s) {
  if (!(r_s > 0.0)) fail(Fault::InvalidConfig, "safety radius must be positive");
  if (tube.min_half_width() <= r_s)
    fail(Fault::TubeTooNarrow, "tube half width does not exceed the safety radius");
  constexpr int kSub = 4;
  constexpr int kScan = 128;
  double worst = 0.0;
  for (std::size_t k = 0; k < tube.size(); ++k) {
    for (int sub = 0; sub < (k + 1 == tube.size() ? 1 : kSub); ++sub) {
      const Section sec = section_at(tube, k, static_cast<double>(sub) / kSub);
      auto clear = [&](double lam) { return distance_to_boundary(tube, sec.p + lam * sec.n) >= r_s; };
      const double span = sec.lambda_r - sec.lambda_l;
      // Walk inwards from one end until the first cleared sample, then bisect the crossing.
      auto inner_edge = [&](double from, double dir) {
        double prev = from;
        for (int i = 1; i <= kScan; ++i) {
          const double lam = from + dir * span * i / kScan;
          if (clear(lam)) {
            double lo = prev, hi = lam;
            for (int it = 0; it < 60 && std::abs(hi - lo) > 1e-12; ++it) {
              const double mid = 0.5 * (lo + hi);
              (clear(mid) ? hi : lo) = mid;
            }
            return hi;
          }
          prev = lam;
        }
        fail(Fault::TubeTooNarrow, "cross section " + std::to_string(k) + " has no point clear of the boundary");
      };
      const double a = inner_edge(sec.lambda_l, 1.0);
      const double b = inner_edge(sec.lambda_r, -1.0);
      worst = std::max({worst, a - sec.lambda_l, sec.lambda_r - b});
    }
  }
  return worst;
}

}  // namespace tubenav
