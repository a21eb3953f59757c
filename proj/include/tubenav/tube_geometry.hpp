#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tubenav/scalar_fields.hpp"

namespace tubenav {

inline constexpr double kGeomTol = 1e-9;
inline constexpr double kProperMargin = 1e-6;

// One sample of the generating curve. lambda_l <= 0 <= lambda_r are offsets along n_c.
struct Station {
  Vec2 p;
  Vec2 t_c;
  Vec2 n_c;
  double kappa = 0.0;
  double s = 0.0;
  double l = 0.0;
  double lambda_l = 0.0;
  double lambda_r = 0.0;
};

class VirtualTube {
 public:
  VirtualTube(std::vector<Station> stations, double r_s_prime = 0.0, double eta_min = 0.2,
              double eta_max = 5.0);

  const std::vector<Station>& stations() const { return stations_; }
  const Station& station(std::size_t k) const { return stations_[k]; }
  std::size_t size() const { return stations_.size(); }
  double spacing() const { return spacing_; }
  double length() const { return stations_.back().s - stations_.front().s; }
  const Vec2& start() const { return stations_.front().p; }
  const Vec2& finish() const { return stations_.back().p; }

  const Vec2& left_point(std::size_t k) const { return left_[k]; }
  const Vec2& right_point(std::size_t k) const { return right_[k]; }
  const Vec2& left_tangent(std::size_t k) const { return left_tangent_[k]; }
  const Vec2& right_tangent(std::size_t k) const { return right_tangent_[k]; }
  double half_width(std::size_t k) const;
  Vec2 middle(std::size_t k) const;
  double min_half_width() const;

  double r_s_prime() const { return r_s_prime_; }
  double eta_min() const { return eta_min_; }
  double eta_max() const { return eta_max_; }
  VirtualTube with_r_s_prime(double r) const;
  VirtualTube with_eta_bounds(double eta_min, double eta_max) const;

 private:
  std::vector<Station> stations_;
  std::vector<Vec2> left_, right_, left_tangent_, right_tangent_;
  double spacing_ = 0.0;
  double r_s_prime_;
  double eta_min_, eta_max_;
};

enum class Extent { Within, BeforeStart, PastFinish };

struct TubeProjection {
  std::size_t segment = 0;
  double fraction = 0.0;
  Extent extent = Extent::Within;
  Vec2 foot;
  Vec2 t_c;
  Vec2 n_c;
  double lambda = 0.0;
  double l = 0.0;
  double kappa = 0.0;
  double eta = 1.0;
  double lambda_l = 0.0;
  double lambda_r = 0.0;
  double half_width = 0.0;
  Vec2 middle;
  double boundary_distance = 0.0;  // r_t - |y - m|
  bool inside = false;
};

TubeProjection project(const VirtualTube& tube, const Vec2& y);

// Euclidean distance from y to the two side boundary polylines.
double distance_to_boundary(const VirtualTube& tube, const Vec2& y);

using HalfWidthFn = std::function<std::pair<double, double>(double s, double length)>;

VirtualTube build_tube_from_waypoints(const std::vector<Vec2>& waypoints,
                                      const std::vector<double>& half_widths, double spacing);
VirtualTube build_tube_from_waypoints(const std::vector<Vec2>& waypoints, const HalfWidthFn& widths,
                                      double spacing);
VirtualTube build_tube_from_trajectory(const std::vector<Vec2>& trajectory,
                                       const std::vector<Vec2>& obstacles, double clearance_cap,
                                       double spacing);

struct ProperDiagnostics {
  std::vector<std::pair<std::size_t, std::size_t>> intersecting;
  std::vector<std::size_t> curvature_violations;
  bool proper() const { return intersecting.empty() && curvature_violations.empty(); }
  std::string summary(std::size_t max_items = 8) const;
};

ProperDiagnostics validate_proper(const VirtualTube& tube);

double modified_safety_radius(const VirtualTube& tube, double r_s);

bool segments_intersect(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1);
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

}  // namespace tubenav
