#pragma once

#include <cstddef>
#include <limits>

#include "tubenav/scalar_fields.hpp"
#include "tubenav/tube_geometry.hpp"

namespace tubenav {

struct AvoidanceParams {
  double k2 = 1.0;
  double eps_m = 1e-6;
  double eps_s = 1e-6;
  double r_s = 0.4;
  double r_a = 0.8;
};

struct PairBarrier {
  double value = 0.0;
  double b = 0.0;  // -(dV/d|p_ij|) / |p_ij|
};

// Barrier as a function of the separation distance alone.
PairBarrier pair_barrier(double distance, const AvoidanceParams& params);
PairBarrier pair_barrier(const Vec2& p_i, const Vec2& p_j, const AvoidanceParams& params);

// Log-source segment a + x t, x between g1 and g2 (g1 > g2 flips the sign of the integral).
struct Panel {
  Vec2 anchor;
  Vec2 direction;
  double g1 = 0.0;
  double g2 = 0.0;
  double threshold = 0.0;
};

double panel_potential(const Vec2& p, const Panel& panel);
Vec2 panel_gradient(const Vec2& p, const Panel& panel);

struct TubeKeepParams {
  double k3 = 1.0;
  double eps_t = 1e-6;
  double eps_s = 1e-6;
  double r_s = 0.4;
  double r_a = 0.8;
  // Panel extents along the boundary tangent; ahead > 0 > behind.
  double ahead_extent = 0.4;
  double behind_extent = -2.4;
  bool enforce_directional = true;

  static TubeKeepParams for_radii(double r_s, double r_a);
};

struct BoundaryBarriers {
  double left = 0.0;
  double right = 0.0;
  Vec2 grad_left = Vec2::Zero();
  Vec2 grad_right = Vec2::Zero();
  std::size_t panels = 0;
  // Smallest -t_c . grad(phi) over all active panels, and where it occurred.
  double min_directional = std::numeric_limits<double>::infinity();
  std::size_t min_directional_station = 0;
};

BoundaryBarriers tube_boundary_barriers(const VirtualTube& tube, const Vec2& p, const TubeKeepParams& params);

struct UnifiedBarrier {
  double value = 0.0;
  double slope = 0.0;  // dV_t / d d_t
  double distance = 0.0;
  Vec2 c = Vec2::Zero();
};

// V_t and dV_t/dd_t for a given boundary distance d_t.
UnifiedBarrier unified_barrier_profile(double d_t, double r_s_prime, const TubeKeepParams& params);
UnifiedBarrier unified_tube_barrier(const VirtualTube& tube, const Vec2& p, const TubeKeepParams& params);

// Gradient of d_t = r_t - |p - m| with r_t and m differentiated numerically through projection.
Vec2 boundary_distance_gradient(const VirtualTube& tube, const Vec2& p, const TubeProjection& at);
Vec2 length_gradient(const VirtualTube& tube, const Vec2& p);

double line_integral_lyapunov(const VirtualTube& tube, const Vec2& y, double k1, double v_max);

}  // namespace tubenav
