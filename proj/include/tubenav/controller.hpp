#pragma once

#include <cstddef>
#include <vector>

#include "tubenav/potentials.hpp"
#include "tubenav/tube_geometry.hpp"

namespace tubenav {

struct RobotParams {
  int id = 0;
  double r_s = 0.4;
  double r_a = 0.8;
  double v_max = 1.0;
};

struct Robot {
  RobotParams params;
  Vec2 position = Vec2::Zero();
  bool finished = false;
};

struct SwarmState {
  std::vector<Robot> robots;
  double time = 0.0;
};

enum class Variant { Full, Modified };

struct ControllerConfig {
  Variant variant = Variant::Modified;
  double k1 = 1.0;
  double k2 = 1.0;
  double k3 = 1.0;
  double eps_m = 1e-6;
  double eps_t = 1e-6;
  double eps_s = 1e-6;
  double rho = 0.0;  // 0 selects the smallest admissible offset
  double eps_0 = 0.1;
  // Panel extents as multiples of r_a; see TubeKeepParams.
  double ahead_extent_ratio = 0.5;
  double behind_extent_ratio = -6.0;

  AvoidanceParams avoidance(const RobotParams& robot) const;
  TubeKeepParams tube_keep(const RobotParams& robot) const;
  double finish_offset(const VirtualTube& tube, double v_max) const;
  void validate(const VirtualTube& tube, const SwarmState& state) const;
};

struct ControlCommand {
  Vec2 velocity = Vec2::Zero();
  Vec2 line_approaching = Vec2::Zero();
  Vec2 robot_avoidance = Vec2::Zero();
  Vec2 tube_keeping = Vec2::Zero();
  Vec2 stack = Vec2::Zero();  // sum of the three terms before the outer saturation
  double kappa = 1.0;
  // Full: V_l + 1/2 sum V_m + V_tl + V_tr. Modified: 1/2 sum V_m + V_t.
  double potential = 0.0;
};

std::vector<std::size_t> neighbor_set(const SwarmState& state, std::size_t i);

ControlCommand full_command(const VirtualTube& tube, const SwarmState& state, std::size_t i,
                            const ControllerConfig& config);
ControlCommand modified_command(const VirtualTube& tube, const SwarmState& state, std::size_t i,
                                const ControllerConfig& config);
ControlCommand command(const VirtualTube& tube, const SwarmState& state, std::size_t i,
                       const ControllerConfig& config);

struct LyapunovSample {
  double value = 0.0;
  double derivative = 0.0;
};

LyapunovSample lyapunov_and_derivative(const std::vector<ControlCommand>& commands, const SwarmState& state);
LyapunovSample lyapunov_and_derivative(const VirtualTube& tube, const SwarmState& state,
                                       const ControllerConfig& config);

bool finished(const VirtualTube& tube, const Vec2& p, const ControllerConfig& config);

}  // namespace tubenav
