#include "tubenav/controller.hpp"

#include <string>

#include "tubenav/errors.hpp"

namespace tubenav {

AvoidanceParams ControllerConfig::avoidance(const RobotParams& robot) const {
  return {k2, eps_m, eps_s, robot.r_s, robot.r_a};
}

TubeKeepParams ControllerConfig::tube_keep(const RobotParams& robot) const {
  TubeKeepParams p = TubeKeepParams::for_radii(robot.r_s, robot.r_a);
  p.k3 = k3;
  p.eps_t = eps_t;
  p.eps_s = eps_s;
  p.ahead_extent = ahead_extent_ratio * robot.r_a;
  p.behind_extent = behind_extent_ratio * robot.r_a;
  return p;
}

double ControllerConfig::finish_offset(const VirtualTube& tube, double v_max) const {
  return rho > 0.0 ? rho : v_max / (k1 * tube.eta_min());
}

void ControllerConfig::validate(const VirtualTube& tube, const SwarmState& state) const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) fail(Fault::InvalidConfig, what);
  };
  require(k1 > 0.0 && k2 > 0.0 && k3 > 0.0, "gains k1, k2, k3 must be positive");
  require(eps_m > 0.0 && eps_t > 0.0, "eps_m and eps_t must be positive");
  require(eps_s > 0.0 && eps_s <= SmoothSaturation::max_epsilon(), "eps_s out of range");
  require(eps_0 > 0.0, "eps_0 must be positive");
  require(rho >= 0.0, "rho must be non-negative");
  require(ahead_extent_ratio > 0.0 && behind_extent_ratio < 0.0, "panel extents must satisfy ahead > 0 > behind");
  for (const auto& r : state.robots) {
    const auto& p = r.params;
    require(p.r_s > 0.0 && p.r_a > p.r_s, "robot " + std::to_string(p.id) + " needs r_a > r_s > 0");
    require(p.v_max > 0.0, "robot " + std::to_string(p.id) + " needs a positive speed cap");
    if (variant == Variant::Modified) {
      require(k1 * finish_offset(tube, p.v_max) * tube.eta_min() >= p.v_max * (1.0 - 1e-12),
              "rho too small to keep the line-approaching term saturated");
      require(tube.r_s_prime() > 0.0 && tube.r_s_prime() < p.r_a,
              "modified safety radius must lie in (0, r_a) for robot " + std::to_string(p.id));
    }
  }
}

std::vector<std::size_t> neighbor_set(const SwarmState& state, std::size_t i) {
  std::vector<std::size_t> out;
  const Robot& me = state.robots[i];
  for (std::size_t j = 0; j < state.robots.size(); ++j) {
    if (j == i) continue;
    const Robot& other = state.robots[j];
    if (other.finished) continue;
    if ((me.position - other.position).norm() <= me.params.r_a + other.params.r_s) out.push_back(j);
  }
  return out;
}

namespace {

ControlCommand finished_command(const VirtualTube& tube, const Robot& robot) {
  ControlCommand cmd;
  const TubeProjection at = project(tube, robot.position);
  cmd.line_approaching = -robot.params.v_max * at.t_c;
  cmd.stack = cmd.line_approaching;
  cmd.velocity = robot.params.v_max * at.t_c;
  return cmd;
}

Vec2 avoidance_term(const SwarmState& state, std::size_t i, const AvoidanceParams& prm, double& potential) {
  Vec2 sum = Vec2::Zero();
  const Vec2& p = state.robots[i].position;
  for (std::size_t j : neighbor_set(state, i)) {
    const Vec2 diff = p - state.robots[j].position;
    const PairBarrier pb = pair_barrier(diff.norm(), prm);
    sum -= pb.b * diff;
    potential += 0.5 * pb.value;
  }
  return sum;
}

void close_out(ControlCommand& cmd, double v_max) {
  cmd.stack = cmd.line_approaching + cmd.robot_avoidance + cmd.tube_keeping;
  cmd.kappa = saturation_gain(cmd.stack, v_max);
  cmd.velocity = -cmd.kappa * cmd.stack;
}

}  // namespace

ControlCommand full_command(const VirtualTube& tube, const SwarmState& state, std::size_t i,
                            const ControllerConfig& cfg) {
  const Robot& robot = state.robots[i];
  if (robot.finished) return finished_command(tube, robot);
  const double v_max = robot.params.v_max;
  const TubeProjection at = project(tube, robot.position);
  ControlCommand cmd;
  cmd.line_approaching = saturate(cfg.k1 * at.l * at.eta * at.t_c, v_max);
  cmd.potential = line_integral_lyapunov(tube, robot.position, cfg.k1, v_max);
  cmd.robot_avoidance = avoidance_term(state, i, cfg.avoidance(robot.params), cmd.potential);
  const BoundaryBarriers walls = tube_boundary_barriers(tube, robot.position, cfg.tube_keep(robot.params));
  cmd.tube_keeping = walls.grad_left + walls.grad_right;
  cmd.potential += walls.left + walls.right;
  close_out(cmd, v_max);
  return cmd;
}

ControlCommand modified_command(const VirtualTube& tube, const SwarmState& state, std::size_t i,
                                const ControllerConfig& cfg) {
  const Robot& robot = state.robots[i];
  if (robot.finished) return finished_command(tube, robot);
  const double v_max = robot.params.v_max;
  const TubeProjection at = project(tube, robot.position);
  ControlCommand cmd;
  const double shifted = at.l - cfg.finish_offset(tube, v_max);
  cmd.line_approaching = saturate(cfg.k1 * shifted * at.eta * at.t_c, v_max);
  cmd.robot_avoidance = avoidance_term(state, i, cfg.avoidance(robot.params), cmd.potential);
  const auto keep = cfg.tube_keep(robot.params);
  const UnifiedBarrier barrier = unified_barrier_profile(at.boundary_distance, tube.r_s_prime(), keep);
  if (barrier.slope != 0.0) {
    const Vec2 c = barrier.slope * boundary_distance_gradient(tube, robot.position, at);
    cmd.tube_keeping = at.n_c.dot(c) * at.n_c;
  }
  cmd.potential += barrier.value;
  close_out(cmd, v_max);
  return cmd;
}

ControlCommand command(const VirtualTube& tube, const SwarmState& state, std::size_t i,
                       const ControllerConfig& cfg) {
  return cfg.variant == Variant::Full ? full_command(tube, state, i, cfg) : modified_command(tube, state, i, cfg);
}

LyapunovSample lyapunov_and_derivative(const std::vector<ControlCommand>& commands, const SwarmState& state) {
  LyapunovSample out;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (state.robots[i].finished) continue;
    out.value += commands[i].potential;
    out.derivative += commands[i].stack.dot(commands[i].velocity);
  }
  return out;
}

LyapunovSample lyapunov_and_derivative(const VirtualTube& tube, const SwarmState& state,
                                       const ControllerConfig& cfg) {
  std::vector<ControlCommand> commands;
  commands.reserve(state.robots.size());
  for (std::size_t i = 0; i < state.robots.size(); ++i) commands.push_back(command(tube, state, i, cfg));
  return lyapunov_and_derivative(commands, state);
}

bool finished(const VirtualTube& tube, const Vec2& p, const ControllerConfig& cfg) {
  return project(tube, p).l >= -cfg.eps_0;
}

}  // namespace tubenav
