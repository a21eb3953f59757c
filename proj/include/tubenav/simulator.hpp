#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tubenav/controller.hpp"
#include "tubenav/tube_geometry.hpp"

namespace tubenav {

struct ScenarioConfig {
  std::string name;
  VirtualTube tube;
  std::vector<Robot> robots;
  ControllerConfig controller;
  double dt = 0.01;
  double duration = 25.0;
  std::size_t stride = 10;  // trajectory rows are logged every stride steps; monitors run every step

  SwarmState initial_state() const { return {robots, 0.0}; }
};

struct InitialDiagnostics {
  std::vector<std::pair<int, int>> close_pairs;
  std::vector<int> uncontained;
  std::vector<int> past_finish;
  bool ok() const { return close_pairs.empty() && uncontained.empty() && past_finish.empty(); }
  std::string summary() const;
};

InitialDiagnostics validate_initial(const ScenarioConfig& config);

// Signed clearance of p from the side boundaries: negative outside the tube.
double boundary_clearance(const VirtualTube& tube, const Vec2& p);

struct StepResult {
  SwarmState next;
  std::vector<ControlCommand> commands;
  std::vector<double> command_ns;  // wall-clock per robot
};

// One explicit Euler step; every command reads the same snapshot.
StepResult step(const SwarmState& state, const VirtualTube& tube, const ControllerConfig& config, double dt);

struct SafetyViolation {
  double time = 0.0;
  int robot = 0;
  int other = -1;  // -1 for a boundary violation
  double value = 0.0;
  std::string describe() const;
};

struct MetricRow {
  double t = 0.0;
  double min_pair = 0.0;
  double min_boundary = 0.0;
  double V = 0.0;
  double Vdot = 0.0;
  std::size_t finished_count = 0;
  // Change of V since the previous row, over robots unfinished at both rows.
  double V_increase = 0.0;
};

struct RobotSample {
  int id = 0;
  Vec2 position;
  Vec2 velocity;
  bool finished = false;
};

struct SimulationLog {
  double dt = 0.0;
  std::vector<double> sample_times;
  std::vector<std::vector<RobotSample>> samples;
  std::vector<MetricRow> metrics;  // one row per step, the first at t = 0
  std::vector<double> step_ns;     // mean controller time per robot for each step
  std::vector<std::optional<double>> finish_times;
  SwarmState final_state;
  std::optional<SafetyViolation> violation;
};

// Minima over unfinished robots only; infinity when none qualify.
MetricRow safety_metrics(const VirtualTube& tube, const SwarmState& state);

SimulationLog run(const ScenarioConfig& config);

struct RunSummary {
  double min_pair = 0.0;
  double min_boundary = 0.0;
  double max_Vdot = 0.0;
  double max_V_increase = 0.0;
  std::size_t steps = 0;
  std::size_t finished_count = 0;
  bool all_finished = false;
  double last_finish_time = 0.0;
  double latency_mean_ns = 0.0;
  double latency_p50_ns = 0.0;
  double latency_p99_ns = 0.0;
};

RunSummary metrics(const SimulationLog& log);

void write_trajectory_csv(const SimulationLog& log, const std::filesystem::path& path);
void write_metrics_csv(const SimulationLog& log, const std::filesystem::path& path);

}  // namespace tubenav
