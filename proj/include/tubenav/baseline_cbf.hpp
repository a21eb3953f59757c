#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tubenav/controller.hpp"
#include "tubenav/simulator.hpp"

namespace tubenav {

// normal . u >= offset
struct HalfPlane {
  Vec2 normal;
  double offset = 0.0;
};

struct QpProblem {
  Vec2 nominal = Vec2::Zero();
  std::vector<HalfPlane> rows;
  double v_max = 1.0;
};

// Exact minimizer of |u - nominal|^2 over the rows, or nullopt when they are contradictory.
// The speed cap is not part of the feasible set.
std::optional<Vec2> active_set_solve(const QpProblem& problem);

struct CbfParams {
  double gamma = 1.0;
};

struct CbfCommand {
  Vec2 velocity = Vec2::Zero();
  bool infeasible = false;
  std::size_t rows = 0;
};

// Rows for robot i with a half share of every pairwise constraint.
QpProblem cbf_problem(const VirtualTube& tube, const SwarmState& state, std::size_t i, const CbfParams& params);
CbfCommand cbf_command(const VirtualTube& tube, const SwarmState& state, std::size_t i, const CbfParams& params);

struct CentralizedCbf {
  std::vector<Vec2> velocities;
  bool infeasible = false;
  std::size_t rows = 0;
  std::size_t sweeps = 0;
};

// One joint QP over all robots, solved by Hildreth's dual coordinate ascent on a dense row matrix.
CentralizedCbf cbf_centralized(const VirtualTube& tube, const SwarmState& state, const CbfParams& params);

struct BenchmarkRow {
  std::size_t robots = 0;
  std::string variant;
  double mean_step_ns = 0.0;
  double p99_step_ns = 0.0;
  std::size_t infeasible_steps = 0;
};

inline constexpr const char* kBenchmarkVariants[] = {"ours-distributed", "ours-centralized-sum", "cbf-distributed",
                                                     "cbf-centralized"};

// Every variant is timed on the same snapshots, taken from a run of the modified controller.
// Distributed variants report per-robot time; centralized variants report whole-swarm time.
std::vector<BenchmarkRow> timing_benchmark(const std::vector<std::size_t>& sizes, std::size_t steps,
                                           const CbfParams& params = {});

void write_benchmark_csv(const std::vector<BenchmarkRow>& rows, const std::filesystem::path& path);

}  // namespace tubenav
