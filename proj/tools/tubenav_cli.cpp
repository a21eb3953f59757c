#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tubenav/baseline_cbf.hpp"
#include "tubenav/errors.hpp"
#include "tubenav/gradcheck.hpp"
#include "tubenav/scenario.hpp"
#include "tubenav/simulator.hpp"
#include "tubenav/tube_io.hpp"

namespace fs = std::filesystem;
using namespace tubenav;

namespace {

enum Exit { Ok = 0, Unsafe = 1, BadConfig = 2, BadGeometry = 3 };

struct RunOptions {
  std::string scenario;
  std::string out = "out";
  std::optional<double> dt, duration;
  std::optional<std::string> variant;
  std::optional<std::size_t> stride;
};

int validate_tube(const std::string& path) {
  const VirtualTube tube = load_tube_or_scenario(path);
  const auto diag = validate_proper(tube);
  if (!diag.proper()) fail(Fault::ImproperTube, diag.summary());
  std::printf("proper tube: %zu stations, length %.6g m, spacing %.6g m, min half width %.6g m\n", tube.size(),
              tube.length(), tube.spacing(), tube.min_half_width());
  return Ok;
}

int run_scenario(const RunOptions& opt) {
  ScenarioConfig cfg = load_scenario(opt.scenario);
  if (opt.dt) cfg.dt = *opt.dt;
  if (opt.duration) cfg.duration = *opt.duration;
  if (opt.stride) cfg.stride = *opt.stride;
  if (opt.variant) {
    if (*opt.variant == "full")
      cfg.controller.variant = Variant::Full;
    else if (*opt.variant == "modified")
      cfg.controller.variant = Variant::Modified;
    else
      fail(Fault::InvalidConfig, "variant must be 'full' or 'modified'");
  }
  if (!(cfg.dt > 0.0)) fail(Fault::InvalidConfig, "--dt must be positive");
  if (!(cfg.duration >= 0.0)) fail(Fault::InvalidConfig, "--duration must be non-negative");

  const SimulationLog log = run(cfg);
  const fs::path dir = opt.out;
  write_trajectory_csv(log, dir / "trajectory.csv");
  write_metrics_csv(log, dir / "metrics.csv");
  const RunSummary s = metrics(log);
  std::printf("%s: %zu steps, finished %zu/%zu (last at %.6g s)\n", cfg.name.c_str(), s.steps, s.finished_count,
              cfg.robots.size(), s.last_finish_time);
  std::printf("min pair distance %.6g m, min boundary clearance %.6g m\n", s.min_pair, s.min_boundary);
  std::printf("V: max dV/dt %.6g, max step increase %.6g\n", s.max_Vdot, s.max_V_increase);
  std::printf("controller time per robot: mean %.0f ns, p99 %.0f ns\n", s.latency_mean_ns, s.latency_p99_ns);
  if (log.violation) {
    std::fprintf(stderr, "safety violation: %s\n", log.violation->describe().c_str());
    return Unsafe;
  }
  return Ok;
}

int teach(const std::string& input, const std::string& out) {
  const VirtualTube tube = load_tube_or_scenario(input);
  save_tube(tube, out);
  std::printf("wrote %s: %zu stations, length %.6g m\n", out.c_str(), tube.size(), tube.length());
  return Ok;
}

int bench(const std::vector<std::size_t>& sizes, std::size_t steps, const std::string& out) {
  const auto rows = timing_benchmark(sizes, steps);
  write_benchmark_csv(rows, out);
  for (const auto& r : rows)
    std::printf("M=%-3zu %-22s mean %12.0f ns  p99 %12.0f ns  infeasible %zu\n", r.robots, r.variant.c_str(),
                r.mean_step_ns, r.p99_step_ns, r.infeasible_steps);
  return Ok;
}

int gradcheck(std::size_t points) {
  bool ok = true;
  for (const auto& r : gradient_battery(points)) {
    std::printf("%-26s points %zu  max relative error %.3e  %s\n", r.potential.c_str(), r.points,
                r.max_relative_error, r.pass() ? "ok" : "FAIL");
    ok = ok && r.pass();
  }
  return ok ? Ok : Unsafe;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curve virtual tube swarm navigation"};
  app.require_subcommand(1);

  std::string tube_path;
  auto* validate = app.add_subcommand("validate-tube", "Check a tube or scenario file for the proper-tube condition");
  validate->add_option("path", tube_path, "tube, tube spec or scenario JSON")->required();

  RunOptions run_opt;
  double dt = 0.0, duration = 0.0;
  std::size_t stride = 0;
  std::string variant;
  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write trajectory and metrics CSVs");
  run_cmd->add_option("scenario", run_opt.scenario)->required();
  run_cmd->add_option("--out", run_opt.out, "output directory");
  auto* dt_opt = run_cmd->add_option("--dt", dt, "time step (s)");
  auto* duration_opt = run_cmd->add_option("--duration", duration, "simulated time (s)");
  auto* variant_opt = run_cmd->add_option("--variant", variant, "full or modified");
  auto* stride_opt = run_cmd->add_option("--stride", stride, "trajectory logging stride (steps)");

  std::string teach_in, teach_out = "tube.json";
  auto* teach_cmd = app.add_subcommand("teach", "Build a tube from a taught trajectory and save it");
  teach_cmd->add_option("input", teach_in, "scenario or tube spec with a trajectory tube")->required();
  teach_cmd->add_option("--out", teach_out, "tube JSON to write");

  std::vector<std::size_t> sizes{5, 10, 20, 40, 80};
  std::size_t bench_steps = 100;
  std::string bench_out = "bench.csv";
  auto* bench_cmd = app.add_subcommand("bench", "Time our controller against the CBF-QP baseline");
  bench_cmd->add_option("--sizes", sizes, "swarm sizes")->delimiter(',');
  bench_cmd->add_option("--steps", bench_steps, "timed steps per size");
  bench_cmd->add_option("--out", bench_out, "benchmark CSV");

  std::size_t points = 1000;
  auto* grad_cmd = app.add_subcommand("gradcheck", "Compare analytic gradients with central differences");
  grad_cmd->add_option("--points", points, "random points per potential");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return BadConfig;
  }

  try {
    if (*validate) return validate_tube(tube_path);
    if (*run_cmd) {
      if (*dt_opt) run_opt.dt = dt;
      if (*duration_opt) run_opt.duration = duration;
      if (*variant_opt) run_opt.variant = variant;
      if (*stride_opt) run_opt.stride = stride;
      return run_scenario(run_opt);
    }
    if (*teach_cmd) return teach(teach_in, teach_out);
    if (*bench_cmd) return bench(sizes, bench_steps, bench_out);
    if (*grad_cmd) return gradcheck(points);
  } catch (const Error& e) {
    std::fprintf(stderr, "%s: %s\n", to_string(e.fault()), e.what());
    return classify(e.fault()) == FaultClass::Config ? BadConfig : BadGeometry;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return BadConfig;
  }
  return BadConfig;
}
