#include "tubenav/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "tubenav/errors.hpp"

namespace tubenav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::ofstream open_csv(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) fail(Fault::InvalidConfig, "cannot write " + path.string());
  return out;
}

double percentile(std::vector<double> xs, double q) {
  if (xs.empty()) return 0.0;
  const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(xs.size()))) - 1;
  const auto at = xs.begin() + static_cast<std::ptrdiff_t>(std::min(k, xs.size() - 1));
  std::nth_element(xs.begin(), at, xs.end());
  return *at;
}

std::optional<SafetyViolation> first_violation(const VirtualTube& tube, const SwarmState& state) {
  const auto& rs = state.robots;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (rs[i].finished) continue;
    const double clearance = boundary_clearance(tube, rs[i].position);
    if (clearance <= rs[i].params.r_s) return SafetyViolation{state.time, rs[i].params.id, -1, clearance};
    for (std::size_t j = i + 1; j < rs.size(); ++j) {
      if (rs[j].finished) continue;
      const double d = (rs[i].position - rs[j].position).norm();
      if (d <= rs[i].params.r_s + rs[j].params.r_s)
        return SafetyViolation{state.time, rs[i].params.id, rs[j].params.id, d};
    }
  }
  return std::nullopt;
}

// V of `before` restricted to the robots still unfinished in `after`.
double same_set_value(const ScenarioConfig& config, const SwarmState& before, const SwarmState& after,
                      double before_V) {
  bool changed = false;
  SwarmState masked = before;
  for (std::size_t i = 0; i < masked.robots.size(); ++i) {
    changed = changed || masked.robots[i].finished != after.robots[i].finished;
    masked.robots[i].finished = after.robots[i].finished;
  }
  return changed ? lyapunov_and_derivative(config.tube, masked, config.controller).value : before_V;
}

}  // namespace

std::string InitialDiagnostics::summary() const {
  std::ostringstream os;
  for (const auto& [a, b] : close_pairs) os << "robots " << a << " and " << b << " overlap safety areas; ";
  for (int id : uncontained) os << "robot " << id << " safety area leaves the tube; ";
  for (int id : past_finish) os << "robot " << id << " starts at or past the finishing line; ";
  std::string s = os.str();
  if (s.size() >= 2) s.resize(s.size() - 2);
  return s;
}

double boundary_clearance(const VirtualTube& tube, const Vec2& p) {
  const double d = distance_to_boundary(tube, p);
  return project(tube, p).inside ? d : -d;
}

InitialDiagnostics validate_initial(const ScenarioConfig& config) {
  InitialDiagnostics out;
  const auto& rs = config.robots;
  const bool modified = config.controller.variant == Variant::Modified;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const auto& r = rs[i];
    const TubeProjection at = project(config.tube, r.position);
    const bool contained = boundary_clearance(config.tube, r.position) > r.params.r_s &&
                           (!modified || at.boundary_distance > config.tube.r_s_prime());
    if (!contained) out.uncontained.push_back(r.params.id);
    if (at.l >= 0.0) out.past_finish.push_back(r.params.id);
    for (std::size_t j = i + 1; j < rs.size(); ++j) {
      if ((r.position - rs[j].position).norm() <= r.params.r_s + rs[j].params.r_s)
        out.close_pairs.emplace_back(r.params.id, rs[j].params.id);
    }
  }
  return out;
}

StepResult step(const SwarmState& state, const VirtualTube& tube, const ControllerConfig& config, double dt) {
  using clock = std::chrono::steady_clock;
  StepResult out;
  const std::size_t n = state.robots.size();
  out.commands.reserve(n);
  out.command_ns.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto t0 = clock::now();
    out.commands.push_back(command(tube, state, i, config));
    out.command_ns.push_back(std::chrono::duration<double, std::nano>(clock::now() - t0).count());
  }
  out.next = state;
  out.next.time = state.time + dt;
  for (std::size_t i = 0; i < n; ++i) {
    Robot& r = out.next.robots[i];
    r.position += dt * out.commands[i].velocity;
    r.finished = r.finished || finished(tube, r.position, config);
  }
  return out;
}

std::string SafetyViolation::describe() const {
  std::ostringstream os;
  os << "t=" << fmt(time) << ": ";
  if (other < 0)
    os << "robot " << robot << " boundary clearance " << fmt(value);
  else
    os << "robots " << robot << " and " << other << " separation " << fmt(value);
  return os.str();
}

MetricRow safety_metrics(const VirtualTube& tube, const SwarmState& state) {
  MetricRow row;
  row.t = state.time;
  row.min_pair = kInf;
  row.min_boundary = kInf;
  const auto& rs = state.robots;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (rs[i].finished) {
      ++row.finished_count;
      continue;
    }
    row.min_boundary = std::min(row.min_boundary, boundary_clearance(tube, rs[i].position));
    for (std::size_t j = i + 1; j < rs.size(); ++j) {
      if (rs[j].finished) continue;
      row.min_pair = std::min(row.min_pair, (rs[i].position - rs[j].position).norm());
    }
  }
  return row;
}

SimulationLog run(const ScenarioConfig& config) {
  if (!(config.dt > 0.0) || !(config.duration >= 0.0) || config.stride == 0)
    fail(Fault::InvalidConfig, "dt must be positive, duration non-negative and stride at least 1");
  SwarmState state = config.initial_state();
  config.controller.validate(config.tube, state);
  const InitialDiagnostics diag = validate_initial(config);
  if (!diag.ok()) fail(Fault::InvalidConfig, "initial state rejected: " + diag.summary());

  SimulationLog log;
  log.dt = config.dt;
  log.finish_times.assign(state.robots.size(), std::nullopt);
  const auto steps = static_cast<std::size_t>(std::llround(config.duration / config.dt));
  SwarmState previous = state;
  double previous_V = 0.0;
  for (std::size_t n = 0;; ++n) {
    const bool everyone_done =
        std::all_of(state.robots.begin(), state.robots.end(), [](const Robot& r) { return r.finished; });
    const bool last = n == steps || everyone_done;
    StepResult r = step(state, config.tube, config.controller, config.dt);

    MetricRow row = safety_metrics(config.tube, state);
    const LyapunovSample lyap = lyapunov_and_derivative(r.commands, state);
    row.V = lyap.value;
    row.Vdot = lyap.derivative;
    if (n > 0) row.V_increase = row.V - same_set_value(config, previous, state, previous_V);
    log.metrics.push_back(row);
    previous_V = row.V;
    const double ns = std::accumulate(r.command_ns.begin(), r.command_ns.end(), 0.0);
    log.step_ns.push_back(r.command_ns.empty() ? 0.0 : ns / static_cast<double>(r.command_ns.size()));

    if (n % config.stride == 0 || last) {
      std::vector<RobotSample> sample;
      sample.reserve(state.robots.size());
      for (std::size_t i = 0; i < state.robots.size(); ++i) {
        const Robot& rb = state.robots[i];
        sample.push_back({rb.params.id, rb.position, r.commands[i].velocity, rb.finished});
      }
      log.sample_times.push_back(state.time);
      log.samples.push_back(std::move(sample));
    }
    if (last) break;

    previous = state;
    state = std::move(r.next);
    state.time = static_cast<double>(n + 1) * config.dt;
    for (std::size_t i = 0; i < state.robots.size(); ++i) {
      if (state.robots[i].finished && !log.finish_times[i]) log.finish_times[i] = state.time;
    }
    if (auto v = first_violation(config.tube, state)) {
      log.violation = v;
      log.metrics.push_back(safety_metrics(config.tube, state));
      break;
    }
  }
  log.final_state = state;
  return log;
}

RunSummary metrics(const SimulationLog& log) {
  RunSummary s;
  s.min_pair = kInf;
  s.min_boundary = kInf;
  s.max_Vdot = -kInf;
  s.max_V_increase = -kInf;
  s.steps = log.metrics.empty() ? 0 : log.metrics.size() - 1;
  for (std::size_t n = 0; n < log.metrics.size(); ++n) {
    const MetricRow& m = log.metrics[n];
    s.min_pair = std::min(s.min_pair, m.min_pair);
    s.min_boundary = std::min(s.min_boundary, m.min_boundary);
    s.max_Vdot = std::max(s.max_Vdot, m.Vdot);
    if (n > 0) s.max_V_increase = std::max(s.max_V_increase, m.V_increase);
  }
  for (const auto& t : log.finish_times) {
    if (!t) continue;
    ++s.finished_count;
    s.last_finish_time = std::max(s.last_finish_time, *t);
  }
  s.all_finished = s.finished_count == log.finish_times.size();
  if (!log.step_ns.empty()) {
    s.latency_mean_ns = std::accumulate(log.step_ns.begin(), log.step_ns.end(), 0.0) /
                        static_cast<double>(log.step_ns.size());
    s.latency_p50_ns = percentile(log.step_ns, 0.5);
    s.latency_p99_ns = percentile(log.step_ns, 0.99);
  }
  return s;
}

void write_trajectory_csv(const SimulationLog& log, const std::filesystem::path& path) {
  std::ofstream out = open_csv(path);
  out << "t,robot_id,x,y,vx,vy,finished\n";
  for (std::size_t k = 0; k < log.samples.size(); ++k) {
    for (const RobotSample& r : log.samples[k]) {
      out << fmt(log.sample_times[k]) << ',' << r.id << ',' << fmt(r.position.x()) << ',' << fmt(r.position.y())
          << ',' << fmt(r.velocity.x()) << ',' << fmt(r.velocity.y()) << ',' << (r.finished ? 1 : 0) << '\n';
    }
  }
}

void write_metrics_csv(const SimulationLog& log, const std::filesystem::path& path) {
  std::ofstream out = open_csv(path);
  out << "t,min_pair_dist,min_boundary_dist,V,Vdot,finished_count\n";
  for (const MetricRow& m : log.metrics) {
    out << fmt(m.t) << ',' << fmt(m.min_pair) << ',' << fmt(m.min_boundary) << ',' << fmt(m.V) << ','
        << fmt(m.Vdot) << ',' << m.finished_count << '\n';
  }
}

}  // namespace tubenav
