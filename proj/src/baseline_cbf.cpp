#include "tubenav/baseline_cbf.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "tubenav/errors.hpp"
#include "tubenav/scenario.hpp"

namespace tubenav {

namespace {

constexpr double kFeasTol = 1e-9;

bool satisfies(const QpProblem& qp, const Vec2& u) {
  return std::all_of(qp.rows.begin(), qp.rows.end(), [&](const HalfPlane& r) {
    return r.normal.dot(u) >= r.offset - kFeasTol * (1.0 + std::abs(r.offset));
  });
}

struct BoundaryRow {
  bool active = false;
  HalfPlane row;
};

BoundaryRow boundary_row(const VirtualTube& tube, const Robot& robot, double gamma) {
  const TubeProjection at = project(tube, robot.position);
  const double d = at.boundary_distance;
  if (d >= robot.params.r_a) return {};
  const double r_sp = tube.r_s_prime() > 0.0 ? tube.r_s_prime() : robot.params.r_s;
  const Vec2 grad = boundary_distance_gradient(tube, robot.position, at);
  return {true, {2.0 * d * grad, -gamma * (d * d - r_sp * r_sp)}};
}

Vec2 nominal(const VirtualTube& tube, const Robot& robot) {
  return robot.params.v_max * project(tube, robot.position).t_c;
}

double pair_barrier_h(const Robot& a, const Robot& b) {
  const double reach = a.params.r_s + b.params.r_s;
  return (a.position - b.position).squaredNorm() - reach * reach;
}

double percentile(std::vector<double> xs, double q) {
  if (xs.empty()) return 0.0;
  const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(xs.size()))) - 1;
  const auto at = xs.begin() + static_cast<std::ptrdiff_t>(std::min(k, xs.size() - 1));
  std::nth_element(xs.begin(), at, xs.end());
  return *at;
}

}  // namespace

std::optional<Vec2> active_set_solve(const QpProblem& qp) {
  if (satisfies(qp, qp.nominal)) return qp.nominal;
  std::optional<Vec2> best;
  double best_cost = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vec2& u) {
    if (!u.allFinite() || !satisfies(qp, u)) return;
    const double cost = (u - qp.nominal).squaredNorm();
    if (cost < best_cost) {
      best_cost = cost;
      best = u;
    }
  };
  const auto& rows = qp.rows;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Vec2& a = rows[k].normal;
    const double aa = a.squaredNorm();
    if (aa == 0.0) continue;
    consider(qp.nominal + (rows[k].offset - a.dot(qp.nominal)) / aa * a);
    for (std::size_t m = k + 1; m < rows.size(); ++m) {
      const Vec2& b = rows[m].normal;
      const double det = cross(a, b);
      if (std::abs(det) <= 1e-14 * std::sqrt(aa * b.squaredNorm())) continue;
      // Vertex where both rows are tight.
      const double ra = rows[k].offset, rb = rows[m].offset;
      consider(Vec2((ra * b.y() - rb * a.y()) / det, (a.x() * rb - b.x() * ra) / det));
    }
  }
  return best;
}

QpProblem cbf_problem(const VirtualTube& tube, const SwarmState& state, std::size_t i, const CbfParams& params) {
  const Robot& me = state.robots[i];
  QpProblem qp;
  qp.nominal = nominal(tube, me);
  qp.v_max = me.params.v_max;
  for (std::size_t j : neighbor_set(state, i)) {
    const Robot& other = state.robots[j];
    const Vec2 diff = me.position - other.position;
    qp.rows.push_back({2.0 * diff, -0.5 * params.gamma * pair_barrier_h(me, other)});
  }
  if (const BoundaryRow b = boundary_row(tube, me, params.gamma); b.active) qp.rows.push_back(b.row);
  return qp;
}

CbfCommand cbf_command(const VirtualTube& tube, const SwarmState& state, std::size_t i, const CbfParams& params) {
  const Robot& me = state.robots[i];
  if (me.finished) return {nominal(tube, me), false, 0};
  const QpProblem qp = cbf_problem(tube, state, i, params);
  const auto u = active_set_solve(qp);
  if (!u) return {Vec2::Zero(), true, qp.rows.size()};
  return {saturate(*u, qp.v_max), false, qp.rows.size()};
}

CentralizedCbf cbf_centralized(const VirtualTube& tube, const SwarmState& state, const CbfParams& params) {
  const auto& rs = state.robots;
  const auto n = static_cast<Eigen::Index>(rs.size());
  CentralizedCbf out;
  Eigen::VectorXd u0(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) u0.segment<2>(2 * i) = nominal(tube, rs[static_cast<std::size_t>(i)]);

  std::vector<std::pair<Eigen::VectorXd, double>> rows;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Robot& a = rs[static_cast<std::size_t>(i)];
    if (a.finished) continue;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Robot& b = rs[static_cast<std::size_t>(j)];
      if (b.finished) continue;
      const double reach = std::max(a.params.r_a + b.params.r_s, b.params.r_a + a.params.r_s);
      const Vec2 diff = a.position - b.position;
      if (diff.norm() > reach) continue;
      Eigen::VectorXd row = Eigen::VectorXd::Zero(2 * n);
      row.segment<2>(2 * i) = 2.0 * diff;
      row.segment<2>(2 * j) = -2.0 * diff;
      rows.emplace_back(std::move(row), -params.gamma * pair_barrier_h(a, b));
    }
    if (const BoundaryRow b = boundary_row(tube, a, params.gamma); b.active) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(2 * n);
      row.segment<2>(2 * i) = b.row.normal;
      rows.emplace_back(std::move(row), b.row.offset);
    }
  }
  out.rows = rows.size();

  const auto m = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd A(m, 2 * n);
  Eigen::VectorXd lo(m), norms(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    A.row(k) = rows[static_cast<std::size_t>(k)].first.transpose();
    lo[k] = rows[static_cast<std::size_t>(k)].second;
    norms[k] = A.row(k).squaredNorm();
  }
  // Hildreth's procedure on the dual, with the dense Gram matrix of the stacked rows.
  const Eigen::MatrixXd gram = A * A.transpose();
  const Eigen::VectorXd slack = lo - A * u0;
  Eigen::VectorXd dual = Eigen::VectorXd::Zero(m);
  constexpr std::size_t kMaxSweeps = 2000;
  Eigen::VectorXd u = u0;
  double violation = 0.0;
  for (out.sweeps = 0; out.sweeps < kMaxSweeps; ++out.sweeps) {
    double moved = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
      if (norms[k] == 0.0) continue;
      const double next = std::max(0.0, dual[k] + (slack[k] - gram.row(k).dot(dual)) / norms[k]);
      moved = std::max(moved, std::abs(next - dual[k]));
      dual[k] = next;
    }
    u = u0 + A.transpose() * dual;
    violation = m > 0 ? (lo - A * u).maxCoeff() : 0.0;
    if (violation <= kFeasTol && moved <= 1e-12) break;
  }
  if (violation > 1e-6) {
    out.infeasible = true;
    u.setZero();
  }
  out.velocities.reserve(rs.size());
  for (Eigen::Index i = 0; i < n; ++i)
    out.velocities.push_back(saturate(u.segment<2>(2 * i), rs[static_cast<std::size_t>(i)].params.v_max));
  return out;
}

std::vector<BenchmarkRow> timing_benchmark(const std::vector<std::size_t>& sizes, std::size_t steps,
                                           const CbfParams& params) {
  using clock = std::chrono::steady_clock;
  auto ns_since = [](clock::time_point t0) {
    return std::chrono::duration<double, std::nano>(clock::now() - t0).count();
  };
  if (steps == 0) fail(Fault::InvalidConfig, "benchmark needs at least one step");
  std::vector<BenchmarkRow> table;
  for (std::size_t count : sizes) {
    const ScenarioConfig sc = grid_scenario(count, 5, 1.1, 1.1, 3.5, 60.0, 1.0);
    SwarmState state = sc.initial_state();
    std::vector<double> ours, ours_sum, cbf, cbf_central;
    std::size_t cbf_bad = 0, central_bad = 0;
    for (std::size_t s = 0; s < steps; ++s) {
      const std::size_t n = state.robots.size();
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto t0 = clock::now();
        const ControlCommand c = command(sc.tube, state, i, sc.controller);
        total += ns_since(t0);
        (void)c;
      }
      ours.push_back(total / static_cast<double>(n));
      ours_sum.push_back(total);

      total = 0.0;
      bool bad = false;
      for (std::size_t i = 0; i < n; ++i) {
        const auto t0 = clock::now();
        const CbfCommand c = cbf_command(sc.tube, state, i, params);
        total += ns_since(t0);
        bad = bad || c.infeasible;
      }
      cbf.push_back(total / static_cast<double>(n));
      cbf_bad += bad ? 1 : 0;

      const auto t0 = clock::now();
      const CentralizedCbf joint = cbf_centralized(sc.tube, state, params);
      cbf_central.push_back(ns_since(t0));
      central_bad += joint.infeasible ? 1 : 0;

      state = step(state, sc.tube, sc.controller, sc.dt).next;
    }
    table.push_back({count, kBenchmarkVariants[0], std::accumulate(ours.begin(), ours.end(), 0.0) / steps,
                     percentile(ours, 0.99), 0});
    table.push_back({count, kBenchmarkVariants[1], std::accumulate(ours_sum.begin(), ours_sum.end(), 0.0) / steps,
                     percentile(ours_sum, 0.99), 0});
    table.push_back({count, kBenchmarkVariants[2], std::accumulate(cbf.begin(), cbf.end(), 0.0) / steps,
                     percentile(cbf, 0.99), cbf_bad});
    table.push_back({count, kBenchmarkVariants[3],
                     std::accumulate(cbf_central.begin(), cbf_central.end(), 0.0) / steps,
                     percentile(cbf_central, 0.99), central_bad});
  }
  return table;
}

void write_benchmark_csv(const std::vector<BenchmarkRow>& rows, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) fail(Fault::InvalidConfig, "cannot write " + path.string());
  out << "M,variant,mean_step_ns,p99_step_ns,infeasible_steps\n";
  char buf[64];
  for (const auto& r : rows) {
    out << r.robots << ',' << r.variant << ',';
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,", r.mean_step_ns, r.p99_step_ns);
    out << buf << r.infeasible_steps << '\n';
  }
}

}  // namespace tubenav
