#include "tubenav/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tubenav/errors.hpp"
#include "tubenav/tube_io.hpp"

namespace tubenav {

namespace {

using nlohmann::json;

std::vector<Vec2> points_of(const json& j) {
  std::vector<Vec2> out;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) fail(Fault::InvalidConfig, "points must be [x, y] pairs");
    out.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return out;
}

Variant variant_of(const std::string& name) {
  if (name == "modified") return Variant::Modified;
  if (name == "full") return Variant::Full;
  fail(Fault::InvalidConfig, "unknown controller variant '" + name + "'");
}

ControllerConfig controller_of(const json& j) {
  ControllerConfig c;
  c.variant = variant_of(j.value("variant", std::string("modified")));
  c.k1 = j.value("k1", c.k1);
  c.k2 = j.value("k2", c.k2);
  c.k3 = j.value("k3", c.k3);
  c.eps_m = j.value("eps_m", c.eps_m);
  c.eps_t = j.value("eps_t", c.eps_t);
  c.eps_s = j.value("eps_s", c.eps_s);
  c.rho = j.value("rho", c.rho);
  c.eps_0 = j.value("eps_0", c.eps_0);
  c.ahead_extent_ratio = j.value("ahead_extent_ratio", c.ahead_extent_ratio);
  c.behind_extent_ratio = j.value("behind_extent_ratio", c.behind_extent_ratio);
  return c;
}

VirtualTube build_from_spec(const json& spec, const std::filesystem::path& base_dir) {
  const std::string kind = spec.at("kind").get<std::string>();
  const double spacing = spec.value("spacing", 0.1);
  if (kind == "sine") {
    SineTubeSpec s;
    s.length = spec.value("length", s.length);
    s.period = spec.value("period", s.period);
    s.amplitude = spec.value("amplitude", s.amplitude);
    s.half_width = spec.value("half_width", s.half_width);
    s.pinch = spec.value("pinch", s.pinch);
    s.spacing = spacing;
    return sine_tube(s);
  }
  if (kind == "waypoints") {
    const auto pts = points_of(spec.at("points"));
    const auto widths = spec.contains("half_widths") ? spec.at("half_widths").get<std::vector<double>>()
                                                     : std::vector<double>{spec.at("half_width").get<double>()};
    return build_tube_from_waypoints(pts, widths, spacing);
  }
  if (kind == "trajectory") {
    std::vector<Vec2> path = spec.contains("points") ? points_of(spec.at("points")) : std::vector<Vec2>{};
    if (spec.contains("waypoints"))
      path = catmull_rom(points_of(spec.at("waypoints")), spec.value("samples_per_segment", std::size_t{40}));
    if (path.empty()) fail(Fault::EmptyTrajectory, "trajectory tube needs points or waypoints");
    const auto obstacles = spec.contains("obstacles") ? points_of(spec.at("obstacles")) : std::vector<Vec2>{};
    return build_tube_from_trajectory(path, obstacles, spec.at("clearance_cap").get<double>(), spacing);
  }
  if (kind == "file") {
    std::filesystem::path p = spec.at("path").get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    const VirtualTube tube = load_tube(p);
    const auto diag = validate_proper(tube);
    if (!diag.proper()) fail(Fault::ImproperTube, p.string() + ": " + diag.summary());
    return tube;
  }
  fail(Fault::InvalidConfig, "unknown tube kind '" + kind + "'");
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    fail(Fault::InvalidConfig, std::string("malformed scenario: ") + e.what());
  }
}

}  // namespace

VirtualTube sine_tube(const SineTubeSpec& spec) {
  if (!(spec.length > 0.0 && spec.period > 0.0 && spec.spacing > 0.0))
    fail(Fault::InvalidConfig, "sine tube needs positive length, period and spacing");
  const auto samples = static_cast<std::size_t>(std::ceil(spec.length / (0.05 * spec.spacing)));
  std::vector<Vec2> centerline;
  centerline.reserve(samples + 1);
  const double w = 2.0 * std::numbers::pi / spec.period;
  for (std::size_t k = 0; k <= samples; ++k) {
    const double x = spec.length * static_cast<double>(k) / static_cast<double>(samples);
    centerline.emplace_back(x, 0.5 * spec.amplitude * (1.0 - std::cos(w * x)));
  }
  const double base = spec.half_width, pinch = spec.pinch;
  auto widths = [base, pinch](double s, double total) {
    const double sn = std::sin(std::numbers::pi * s / total);
    const double h = base - pinch * sn * sn;
    return std::pair{h, h};
  };
  return build_tube_from_waypoints(centerline, widths, spec.spacing);
}

VirtualTube straight_tube(double length, double half_width, double spacing) {
  return build_tube_from_waypoints({Vec2(0.0, 0.0), Vec2(length, 0.0)}, std::vector<double>{half_width}, spacing);
}

std::vector<Vec2> catmull_rom(const std::vector<Vec2>& c, std::size_t samples_per_segment) {
  if (c.size() < 2) fail(Fault::EmptyTrajectory, "spline needs at least two control points");
  if (samples_per_segment == 0) fail(Fault::InvalidConfig, "samples_per_segment must be positive");
  std::vector<Vec2> out;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Vec2& p1 = c[i];
    const Vec2& p2 = c[i + 1];
    const Vec2 p0 = i == 0 ? Vec2(2.0 * p1 - p2) : c[i - 1];
    const Vec2 p3 = i + 2 < n ? c[i + 2] : Vec2(2.0 * p2 - p1);
    for (std::size_t k = 0; k < samples_per_segment; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(samples_per_segment);
      const double t2 = t * t, t3 = t2 * t;
      out.push_back(0.5 * (2.0 * p1 + (p2 - p0) * t + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t2 +
                           (3.0 * p1 - p0 - 3.0 * p2 + p3) * t3));
    }
  }
  out.push_back(c.back());
  return out;
}

VirtualTube tube_from_spec(const json& spec, const std::filesystem::path& base_dir) {
  return guarded([&] {
    VirtualTube tube = build_from_spec(spec, base_dir);
    if (spec.contains("eta_min") || spec.contains("eta_max"))
      tube = tube.with_eta_bounds(spec.value("eta_min", tube.eta_min()), spec.value("eta_max", tube.eta_max()));
    return tube;
  });
}

ScenarioConfig scenario_from_json(const json& j, const std::filesystem::path& base_dir) {
  return guarded([&] {
    VirtualTube tube = tube_from_spec(j.at("tube"), base_dir);
    const json defaults = j.value("robot_defaults", json::object());
    RobotParams base;
    base.r_s = defaults.value("r_s", base.r_s);
    base.r_a = defaults.value("r_a", base.r_a);
    base.v_max = defaults.value("v_max", base.v_max);

    std::vector<Robot> robots;
    for (const auto& r : j.at("robots")) {
      Robot robot;
      robot.params = base;
      robot.params.id = r.value("id", static_cast<int>(robots.size()) + 1);
      robot.params.r_s = r.value("r_s", base.r_s);
      robot.params.r_a = r.value("r_a", base.r_a);
      robot.params.v_max = r.value("v_max", base.v_max);
      const auto pos = points_of(json::array({r.at("position")}));
      robot.position = pos.front();
      robots.push_back(robot);
    }
    if (robots.empty()) fail(Fault::InvalidConfig, "scenario has no robots");

    const ControllerConfig controller = controller_of(j.value("controller", json::object()));
    if (controller.variant == Variant::Modified) {
      double r_s = 0.0;
      for (const auto& r : robots) r_s = std::max(r_s, r.params.r_s);
      const double r_sp = j.value("controller", json::object()).value("r_s_prime", 0.0);
      tube = tube.with_r_s_prime(r_sp > 0.0 ? r_sp : modified_safety_radius(tube, r_s));
    }
    ScenarioConfig cfg{j.value("name", std::string("scenario")),
                       std::move(tube),
                       std::move(robots),
                       controller,
                       j.value("dt", 0.01),
                       j.value("duration", 25.0),
                       j.value("stride", std::size_t{10})};
    return cfg;
  });
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(read_json_file(path), path.parent_path());
}

VirtualTube load_tube_or_scenario(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  if (j.contains("stations")) {
    const VirtualTube tube = tube_from_json(j);
    const auto diag = validate_proper(tube);
    if (!diag.proper()) fail(Fault::ImproperTube, path.string() + ": " + diag.summary());
    return tube;
  }
  if (j.contains("tube")) return tube_from_spec(j.at("tube"), path.parent_path());
  if (j.contains("kind")) return tube_from_spec(j, path.parent_path());
  fail(Fault::InvalidConfig, path.string() + " is neither a tube nor a scenario");
}

ScenarioConfig grid_scenario(std::size_t count, std::size_t rows, double row_gap, double column_gap,
                             double half_width, double length, double v_max) {
  if (count == 0 || rows == 0) fail(Fault::InvalidConfig, "grid needs robots and rows");
  VirtualTube tube = straight_tube(length, half_width, 0.25);
  std::vector<Robot> robots;
  const std::size_t columns = (count + rows - 1) / rows;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t col = k / rows, row = k % rows;
    Robot r;
    r.params.id = static_cast<int>(k) + 1;
    r.params.v_max = v_max;
    const double x = 1.0 + column_gap * static_cast<double>(columns - 1 - col);
    const double y = row_gap * (static_cast<double>(row) - 0.5 * static_cast<double>(rows - 1));
    r.position = Vec2(x, y);
    robots.push_back(r);
  }
  tube = tube.with_r_s_prime(modified_safety_radius(tube, robots.front().params.r_s));
  return {"grid-" + std::to_string(count), std::move(tube), std::move(robots), ControllerConfig{}, 0.01, 0.0, 1};
}

}  // namespace tubenav
