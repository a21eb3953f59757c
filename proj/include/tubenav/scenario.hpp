#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include <json.hpp>

#include "tubenav/simulator.hpp"

namespace tubenav {

// Centerline y = amplitude/2 (1 - cos(2 pi x / period)) for x in [0, length]; half-width
// half_width - pinch sin^2(pi s / L) on both sides.
struct SineTubeSpec {
  double length = 20.0;
  double period = 20.0;
  double amplitude = 2.5;
  double half_width = 2.9;
  double pinch = 0.6;
  double spacing = 0.1;
};

VirtualTube sine_tube(const SineTubeSpec& spec);
VirtualTube straight_tube(double length, double half_width, double spacing);

// Uniform Catmull-Rom through the control points; missing end neighbors are reflections.
std::vector<Vec2> catmull_rom(const std::vector<Vec2>& controls, std::size_t samples_per_segment);

// Builds the tube described by a scenario "tube" block; file paths resolve against base_dir.
VirtualTube tube_from_spec(const nlohmann::json& spec, const std::filesystem::path& base_dir);

ScenarioConfig scenario_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
ScenarioConfig load_scenario(const std::filesystem::path& path);

// Accepts either a saved tube or a scenario file.
VirtualTube load_tube_or_scenario(const std::filesystem::path& path);

// Rows of robots across a straight tube, front column nearest the finishing line.
ScenarioConfig grid_scenario(std::size_t robots, std::size_t rows, double row_gap, double column_gap,
                             double half_width, double length, double v_max);

}  // namespace tubenav
