#pragma once

#include <filesystem>

#include <json.hpp>

#include "tubenav/tube_geometry.hpp"

namespace tubenav {

nlohmann::json tube_to_json(const VirtualTube& tube);
VirtualTube tube_from_json(const nlohmann::json& j);

void save_tube(const VirtualTube& tube, const std::filesystem::path& path);
VirtualTube load_tube(const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace tubenav
