#include "tubenav/tube_io.hpp"

#include <fstream>

#include "tubenav/errors.hpp"

namespace tubenav {

namespace {

nlohmann::json vec(const Vec2& v) { return nlohmann::json::array({v.x(), v.y()}); }

Vec2 vec(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) fail(Fault::InvalidConfig, "expected a 2-vector");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

nlohmann::json tube_to_json(const VirtualTube& tube) {
  nlohmann::json stations = nlohmann::json::array();
  for (const auto& s : tube.stations()) {
    stations.push_back({{"p", vec(s.p)},
                        {"t_c", vec(s.t_c)},
                        {"n_c", vec(s.n_c)},
                        {"kappa", s.kappa},
                        {"s", s.s},
                        {"l", s.l},
                        {"lambda_l", s.lambda_l},
                        {"lambda_r", s.lambda_r}});
  }
  return {{"stations", stations},
          {"r_s_prime", tube.r_s_prime()},
          {"eta_min", tube.eta_min()},
          {"eta_max", tube.eta_max()}};
}

VirtualTube tube_from_json(const nlohmann::json& j) {
  try {
    std::vector<Station> stations;
    for (const auto& e : j.at("stations")) {
      Station s;
      s.p = vec(e.at("p"));
      s.t_c = vec(e.at("t_c"));
      s.n_c = vec(e.at("n_c"));
      s.kappa = e.at("kappa").get<double>();
      s.s = e.at("s").get<double>();
      s.l = e.at("l").get<double>();
      s.lambda_l = e.at("lambda_l").get<double>();
      s.lambda_r = e.at("lambda_r").get<double>();
      stations.push_back(s);
    }
    return VirtualTube(std::move(stations), j.value("r_s_prime", 0.0), j.value("eta_min", 0.2),
                       j.value("eta_max", 5.0));
  } catch (const nlohmann::json::exception& e) {
    fail(Fault::InvalidConfig, std::string("malformed tube file: ") + e.what());
  }
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Fault::InvalidConfig, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(Fault::InvalidConfig, path.string() + ": " + e.what());
  }
}

void save_tube(const VirtualTube& tube, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) fail(Fault::InvalidConfig, "cannot write " + path.string());
  out << tube_to_json(tube).dump(1) << '\n';
}

VirtualTube load_tube(const std::filesystem::path& path) { return tube_from_json(read_json_file(path)); }

}  // namespace tubenav
