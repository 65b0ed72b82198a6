#include "willoop/config.hpp"
#include "willoop/types.hpp"

#include <fstream>
#include <sstream>
#include <map>
#include <functional>

namespace willoop {

Config& Config::get() {
  static Config cfg;
  return cfg;
}

bool Config::set(const std::string& key, const std::string& value) {
  static const std::map<std::string, std::function<void(Config&, double)>> dkeys = {
      {"tol_null", [](Config& c, double v) { c.tol_null = v; }},
      {"tol_group", [](Config& c, double v) { c.tol_group = v; }},
      {"tol_loop", [](Config& c, double v) { c.tol_loop = v; }},
      {"tol_fact", [](Config& c, double v) { c.tol_fact = v; }},
      {"tol_cell", [](Config& c, double v) { c.tol_cell = v; }},
      {"tol_conf_exact", [](Config& c, double v) { c.tol_conf_exact = v; }},
      {"tol_conf_fd", [](Config& c, double v) { c.tol_conf_fd = v; }},
      {"fd_step", [](Config& c, double v) { c.fd_step = v; }},
      {"quad_target", [](Config& c, double v) { c.quad_target = v; }},
      {"rk_tol", [](Config& c, double v) { c.rk_tol = v; }},
      {"pole_detour", [](Config& c, double v) { c.pole_detour = v; }},
      {"grid_eps", [](Config& c, double v) { c.grid_eps = v; }},
      {"trunc_default", [](Config& c, double v) { c.trunc_default = (int)v; }},
      {"deg_max", [](Config& c, double v) { c.deg_max = (int)v; }},
  };
  auto it = dkeys.find(key);
  if (it == dkeys.end()) return false;
  it->second(*this, std::stod(value));
  return true;
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t\r");
      auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || key[0] == '[') continue;
    set(key, val);
  }
}

}  // namespace willoop
