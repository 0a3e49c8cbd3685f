#include "swarmgame/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>

namespace swarmgame {

namespace {

template <class T>
T parse_number(const std::string& v) {
  T out{};
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw std::invalid_argument("'" + v + "' is not a valid number");
  return out;
}

double real(const std::string& v) {
  const double d = parse_number<double>(v);
  if (!std::isfinite(d)) throw std::invalid_argument("'" + v + "' is not finite");
  return d;
}

int integer(const std::string& v) { return parse_number<int>(v); }

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> m = {
      {"agents_per_team", [](RunConfig& r, const std::string& v) { r.game.agents_per_team = integer(v); }},
      {"seed", [](RunConfig& r, const std::string& v) { r.game.seed = parse_number<std::uint64_t>(v); }},
      {"max_ticks", [](RunConfig& r, const std::string& v) { r.max_ticks = parse_number<long>(v); }},
      {"red_controller", [](RunConfig& r, const std::string& v) { r.game.controllers[0] = controller_from_string(v); }},
      {"blue_controller", [](RunConfig& r, const std::string& v) { r.game.controllers[1] = controller_from_string(v); }},
      {"red_bot", [](RunConfig& r, const std::string& v) { r.red_bot = v; }},
      {"blue_bot", [](RunConfig& r, const std::string& v) { r.blue_bot = v; }},
      {"port", [](RunConfig& r, const std::string& v) { r.port = parse_number<std::uint16_t>(v); }},
      {"record", [](RunConfig& r, const std::string& v) { r.record = v; }},
      {"metrics_out", [](RunConfig& r, const std::string& v) { r.metrics_out = v; }},
      {"command_log", [](RunConfig& r, const std::string& v) { r.command_log = v; }},
      {"event_log", [](RunConfig& r, const std::string& v) { r.event_log = v; }},
      {"dt_engine", [](RunConfig& r, const std::string& v) { r.game.dynamics.dt_engine = real(v); }},
      {"control_every", [](RunConfig& r, const std::string& v) { r.game.dynamics.control_every = integer(v); }},
      {"v_max", [](RunConfig& r, const std::string& v) { r.game.dynamics.v_max = real(v); }},
      {"u_max", [](RunConfig& r, const std::string& v) { r.game.dynamics.u_max = real(v); }},
      {"grid_size", [](RunConfig& r, const std::string& v) { r.game.engine.grid_size = integer(v); }},
      {"heat_decay", [](RunConfig& r, const std::string& v) { r.game.engine.heat_decay = real(v); }},
      {"heat_deposit", [](RunConfig& r, const std::string& v) { r.game.engine.heat_deposit = real(v); }},
      {"capture_threshold", [](RunConfig& r, const std::string& v) { r.game.engine.threshold_fraction = real(v); }},
      {"activity_floor", [](RunConfig& r, const std::string& v) { r.game.engine.activity_floor = real(v); }},
      {"painter_grid_size", [](RunConfig& r, const std::string& v) { r.game.painter.grid_size = integer(v); }},
      {"sigma_cells", [](RunConfig& r, const std::string& v) { r.game.painter.sigma_cells = real(v); }},
      {"sigma_truncate", [](RunConfig& r, const std::string& v) { r.game.painter.truncate_sigmas = real(v); }},
      {"painter_floor", [](RunConfig& r, const std::string& v) { r.game.painter.floor = real(v); }},
      {"basis_order", [](RunConfig& r, const std::string& v) { r.game.basis_order = integer(v); }},
      {"q", [](RunConfig& r, const std::string& v) { r.game.ergodic.q = real(v); }},
      {"r11", [](RunConfig& r, const std::string& v) { r.game.ergodic.r11 = real(v); }},
      {"r12", [](RunConfig& r, const std::string& v) { r.game.ergodic.r12 = real(v); }},
      {"r22", [](RunConfig& r, const std::string& v) { r.game.ergodic.r22 = real(v); }},
      {"horizon", [](RunConfig& r, const std::string& v) { r.game.ergodic.horizon = real(v); }},
      {"horizon_steps", [](RunConfig& r, const std::string& v) { r.game.ergodic.horizon_steps = integer(v); }},
      {"barrier_gain", [](RunConfig& r, const std::string& v) { r.game.ergodic.barrier_gain = real(v); }},
      {"barrier_margin", [](RunConfig& r, const std::string& v) { r.game.ergodic.barrier_margin = real(v); }},
      {"memory_seconds", [](RunConfig& r, const std::string& v) { r.game.ergodic.memory_seconds = real(v); }},
      {"flock_separation_radius", [](RunConfig& r, const std::string& v) { r.game.flock_defaults.separation_radius = real(v); }},
      {"flock_cohesion_radius", [](RunConfig& r, const std::string& v) { r.game.flock_defaults.cohesion_radius = real(v); }},
      {"flock_w_sep", [](RunConfig& r, const std::string& v) { r.game.flock_defaults.w_sep = real(v); }},
      {"flock_w_coh", [](RunConfig& r, const std::string& v) { r.game.flock_defaults.w_coh = real(v); }},
      {"flock_w_align", [](RunConfig& r, const std::string& v) { r.game.flock_defaults.w_align = real(v); }},
  };
  return m;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void set_config_value(RunConfig& rc, const std::string& key, const std::string& value) {
  auto it = setters().find(key);
  if (it == setters().end()) throw std::invalid_argument("unknown key '" + key + "'");
  it->second(rc, value);
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& [k, _] : setters()) out.push_back(k);
  return out;
}

void apply_config(std::istream& in, RunConfig& rc, const std::string& name) {
  std::string raw;
  int lineno = 0;
  std::set<std::string> seen;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = name + ":" + std::to_string(lineno) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "missing key");
    if (value.empty()) throw ConfigError(where + "missing value for '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      set_config_value(rc, key, value);
      if (rc.max_ticks < 0) throw std::invalid_argument("max_ticks must be >= 0");
      rc.game.validate();  // so a bad value is reported at its own line
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + key + ": " + e.what());
    }
  }
}

void apply_config_file(const std::string& path, RunConfig& rc) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  apply_config(in, rc, path);
}

}  // namespace swarmgame
