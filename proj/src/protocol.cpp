#include "swarmgame/protocol.hpp"

#include <cmath>

namespace swarmgame {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw ProtocolError("expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ProtocolError(std::string("missing field '") + key + "'");
  return *it;
}

double real_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) throw ProtocolError(std::string("field '") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ProtocolError(std::string("field '") + key + "' must be finite");
  return d;
}

long long int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) throw ProtocolError(std::string("field '") + key + "' must be an integer");
  return v.get<long long>();
}

std::string string_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) throw ProtocolError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

Team team_field(const json& j, const char* key) {
  try {
    return team_from_string(string_field(j, key));
  } catch (const std::invalid_argument& e) {
    throw ProtocolError(e.what());
  }
}

}  // namespace

std::string_view to_string(Role r) {
  switch (r) {
    case Role::PlayerRed: return "red";
    case Role::PlayerBlue: return "blue";
    case Role::Spectator: return "spectator";
  }
  return "spectator";
}

json stroke_to_json(const Stroke& s) {
  json pts = json::array();
  for (const Vec2& p : s.points) pts.push_back({p.x, p.y});
  return {{"brush", s.brush == Brush::Attract ? "attract" : "repel"}, {"radius", s.radius}, {"points", pts}};
}

Stroke stroke_from_json(const json& j) {
  Stroke s;
  const std::string brush = string_field(j, "brush");
  if (brush == "attract") {
    s.brush = Brush::Attract;
  } else if (brush == "repel") {
    s.brush = Brush::Repel;
  } else {
    throw ProtocolError("unknown brush '" + brush + "'");
  }
  s.radius = real_field(j, "radius");
  const json& pts = field(j, "points");
  if (!pts.is_array()) throw ProtocolError("'points' must be an array");
  for (const json& p : pts) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw ProtocolError("each point must be [x, y]");
    }
    s.points.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ProtocolError(e.what());
  }
  return s;
}

Command command_from_json(const json& j, const FlockCommand& defaults) {
  const std::string type = string_field(j, "type");
  if (type == "command_strokes") {
    StrokeCommand sc;
    const json& strokes = field(j, "strokes");
    if (!strokes.is_array()) throw ProtocolError("'strokes' must be an array");
    for (const json& s : strokes) sc.strokes.push_back(stroke_from_json(s));
    if (auto it = j.find("replace"); it != j.end()) {
      if (!it->is_boolean()) throw ProtocolError("'replace' must be a boolean");
      sc.replace = it->get<bool>();
    }
    return sc;
  }
  if (type == "command_flock") {
    FlockCommand fc = defaults;
    fc.attractors.clear();
    const json& atts = field(j, "attractors");
    if (!atts.is_array()) throw ProtocolError("'attractors' must be an array");
    for (const json& a : atts) {
      Attractor at{{real_field(a, "x"), real_field(a, "y")}, real_field(a, "weight")};
      if (at.weight < 0.0) throw ProtocolError("attractor weight must be >= 0");
      fc.attractors.push_back(at);
    }
    try {
      fc.validate();
    } catch (const std::invalid_argument& e) {
      throw ProtocolError(e.what());
    }
    return fc;
  }
  if (type == "clear") return ClearCommand{};
  throw ProtocolError("unknown message type '" + type + "'");
}

json command_to_json(const Command& cmd) {
  if (const auto* sc = std::get_if<StrokeCommand>(&cmd)) {
    json strokes = json::array();
    for (const Stroke& s : sc->strokes) strokes.push_back(stroke_to_json(s));
    json j{{"type", "command_strokes"}, {"strokes", strokes}};
    if (sc->replace) j["replace"] = true;
    return j;
  }
  if (const auto* fc = std::get_if<FlockCommand>(&cmd)) {
    json atts = json::array();
    for (const Attractor& a : fc->attractors) {
      atts.push_back({{"x", a.position.x}, {"y", a.position.y}, {"weight", a.weight}});
    }
    return {{"type", "command_flock"}, {"attractors", atts}};
  }
  return {{"type", "clear"}};
}

ClientMessage parse_client_message(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error&) {
    throw ProtocolError("invalid JSON");
  }
  const std::string type = string_field(j, "type");
  if (type == "join") {
    const std::string role = string_field(j, "role");
    if (role == "red") return JoinRequest{Role::PlayerRed};
    if (role == "blue") return JoinRequest{Role::PlayerBlue};
    if (role == "spectator") return JoinRequest{Role::Spectator};
    throw ProtocolError("unknown role '" + role + "'");
  }
  return command_from_json(j);
}

json event_to_json(const GameEvent& e) {
  if (e.kind == EventKind::GameOver) {
    return {{"type", "game_over"}, {"winner", to_string(e.to)}, {"tick", e.tick}};
  }
  return {{"type", "event"}, {"kind", "capture"}, {"agent", e.agent_id},
          {"from", to_string(e.from)}, {"to", to_string(e.to)}, {"tick", e.tick}};
}

GameEvent event_from_json(const json& j) {
  const std::string type = string_field(j, "type");
  GameEvent e;
  e.tick = int_field(j, "tick");
  if (type == "game_over") {
    e.kind = EventKind::GameOver;
    e.to = team_field(j, "winner");
    e.from = opponent(e.to);
    return e;
  }
  if (type != "event") throw ProtocolError("unknown event type '" + type + "'");
  if (string_field(j, "kind") != "capture") throw ProtocolError("unknown event kind");
  e.kind = EventKind::Capture;
  e.agent_id = static_cast<int>(int_field(j, "agent"));
  e.from = team_field(j, "from");
  e.to = team_field(j, "to");
  if (e.from == e.to) throw ProtocolError("capture must change team");
  return e;
}

json state_message(const GameState& state, const EngineConfig& cfg) {
  json agents = json::array();
  for (const AgentState& a : state.agents) {
    agents.push_back({{"id", a.id}, {"team", to_string(a.team)}, {"x", a.position.x}, {"y", a.position.y},
                      {"vx", a.velocity.x}, {"vy", a.velocity.y}});
  }
  json fields = json::object();
  for (Team t : kTeams) {
    const Grid& g = state.capture[index(t)];
    const double peak = g.max();
    std::vector<double> norm(g.count(), 0.0);
    if (peak > cfg.activity_floor) {
      for (std::size_t i = 0; i < g.count(); ++i) norm[i] = g[i] / peak;
    }
    fields[std::string(to_string(t))] = norm;
  }
  return {{"type", "state"},
          {"tick", state.tick},
          {"agents", agents},
          {"fields", fields},
          {"team_sizes", {{"red", state.team_size(Team::Red)}, {"blue", state.team_size(Team::Blue)}}}};
}

json joined_message(Role role, const GameConfig& cfg) {
  return {{"type", "joined"}, {"role", to_string(role)}, {"config", config_to_json(cfg)}};
}

json rejected_message(std::string_view reason) { return {{"type", "rejected"}, {"reason", reason}}; }

json error_message(std::string_view reason) { return {{"type", "error"}, {"reason", reason}}; }

json config_to_json(const GameConfig& c) {
  return {
      {"agents_per_team", c.agents_per_team},
      {"seed", c.seed},
      {"dt_engine", c.dynamics.dt_engine},
      {"control_every", c.dynamics.control_every},
      {"v_max", c.dynamics.v_max},
      {"u_max", c.dynamics.u_max},
      {"grid_size", c.engine.grid_size},
      {"heat_decay", c.engine.heat_decay},
      {"heat_deposit", c.engine.heat_deposit},
      {"capture_threshold", c.engine.threshold_fraction},
      {"activity_floor", c.engine.activity_floor},
      {"painter_grid_size", c.painter.grid_size},
      {"sigma_cells", c.painter.sigma_cells},
      {"sigma_truncate", c.painter.truncate_sigmas},
      {"painter_floor", c.painter.floor},
      {"basis_order", c.basis_order},
      {"q", c.ergodic.q},
      {"r11", c.ergodic.r11},
      {"r12", c.ergodic.r12},
      {"r22", c.ergodic.r22},
      {"horizon", c.ergodic.horizon},
      {"horizon_steps", c.ergodic.horizon_steps},
      {"barrier_gain", c.ergodic.barrier_gain},
      {"barrier_margin", c.ergodic.barrier_margin},
      {"memory_seconds", c.ergodic.memory_seconds},
      {"flock_separation_radius", c.flock_defaults.separation_radius},
      {"flock_cohesion_radius", c.flock_defaults.cohesion_radius},
      {"flock_w_sep", c.flock_defaults.w_sep},
      {"flock_w_coh", c.flock_defaults.w_coh},
      {"flock_w_align", c.flock_defaults.w_align},
      {"red_controller", to_string(c.controllers[0])},
      {"blue_controller", to_string(c.controllers[1])},
  };
}

GameConfig config_from_json(const json& j) {
  GameConfig c;
  try {
    c.agents_per_team = j.at("agents_per_team").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.dynamics.dt_engine = j.at("dt_engine").get<double>();
    c.dynamics.control_every = j.at("control_every").get<int>();
    c.dynamics.v_max = j.at("v_max").get<double>();
    c.dynamics.u_max = j.at("u_max").get<double>();
    c.engine.grid_size = j.at("grid_size").get<int>();
    c.engine.heat_decay = j.at("heat_decay").get<double>();
    c.engine.heat_deposit = j.at("heat_deposit").get<double>();
    c.engine.threshold_fraction = j.at("capture_threshold").get<double>();
    c.engine.activity_floor = j.at("activity_floor").get<double>();
    c.painter.grid_size = j.at("painter_grid_size").get<int>();
    c.painter.sigma_cells = j.at("sigma_cells").get<double>();
    c.painter.truncate_sigmas = j.at("sigma_truncate").get<double>();
    c.painter.floor = j.at("painter_floor").get<double>();
    c.basis_order = j.at("basis_order").get<int>();
    c.ergodic.q = j.at("q").get<double>();
    c.ergodic.r11 = j.at("r11").get<double>();
    c.ergodic.r12 = j.at("r12").get<double>();
    c.ergodic.r22 = j.at("r22").get<double>();
    c.ergodic.horizon = j.at("horizon").get<double>();
    c.ergodic.horizon_steps = j.at("horizon_steps").get<int>();
    c.ergodic.barrier_gain = j.at("barrier_gain").get<double>();
    c.ergodic.barrier_margin = j.at("barrier_margin").get<double>();
    c.ergodic.memory_seconds = j.at("memory_seconds").get<double>();
    c.flock_defaults.separation_radius = j.at("flock_separation_radius").get<double>();
    c.flock_defaults.cohesion_radius = j.at("flock_cohesion_radius").get<double>();
    c.flock_defaults.w_sep = j.at("flock_w_sep").get<double>();
    c.flock_defaults.w_coh = j.at("flock_w_coh").get<double>();
    c.flock_defaults.w_align = j.at("flock_w_align").get<double>();
    c.controllers[0] = controller_from_string(j.at("red_controller").get<std::string>());
    c.controllers[1] = controller_from_string(j.at("blue_controller").get<std::string>());
    c.validate();
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ProtocolError(std::string("config: ") + e.what());
  }
  return c;
}

}  // namespace swarmgame
