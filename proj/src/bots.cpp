#include "swarmgame/bots.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "swarmgame/protocol.hpp"

namespace swarmgame {

std::string_view to_string(BotKind k) {
  switch (k) {
    case BotKind::UniformCoverage: return "uniform";
    case BotKind::Stationary: return "stationary";
    case BotKind::SurroundCentroid: return "surround";
    case BotKind::ReplayScript: return "script";
  }
  return "stationary";
}

std::vector<ScriptEntry> load_command_log(std::istream& in, const FlockCommand& flock_defaults) {
  std::vector<ScriptEntry> out;
  std::string line;
  long lineno = 0;
  bool header = false, ended = false;
  auto fail = [&](const std::string& why) {
    throw ScriptError("command log line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (ended) fail("record after end");
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error&) {
      fail("invalid JSON");
    }
    if (!j.is_object()) fail("expected an object");
    const std::string type = j.value("type", std::string("command"));
    if (!header) {
      if (type != "header" || j.value("format", std::string()) != "swarmgame-commands") fail("missing header");
      header = true;
      continue;
    }
    if (type == "end") {
      ended = true;
      continue;
    }
    if (type != "command") fail("unexpected record type '" + type + "'");
    try {
      ScriptEntry e;
      const json& t = j.at("tick");
      if (!t.is_number_integer() || t.get<long>() < 0) fail("'tick' must be a non-negative integer");
      e.tick = t.get<long>();
      if (!out.empty() && e.tick < out.back().tick) fail("ticks must not decrease");
      if (!j.at("team").is_string()) fail("'team' must be a string");
      e.team = team_from_string(j.at("team").get<std::string>());
      e.command = command_from_json(j.at("command"), flock_defaults);
      out.push_back(std::move(e));
    } catch (const ScriptError&) {
      throw;
    } catch (const std::exception& ex) {
      fail(ex.what());
    }
  }
  if (!header) throw ScriptError("command log is empty");
  return out;
}

std::vector<ScriptEntry> load_command_log_file(const std::string& path, const FlockCommand& flock_defaults) {
  std::ifstream in(path);
  if (!in) throw ScriptError("cannot open command log '" + path + "'");
  try {
    return load_command_log(in, flock_defaults);
  } catch (const ScriptError& e) {
    throw ScriptError(path + ": " + e.what());
  }
}

BotPolicy make_bot(std::string_view spec, Team team, const FlockCommand& flock_defaults) {
  BotPolicy b;
  b.team = team;
  if (spec == "uniform") {
    b.kind = BotKind::UniformCoverage;
  } else if (spec == "stationary") {
    b.kind = BotKind::Stationary;
  } else if (spec == "surround") {
    b.kind = BotKind::SurroundCentroid;
  } else if (spec.starts_with("script:")) {
    b.kind = BotKind::ReplayScript;
    b.script = load_command_log_file(std::string(spec.substr(7)), flock_defaults);
  } else {
    throw std::invalid_argument("unknown bot '" + std::string(spec) + "' (uniform|stationary|surround|script:PATH)");
  }
  return b;
}

Stroke ring_stroke(Vec2 center, double radius, double brush_radius, int points) {
  Stroke s;
  s.brush = Brush::Attract;
  s.radius = brush_radius;
  for (int i = 0; i <= points; ++i) {
    const double a = 2.0 * std::numbers::pi * (i % points) / points;
    Vec2 p{center.x + radius * std::cos(a), center.y + radius * std::sin(a)};
    s.points.push_back({std::clamp(p.x, 0.0, 1.0), std::clamp(p.y, 0.0, 1.0)});
  }
  return s;
}

namespace {

std::vector<Command> surround(BotPolicy& b, const GameState& state) {
  if (state.tick % b.interval_ticks != 0) return {};
  // agents are already in id order, so this sum is reproducible
  Vec2 sum{};
  int n = 0;
  for (const AgentState& a : state.agents) {
    if (a.team == b.team) continue;
    sum = sum + a.position;
    ++n;
  }
  if (n == 0) return {};
  const Vec2 centroid = sum * (1.0 / n);
  StrokeCommand cmd;
  cmd.replace = true;
  cmd.strokes.push_back(ring_stroke(centroid, b.ring_radius, b.brush_radius, b.ring_points));
  return {cmd};
}

}  // namespace

std::vector<Command> bot_step(BotPolicy& b, const GameState& state) {
  switch (b.kind) {
    case BotKind::Stationary:
      return {};
    case BotKind::UniformCoverage:
      if (b.sent) return {};
      b.sent = true;
      return {StrokeCommand{{}, true}};
    case BotKind::SurroundCentroid:
      return surround(b, state);
    case BotKind::ReplayScript: {
      std::vector<Command> out;
      while (b.cursor < b.script.size() && b.script[b.cursor].tick <= state.tick) {
        const ScriptEntry& e = b.script[b.cursor++];
        if (e.team == b.team) out.push_back(e.command);
      }
      return out;
    }
  }
  return {};
}

}  // namespace swarmgame
