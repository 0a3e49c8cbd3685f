#include "swarmgame/runner.hpp"

#include <cinttypes>
#include <cstdio>
#include <istream>
#include <ostream>

#include "swarmgame/protocol.hpp"

namespace swarmgame {

std::string format_hash(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

namespace {

std::uint64_t parse_hash(const json& j) {
  if (!j.is_string() || j.get<std::string>().size() != 16) throw std::invalid_argument("bad hash");
  const std::string s = j.get<std::string>();
  std::size_t used = 0;
  const std::uint64_t h = std::stoull(s, &used, 16);
  if (used != s.size()) throw std::invalid_argument("bad hash");
  return h;
}

void write_line(std::ostream* out, const json& j) {
  if (out) *out << j.dump() << '\n';
}

json agents_json(const std::vector<AgentState>& agents) {
  json arr = json::array();
  for (const AgentState& a : agents) {
    arr.push_back({{"id", a.id}, {"team", to_string(a.team)}, {"x", a.position.x}, {"y", a.position.y},
                   {"vx", a.velocity.x}, {"vy", a.velocity.y}});
  }
  return arr;
}

}  // namespace

Match::Match(const GameConfig& cfg, MatchLogs logs) : game_(cfg), logs_(logs) {
  write_line(logs_.commands, {{"type", "header"}, {"format", "swarmgame-commands"}, {"version", 1}});
  write_line(logs_.events, {{"type", "header"},
                            {"format", "swarmgame-events"},
                            {"version", 1},
                            {"agents_per_team", cfg.agents_per_team},
                            {"dt_engine", cfg.dynamics.dt_engine}});
  write_line(logs_.recording,
             {{"type", "header"}, {"format", "swarmgame-recording"}, {"version", 1}, {"config", config_to_json(cfg)}});
}

void Match::submit(Team team, Command cmd) { pending_.emplace_back(team, std::move(cmd)); }

std::vector<GameEvent> Match::step() {
  if (finished_) throw std::logic_error("match already finished");
  const long tick = game_.state().tick;
  json applied = json::array();
  for (auto& [team, cmd] : pending_) {
    game_.submit(team, cmd);
    json c = command_to_json(cmd);
    write_line(logs_.commands, {{"type", "command"}, {"tick", tick}, {"team", to_string(team)}, {"command", c}});
    applied.push_back({{"team", to_string(team)}, {"command", std::move(c)}});
  }
  pending_.clear();

  std::vector<GameEvent> events = game_.step();
  for (const GameEvent& e : events) write_line(logs_.events, event_to_json(e));
  if (logs_.recording) {
    write_line(logs_.recording, {{"type", "tick"},
                                 {"tick", game_.state().tick},
                                 {"commands", std::move(applied)},
                                 {"agents", agents_json(game_.state().agents)},
                                 {"hash", format_hash(game_.state_hash())}});
  }
  return events;
}

void Match::finish() {
  if (finished_) return;
  finished_ = true;
  const long ticks = game_.state().tick;
  const std::string hash = format_hash(game_.state_hash());
  write_line(logs_.commands, {{"type", "end"}, {"ticks", ticks}});
  write_line(logs_.events, {{"type", "end"}, {"ticks", ticks}, {"hash", hash}});
  write_line(logs_.recording, {{"type", "end"}, {"ticks", ticks}, {"hash", hash}});
  for (std::ostream* o : {logs_.commands, logs_.events, logs_.recording})
    if (o) o->flush();
}

RunSummary run_headless(const GameConfig& cfg, std::array<BotPolicy, 2>& bots, long max_ticks, MatchLogs logs) {
  Match m(cfg, logs);
  RunSummary s;
  while (m.game().state().tick < max_ticks && !m.game().state().over()) {
    for (BotPolicy& b : bots) {
      for (Command& c : bot_step(b, m.game().state())) m.submit(b.team, std::move(c));
    }
    for (const GameEvent& e : m.step())
      if (e.kind == EventKind::Capture) ++s.captures;
  }
  m.finish();
  s.ticks = m.game().state().tick;
  s.hash = m.game().state_hash();
  s.winner = m.game().state().winner;
  return s;
}

namespace {

struct LineReader {
  std::istream& in;
  long lineno = 0;

  std::optional<json> next() {
    std::string line;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      try {
        json j = json::parse(line);
        if (!j.is_object()) fail("expected an object");
        return j;
      } catch (const json::parse_error&) {
        fail("invalid JSON");
      }
    }
    return std::nullopt;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw LogError("line " + std::to_string(lineno) + ": " + why);
  }
};

std::string type_of(const json& j) {
  auto it = j.find("type");
  return it != j.end() && it->is_string() ? it->get<std::string>() : std::string();
}

GameConfig read_recording_header(LineReader& r) {
  auto h = r.next();
  if (!h || type_of(*h) != "header" || h->value("format", std::string()) != "swarmgame-recording") {
    r.fail("missing recording header");
  }
  try {
    GameConfig cfg = config_from_json(h->at("config"));
    cfg.validate();
    return cfg;
  } catch (const std::exception& e) {
    r.fail(e.what());
  }
}

}  // namespace

GameConfig recording_config(std::istream& recording) {
  LineReader r{recording};
  return read_recording_header(r);
}

ReplayReport replay_recording(std::istream& recording, MatchLogs logs) {
  LineReader r{recording};
  const GameConfig cfg = read_recording_header(r);
  Match m(cfg, logs);
  ReplayReport rep;
  bool ended = false;
  while (auto j = r.next()) {
    const std::string type = type_of(*j);
    if (ended) r.fail("record after end");
    try {
      if (type == "tick") {
        const long tick = j->at("tick").get<long>();
        if (tick != m.game().state().tick + 1) r.fail("expected tick " + std::to_string(m.game().state().tick + 1));
        for (const json& c : j->at("commands")) {
          m.submit(team_from_string(c.at("team").get<std::string>()), command_from_json(c.at("command"), cfg.flock_defaults));
        }
        const std::uint64_t want = parse_hash(j->at("hash"));
        m.step();
        if (m.game().state_hash() != want && rep.first_divergence < 0) rep.first_divergence = tick;
      } else if (type == "end") {
        if (j->at("ticks").get<long>() != m.game().state().tick) r.fail("tick count does not match the records");
        rep.recorded_hash = parse_hash(j->at("hash"));
        ended = true;
      } else {
        r.fail("unexpected record type '" + type + "'");
      }
    } catch (const LogError&) {
      throw;
    } catch (const std::exception& e) {
      r.fail(e.what());
    }
  }
  if (!ended) r.fail("recording has no end record");
  m.finish();
  rep.ticks = m.game().state().tick;
  rep.replayed_hash = m.game().state_hash();
  rep.ok = rep.first_divergence < 0 && rep.replayed_hash == rep.recorded_hash;
  return rep;
}

void export_metrics(std::istream& event_log, std::ostream& csv) {
  LineReader r{event_log};
  auto h = r.next();
  if (!h || type_of(*h) != "header" || h->value("format", std::string()) != "swarmgame-events") {
    r.fail("missing event log header");
  }
  int n = 0;
  double dt = 0.0;
  try {
    n = h->at("agents_per_team").get<int>();
    dt = h->at("dt_engine").get<double>();
  } catch (const std::exception& e) {
    r.fail(e.what());
  }
  if (n < 1 || !(dt > 0.0)) r.fail("bad header values");

  std::vector<Team> owner(2 * static_cast<std::size_t>(n));
  for (int i = 0; i < 2 * n; ++i) owner[i] = i < n ? Team::Red : Team::Blue;
  std::array<int, 2> count{n, n};
  std::vector<GameEvent> events;
  long ticks = -1;
  bool over = false;

  while (auto j = r.next()) {
    if (ticks >= 0) r.fail("record after end");
    const std::string type = type_of(*j);
    if (type == "end") {
      try {
        ticks = j->at("ticks").get<long>();
      } catch (const std::exception& e) {
        r.fail(e.what());
      }
      if (!events.empty() && events.back().tick > ticks) r.fail("end tick precedes the last event");
      continue;
    }
    GameEvent e;
    try {
      e = event_from_json(*j);
    } catch (const std::exception& ex) {
      r.fail(ex.what());
    }
    if (over) r.fail("event after game_over");
    if (e.tick < 1) r.fail("tick must be >= 1");
    if (!events.empty() && e.tick < events.back().tick) r.fail("ticks must not decrease");
    if (e.kind == EventKind::Capture) {
      if (e.agent_id < 0 || e.agent_id >= 2 * n) r.fail("agent id out of range");
      if (owner[e.agent_id] != e.from) r.fail("agent " + std::to_string(e.agent_id) + " is not on team " + std::string(to_string(e.from)));
      owner[e.agent_id] = e.to;
      --count[index(e.from)];
      ++count[index(e.to)];
    } else {
      if (count[index(opponent(e.to))] != 0) r.fail("game_over while both teams have agents");
      over = true;
    }
    events.push_back(e);
  }
  if (ticks < 0) r.fail("event log has no end record");

  csv << "time_s,red_count,blue_count\n";
  std::array<int, 2> c{n, n};
  std::size_t next = 0;
  char buf[64];
  for (long t = 0; t <= ticks; ++t) {
    for (; next < events.size() && events[next].tick == t; ++next) {
      if (events[next].kind != EventKind::Capture) continue;
      --c[index(events[next].from)];
      ++c[index(events[next].to)];
    }
    std::snprintf(buf, sizeof buf, "%.4f,%d,%d\n", static_cast<double>(t) * dt, c[0], c[1]);
    csv << buf;
  }
}

}  // namespace swarmgame
