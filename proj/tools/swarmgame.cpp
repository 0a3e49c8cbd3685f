// swarmgame: serve a match over websockets, run bots headless, or replay a
// recording and check its hashes.

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "swarmgame/run_config.hpp"
#include "swarmgame/runner.hpp"
#include "swarmgame/server.hpp"

using namespace swarmgame;

namespace {

struct LogFiles {
  std::ofstream commands, events, recording;

  explicit LogFiles(const RunConfig& rc) {
    open(commands, rc.command_log);
    open(events, rc.event_log);
    if (!rc.record.empty()) open(recording, rc.record);
  }

  MatchLogs logs() { return {&commands, &events, recording.is_open() ? &recording : nullptr}; }

  static void open(std::ofstream& f, const std::string& path) {
    f.open(path);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
  }

  void close() {
    commands.close();
    events.close();
    if (recording.is_open()) recording.close();
  }
};

void write_metrics(const RunConfig& rc) {
  std::ifstream in(rc.event_log);
  std::ofstream out(rc.metrics_out);
  if (!out) throw std::runtime_error("cannot write '" + rc.metrics_out + "'");
  try {
    export_metrics(in, out);
  } catch (const LogError& e) {
    throw LogError(rc.event_log + ": " + e.what());
  }
}

void print_summary(const RunSummary& s) {
  std::cout << "ticks " << s.ticks << "  captures " << s.captures << "  winner "
            << (s.winner ? std::string(to_string(*s.winner)) : "none") << "  hash " << format_hash(s.hash) << "\n";
}

int headless(RunConfig& rc) {
  std::array<BotPolicy, 2> bots{
      make_bot(rc.red_bot.empty() ? "stationary" : rc.red_bot, Team::Red, rc.game.flock_defaults),
      make_bot(rc.blue_bot.empty() ? "stationary" : rc.blue_bot, Team::Blue, rc.game.flock_defaults)};
  LogFiles files(rc);
  const RunSummary s = run_headless(rc.game, bots, rc.max_ticks, files.logs());
  files.close();
  write_metrics(rc);
  print_summary(s);
  return 0;
}

int serve(RunConfig& rc) {
  std::array<std::optional<BotPolicy>, 2> bots;
  if (!rc.red_bot.empty()) bots[0] = make_bot(rc.red_bot, Team::Red, rc.game.flock_defaults);
  if (!rc.blue_bot.empty()) bots[1] = make_bot(rc.blue_bot, Team::Blue, rc.game.flock_defaults);
  ServerOptions opt;
  opt.port = rc.port;
  opt.max_ticks = rc.max_ticks;
  LogFiles files(rc);
  GameServer server(rc.game, opt, files.logs(), std::move(bots));
  std::cout << "listening on ws://" << opt.address << ":" << server.port() << "/game" << std::endl;
  const RunSummary s = server.run();
  files.close();
  write_metrics(rc);
  print_summary(s);
  return 0;
}

int replay(RunConfig& rc, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open recording '" + path + "'");
  LogFiles files(rc);
  ReplayReport rep;
  try {
    rep = replay_recording(in, files.logs());
  } catch (const LogError& e) {
    throw LogError(path + ": " + e.what());
  }
  files.close();
  write_metrics(rc);
  std::cout << "ticks " << rep.ticks << "  recorded " << format_hash(rep.recorded_hash) << "  replayed "
            << format_hash(rep.replayed_hash) << "\n";
  if (!rep.ok) {
    std::cerr << "replay diverged";
    if (rep.first_divergence >= 0) std::cerr << " at tick " << rep.first_divergence;
    std::cerr << "\n";
    return 1;
  }
  std::cout << "replay ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Swarm-vs-swarm capture game: server, headless bots, replay"};
  std::string mode = "headless";
  std::string config_path, replay_path;
  int agents = 0;
  std::uint64_t seed = 0;
  long max_ticks = 0;
  std::string red_ctrl, blue_ctrl, red_bot, blue_bot, record, metrics, command_log, event_log;
  std::uint16_t port = 0;

  app.add_option("--mode", mode, "serve | headless | replay")->check(CLI::IsMember({"serve", "headless", "replay"}));
  app.add_option("--config", config_path, "flat key = value file; flags override it");
  auto* o_agents = app.add_option("--agents-per-team", agents)->check(CLI::PositiveNumber);
  auto* o_seed = app.add_option("--seed", seed);
  auto* o_ticks = app.add_option("--max-ticks", max_ticks, "0 runs a served game until it ends")->check(CLI::NonNegativeNumber);
  auto* o_rc = app.add_option("--red-controller", red_ctrl)->check(CLI::IsMember({"ergodic", "flocking"}));
  auto* o_bc = app.add_option("--blue-controller", blue_ctrl)->check(CLI::IsMember({"ergodic", "flocking"}));
  auto* o_rb = app.add_option("--red-bot", red_bot, "uniform | stationary | surround | script:PATH");
  auto* o_bb = app.add_option("--blue-bot", blue_bot, "uniform | stationary | surround | script:PATH");
  auto* o_port = app.add_option("--port", port)->envname("SWARMGAME_PORT");
  auto* o_rec = app.add_option("--record", record, "write a per-tick recording");
  app.add_option("--replay", replay_path, "recording to re-run (replay mode)");
  auto* o_met = app.add_option("--metrics-out", metrics, "team-size CSV");
  auto* o_cl = app.add_option("--command-log", command_log);
  auto* o_el = app.add_option("--event-log", event_log);
  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig rc;
    if (!config_path.empty()) apply_config_file(config_path, rc);
    if (*o_agents) rc.game.agents_per_team = agents;
    if (*o_seed) rc.game.seed = seed;
    if (*o_ticks) rc.max_ticks = max_ticks;
    if (*o_rc) rc.game.controllers[0] = controller_from_string(red_ctrl);
    if (*o_bc) rc.game.controllers[1] = controller_from_string(blue_ctrl);
    if (*o_rb) rc.red_bot = red_bot;
    if (*o_bb) rc.blue_bot = blue_bot;
    if (*o_port) rc.port = port;
    if (*o_rec) rc.record = record;
    if (*o_met) rc.metrics_out = metrics;
    if (*o_cl) rc.command_log = command_log;
    if (*o_el) rc.event_log = event_log;
    rc.game.validate();

    if (mode == "headless") return headless(rc);
    if (mode == "serve") return serve(rc);
    if (replay_path.empty()) throw std::invalid_argument("replay mode needs --replay PATH");
    return replay(rc, replay_path);
  } catch (const std::exception& e) {
    std::cerr << "swarmgame: " << e.what() << "\n";
    return 2;
  }
}
