#pragma once

// Match orchestration shared by headless runs, replay and the server: a Game
// plus the three line-delimited JSON logs (commands, events, recording) and
// the team-size CSV derived from the event log.
//
// Every log starts with a {"type":"header",...} line and ends with a
// {"type":"end",...} line, so a truncated file is detectable.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "swarmgame/bots.hpp"
#include "swarmgame/game.hpp"

namespace swarmgame {

class LogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_hash(std::uint64_t h);

struct MatchLogs {
  std::ostream* commands = nullptr;
  std::ostream* events = nullptr;
  std::ostream* recording = nullptr;
};

class Match {
 public:
  Match(const GameConfig& cfg, MatchLogs logs);

  /// Queues a command for the next step. Commands apply in submission order.
  void submit(Team team, Command cmd);

  /// Applies queued commands, advances one tick, writes the log records.
  std::vector<GameEvent> step();

  /// Writes the end records. Further calls do nothing.
  void finish();

  const Game& game() const { return game_; }

 private:
  Game game_;
  MatchLogs logs_;
  std::vector<std::pair<Team, Command>> pending_;
  bool finished_ = false;
};

struct RunSummary {
  long ticks = 0;
  std::uint64_t hash = 0;
  std::optional<Team> winner;
  std::size_t captures = 0;
};

/// Bots only; stops at GameOver or after max_ticks.
RunSummary run_headless(const GameConfig& cfg, std::array<BotPolicy, 2>& bots, long max_ticks, MatchLogs logs);

struct ReplayReport {
  bool ok = false;
  long ticks = 0;
  std::uint64_t recorded_hash = 0;
  std::uint64_t replayed_hash = 0;
  long first_divergence = -1;  // tick whose hash differed, if any
};

/// Re-runs a recording and checks the hash of every tick and the final one.
/// Malformed recordings throw LogError naming the line.
ReplayReport replay_recording(std::istream& recording, MatchLogs logs);

/// Reads the config stored in a recording header.
GameConfig recording_config(std::istream& recording);

/// Team-size series from an event log: one row per tick from 0 to the final
/// tick, columns time_s, red_count, blue_count.
void export_metrics(std::istream& event_log, std::ostream& csv);

}  // namespace swarmgame
