#pragma once

// Scripted players. A bot sees the state between ticks and may hand back
// commands for its own team; the caller submits them before the next step.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "swarmgame/game.hpp"

namespace swarmgame {

enum class BotKind : std::uint8_t { UniformCoverage, Stationary, SurroundCentroid, ReplayScript };

std::string_view to_string(BotKind k);

/// One entry of a command log: `command` is submitted for `team` just
/// before the engine step that takes the state from `tick` to `tick + 1`.
struct ScriptEntry {
  long tick = 0;
  Team team = Team::Red;
  Command command;

  bool operator==(const ScriptEntry&) const = default;
};

class ScriptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads a command log (header line, entries, end line). Errors carry the
/// 1-based line number of the first bad record.
std::vector<ScriptEntry> load_command_log(std::istream& in, const FlockCommand& flock_defaults = {});
std::vector<ScriptEntry> load_command_log_file(const std::string& path, const FlockCommand& flock_defaults = {});

struct BotPolicy {
  BotKind kind = BotKind::Stationary;
  Team team = Team::Red;
  long interval_ticks = 150;  // 5 s at 30 Hz
  double ring_radius = 0.15;
  double brush_radius = 0.03;
  int ring_points = 32;
  std::vector<ScriptEntry> script;  // ReplayScript only, sorted by tick

  // play-time state
  std::size_t cursor = 0;
  bool sent = false;
};

/// Parses uniform | stationary | surround | script:PATH. Script files are
/// loaded (and validated) here, never during play.
BotPolicy make_bot(std::string_view spec, Team team, const FlockCommand& flock_defaults = {});

/// Commands to submit before the next tick; usually zero or one.
std::vector<Command> bot_step(BotPolicy& bot, const GameState& state);

/// Closed polyline of `points` vertices around `center`, clamped to the arena.
Stroke ring_stroke(Vec2 center, double radius, double brush_radius, int points);

}  // namespace swarmgame
