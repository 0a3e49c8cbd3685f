#pragma once

// Run configuration for the command-line harness: the game tunables plus
// harness settings, loadable from a flat `key = value` file.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarmgame/game.hpp"

namespace swarmgame {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  GameConfig game;
  long max_ticks = 3600;  // 2 minutes at 30 Hz
  std::string red_bot;    // empty = seat open for a player (serve) / stationary (headless)
  std::string blue_bot;
  std::uint16_t port = 8080;
  std::string record;
  std::string metrics_out = "swarmgame_metrics.csv";
  std::string command_log = "swarmgame_commands.jsonl";
  std::string event_log = "swarmgame_events.jsonl";
};

/// Applies `key = value` lines. '#' starts a comment. Unknown keys, bad
/// values and repeated keys throw ConfigError("<name>:<line>: ...").
void apply_config(std::istream& in, RunConfig& rc, const std::string& name = "config");
void apply_config_file(const std::string& path, RunConfig& rc);

/// Sets one key; throws std::invalid_argument on unknown keys or bad values.
void set_config_value(RunConfig& rc, const std::string& key, const std::string& value);

/// Every recognized key, in a stable order.
std::vector<std::string> config_keys();

}  // namespace swarmgame
