#pragma once

// A running match: the engine state plus everything the controllers need
// (per-agent coverage, each team's latest command, held controls).
// Commands are applied between ticks; controls are recomputed every
// `control_every` ticks and held in between.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "swarmgame/engine.hpp"
#include "swarmgame/ergodic.hpp"
#include "swarmgame/flocking.hpp"
#include "swarmgame/painter.hpp"

namespace swarmgame {

enum class ControllerKind : std::uint8_t { Ergodic, Flocking };

std::string_view to_string(ControllerKind k);
ControllerKind controller_from_string(std::string_view s);

struct StrokeCommand {
  std::vector<Stroke> strokes;
  bool replace = false;  // start from an empty raw layer instead of overlaying

  bool operator==(const StrokeCommand&) const = default;
};

struct ClearCommand {
  bool operator==(const ClearCommand&) const = default;
};

using Command = std::variant<StrokeCommand, FlockCommand, ClearCommand>;

struct GameConfig {
  int agents_per_team = 10;
  std::uint64_t seed = 0;
  DynamicsConfig dynamics;
  EngineConfig engine;
  PainterConfig painter;
  int basis_order = 8;
  ErgodicConfig ergodic;
  FlockCommand flock_defaults;  // radii and gains used by flocking teams
  std::array<ControllerKind, 2> controllers{ControllerKind::Ergodic, ControllerKind::Ergodic};

  void validate() const;
};

struct TeamCommandState {
  Grid raw;                                  // signed painter layer, overlays accumulate here
  std::optional<TargetDistribution> target;  // installed density, if any
  Coeffs target_coeffs;
  std::uint64_t generation = 0;  // bumped by every installed command
  std::optional<FlockCommand> flock;
};

class Game {
 public:
  explicit Game(const GameConfig& cfg);

  /// Installs a team command. Must be called between ticks.
  void submit(Team team, const Command& cmd);

  /// Advances one engine tick; returns the events it produced.
  std::vector<GameEvent> step();

  const GameState& state() const { return state_; }
  const GameConfig& config() const { return cfg_; }
  const BasisConfig& basis() const { return basis_; }
  const TeamCommandState& team_command(Team t) const { return commands_[index(t)]; }
  const CoverageCoefficients& coverage(std::size_t agent_index) const { return coverage_[agent_index]; }

  /// Team mean coverage; nullopt when the team is empty.
  std::optional<Coeffs> team_coverage(Team t) const;

  /// 64-bit FNV-1a digest of everything that influences future ticks.
  std::uint64_t state_hash() const;

 private:
  void refresh_controls();

  GameConfig cfg_;
  BasisConfig basis_;
  double coverage_gamma_;
  GameState state_;
  std::vector<CoverageCoefficients> coverage_;
  std::vector<Vec2> held_;
  std::array<TeamCommandState, 2> commands_;
};

}  // namespace swarmgame
