#pragma once

// Fixed-timestep game rules: heat trails, capture fields, captures and the
// win condition. The engine is a pure function of (state, controls).

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "swarmgame/core.hpp"
#include "swarmgame/grid.hpp"

namespace swarmgame {

struct EngineConfig {
  int grid_size = 50;
  double heat_decay = 0.995;  // per engine tick
  double heat_deposit = 1.0;
  double threshold_fraction = 0.75;
  double activity_floor = 1.0;

  void validate() const;
};

enum class EventKind : std::uint8_t { Capture, GameOver };

struct GameEvent {
  long tick = 0;
  EventKind kind = EventKind::Capture;
  int agent_id = -1;  // -1 for GameOver
  Team from = Team::Red;
  Team to = Team::Red;  // the winner for GameOver

  bool operator==(const GameEvent&) const = default;
};

using HeatField = std::array<Grid, 2>;
using CaptureField = std::array<Grid, 2>;

struct GameState {
  long tick = 0;  // ticks completed; events carry the tick that produced them
  std::vector<AgentState> agents;
  HeatField heat;
  CaptureField capture;
  std::vector<GameEvent> events;
  std::optional<Team> winner;

  static GameState initial(std::vector<AgentState> agents, const EngineConfig& cfg);

  int team_size(Team t) const;
  bool over() const { return winner.has_value(); }
};

/// Decay every cell, then credit each agent's cell to its current team.
void deposit_heat(HeatField& heat, std::span<const AgentState> agents, const EngineConfig& cfg);

/// Ring-perimeter mean of a heat layer (OpenMP kernel).
Grid compute_capture_field(const Grid& heat);

/// Cells whose value exceeds threshold_fraction * max, or none when the max
/// is at or below the activity floor.
std::vector<bool> capture_mask(const Grid& capture, const EngineConfig& cfg);

/// Flips every agent standing in the opposing team's capture mask, all
/// decided against the current fields. Appends and returns the new events.
std::vector<GameEvent> resolve_captures(GameState& state, const EngineConfig& cfg);

/// One engine tick. `controls[i]` drives `state.agents[i]`. Once the game is
/// over this returns the state unchanged.
GameState engine_tick(const GameState& state, std::span<const Vec2> controls, const DynamicsConfig& dyn,
                      const EngineConfig& cfg);

}  // namespace swarmgame
