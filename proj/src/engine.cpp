#include "swarmgame/engine.hpp"

#include <stdexcept>
#include <string>

#include "swarmgame/kernels.hpp"

namespace swarmgame {

void EngineConfig::validate() const {
  if (grid_size < 5) throw std::invalid_argument("grid_size must be >= 5");
  if (!(heat_decay > 0.0 && heat_decay < 1.0)) throw std::invalid_argument("heat_decay must be in (0, 1)");
  if (!(heat_deposit > 0.0)) throw std::invalid_argument("heat_deposit must be positive");
  if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0)) {
    throw std::invalid_argument("threshold_fraction must be in (0, 1)");
  }
  if (!(activity_floor >= 0.0)) throw std::invalid_argument("activity_floor must be >= 0");
}

GameState GameState::initial(std::vector<AgentState> agents, const EngineConfig& cfg) {
  GameState s;
  s.agents = std::move(agents);
  for (Team t : kTeams) {
    s.heat[index(t)] = Grid(cfg.grid_size);
    s.capture[index(t)] = Grid(cfg.grid_size);
  }
  return s;
}

int GameState::team_size(Team t) const {
  int n = 0;
  for (const AgentState& a : agents) n += a.team == t;
  return n;
}

void deposit_heat(HeatField& heat, std::span<const AgentState> agents, const EngineConfig& cfg) {
  for (Grid& g : heat) {
    for (double& v : g.values()) v *= cfg.heat_decay;
  }
  for (const AgentState& a : agents) {
    Grid& g = heat[index(a.team)];
    const CellIndex c = cell_of(a.position, g.size());
    g.at(c.row, c.col) += cfg.heat_deposit;
  }
}

Grid compute_capture_field(const Grid& heat) {
  if (heat.size() < 5) throw std::invalid_argument("capture field needs grid_size >= 5");
  return kernels::omp::capture_field(heat);
}

std::vector<bool> capture_mask(const Grid& capture, const EngineConfig& cfg) {
  std::vector<bool> mask(capture.count(), false);
  const double peak = capture.max();
  if (!(peak > cfg.activity_floor)) return mask;
  const double cut = cfg.threshold_fraction * peak;
  for (std::size_t i = 0; i < capture.count(); ++i) mask[i] = capture[i] > cut;
  return mask;
}

std::vector<GameEvent> resolve_captures(GameState& state, const EngineConfig& cfg) {
  std::vector<GameEvent> fresh;
  if (state.over()) return fresh;
  const std::array<std::vector<bool>, 2> masks{capture_mask(state.capture[0], cfg),
                                              capture_mask(state.capture[1], cfg)};
  const int n = state.capture[0].size();

  // Decide every flip first, then apply, so no flip influences another.
  std::vector<std::size_t> flips;
  for (std::size_t i = 0; i < state.agents.size(); ++i) {
    const AgentState& a = state.agents[i];
    const CellIndex c = cell_of(a.position, n);
    if (masks[index(opponent(a.team))][static_cast<std::size_t>(c.row * n + c.col)]) flips.push_back(i);
  }
  for (std::size_t i : flips) {
    AgentState& a = state.agents[i];
    const Team from = a.team;
    a.team = opponent(from);
    fresh.push_back({state.tick, EventKind::Capture, a.id, from, a.team});
  }
  for (Team t : kTeams) {
    if (!state.agents.empty() && state.team_size(t) == 0) {
      state.winner = opponent(t);
      fresh.push_back({state.tick, EventKind::GameOver, -1, t, opponent(t)});
      break;
    }
  }
  state.events.insert(state.events.end(), fresh.begin(), fresh.end());
  return fresh;
}

GameState engine_tick(const GameState& state, std::span<const Vec2> controls, const DynamicsConfig& dyn,
                      const EngineConfig& cfg) {
  if (state.over()) return state;
  if (controls.size() != state.agents.size()) {
    throw std::invalid_argument("engine_tick: " + std::to_string(controls.size()) + " controls for " +
                                std::to_string(state.agents.size()) + " agents");
  }
  GameState next = state;
  ++next.tick;
  for (std::size_t i = 0; i < next.agents.size(); ++i) {
    next.agents[i] = integrate_agent(state.agents[i], controls[i], dyn.dt_engine, dyn);
  }
  deposit_heat(next.heat, next.agents, cfg);
  for (Team t : kTeams) next.capture[index(t)] = compute_capture_field(next.heat[index(t)]);
  resolve_captures(next, cfg);
  return next;
}

}  // namespace swarmgame
