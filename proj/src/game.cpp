#include "swarmgame/game.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "swarmgame/kernels.hpp"

namespace swarmgame {

std::string_view to_string(ControllerKind k) { return k == ControllerKind::Ergodic ? "ergodic" : "flocking"; }

ControllerKind controller_from_string(std::string_view s) {
  if (s == "ergodic") return ControllerKind::Ergodic;
  if (s == "flocking") return ControllerKind::Flocking;
  throw std::invalid_argument("unknown controller '" + std::string(s) + "'");
}

void GameConfig::validate() const {
  if (agents_per_team < 1) throw std::invalid_argument("agents_per_team must be >= 1");
  dynamics.validate();
  engine.validate();
  ergodic.validate();
  flock_defaults.validate();
  if (basis_order < 1 || basis_order > 32) throw std::invalid_argument("basis_order must be in [1, 32]");
  if (painter.grid_size < 1) throw std::invalid_argument("painter grid_size must be >= 1");
  if (!(painter.sigma_cells > 0.0)) throw std::invalid_argument("painter sigma must be positive");
  if (!(painter.floor > 0.0)) throw std::invalid_argument("painter floor must be positive");
}

Game::Game(const GameConfig& cfg)
    : cfg_(cfg), basis_(cfg.basis_order), coverage_gamma_(coverage_decay(cfg.ergodic, cfg.dynamics)) {
  cfg_.validate();
  Rng rng(cfg_.seed);
  state_ = GameState::initial(spawn_agents(cfg_.agents_per_team, rng), cfg_.engine);
  coverage_.reserve(state_.agents.size());
  for (const AgentState& a : state_.agents) coverage_.push_back(CoverageCoefficients::at_position(a.position, basis_));
  held_.assign(state_.agents.size(), Vec2{});
  for (auto& c : commands_) c.raw = Grid(cfg_.painter.grid_size);
}

void Game::submit(Team team, const Command& cmd) {
  TeamCommandState& tc = commands_[index(team)];
  if (const auto* sc = std::get_if<StrokeCommand>(&cmd)) {
    Grid raw = rasterize(sc->strokes, sc->replace ? nullptr : &tc.raw, cfg_.painter.grid_size);
    TargetDistribution target = smooth_and_normalize(raw, cfg_.painter, tc.generation + 1);
    tc.target_coeffs = kernels::omp::target_coeffs(target.density, basis_);
    tc.raw = std::move(raw);
    tc.target = std::move(target);
    ++tc.generation;
  } else if (const auto* fc = std::get_if<FlockCommand>(&cmd)) {
    fc->validate();
    tc.flock = *fc;
    ++tc.generation;
  } else {
    tc.raw = Grid(cfg_.painter.grid_size);
  }
}

std::optional<Coeffs> Game::team_coverage(Team t) const {
  std::vector<const CoverageCoefficients*> members;
  for (std::size_t i = 0; i < state_.agents.size(); ++i) {
    if (state_.agents[i].team == t) members.push_back(&coverage_[i]);
  }
  if (members.empty()) return std::nullopt;
  return team_coeffs(std::span<const CoverageCoefficients* const>(members));
}

void Game::refresh_controls() {
  const auto& agents = state_.agents;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    coverage_[i] = update_own_coverage(coverage_[i], agents[i].position, basis_, coverage_gamma_);
  }

  std::array<std::optional<Coeffs>, 2> team_c{team_coverage(Team::Red), team_coverage(Team::Blue)};
  std::vector<const Coeffs*> tc_ptr(agents.size(), nullptr), phi_ptr(agents.size(), nullptr);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto t = index(agents[i].team);
    const TeamCommandState& cmd = commands_[t];
    if (cfg_.controllers[t] != ControllerKind::Ergodic || !cmd.target || !team_c[t]) continue;
    tc_ptr[i] = &*team_c[t];
    phi_ptr[i] = &cmd.target_coeffs;
  }
  kernels::omp::controls(agents, tc_ptr, phi_ptr, basis_, cfg_.ergodic, cfg_.dynamics, held_);

  std::vector<AgentState> mates;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto t = index(agents[i].team);
    if (cfg_.controllers[t] != ControllerKind::Flocking) continue;
    const auto& flock = commands_[t].flock;
    if (!flock) {
      held_[i] = {};
      continue;
    }
    mates.clear();
    for (std::size_t j = 0; j < agents.size(); ++j) {
      if (j != i && agents[j].team == agents[i].team) mates.push_back(agents[j]);
    }
    held_[i] = flock_control(agents[i], mates, *flock, cfg_.dynamics);
  }
}

std::vector<GameEvent> Game::step() {
  if (state_.over()) return {};
  if (state_.tick % cfg_.dynamics.control_every == 0) refresh_controls();
  const std::size_t before = state_.events.size();
  state_ = engine_tick(state_, held_, cfg_.dynamics, cfg_.engine);
  return {state_.events.begin() + static_cast<long>(before), state_.events.end()};
}

namespace {

struct Fnv1a {
  std::uint64_t h = 0xcbf29ce484222325ULL;

  void bytes(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  void real(double d) { bytes(std::bit_cast<std::uint64_t>(d)); }
  void integer(long long v) { bytes(static_cast<std::uint64_t>(v)); }
};

}  // namespace

std::uint64_t Game::state_hash() const {
  Fnv1a f;
  f.integer(state_.tick);
  f.integer(state_.winner ? static_cast<long long>(index(*state_.winner)) : -1);
  for (const AgentState& a : state_.agents) {
    f.integer(a.id);
    f.integer(static_cast<long long>(index(a.team)));
    f.real(a.position.x);
    f.real(a.position.y);
    f.real(a.velocity.x);
    f.real(a.velocity.y);
  }
  for (const Grid& g : state_.heat)
    for (double v : g.values()) f.real(v);
  for (const CoverageCoefficients& cc : coverage_)
    for (double v : cc.c.values) f.real(v);
  for (Vec2 u : held_) {
    f.real(u.x);
    f.real(u.y);
  }
  for (const TeamCommandState& tc : commands_) {
    f.integer(static_cast<long long>(tc.generation));
    for (double v : tc.raw.values()) f.real(v);
  }
  f.integer(static_cast<long long>(state_.events.size()));
  return f.h;
}

}  // namespace swarmgame
