#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "swarmgame/engine.hpp"

using namespace swarmgame;

namespace {

// Oracle: the 16 ring offsets listed by hand, bounds checked one by one.
const int kRing[16][2] = {{-2, -2}, {-2, -1}, {-2, 0}, {-2, 1}, {-2, 2}, {-1, 2}, {0, 2}, {1, 2},
                          {2, 2},   {2, 1},   {2, 0},  {2, -1}, {2, -2}, {1, -2}, {0, -2}, {-1, -2}};

Grid ring_oracle(const Grid& h) {
  const int n = h.size();
  Grid out(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      double s = 0;
      int k = 0;
      for (const auto& o : kRing) {
        const int rr = r + o[0], cc = c + o[1];
        if (rr >= 0 && rr < n && cc >= 0 && cc < n) {
          s += h.at(rr, cc);
          ++k;
        }
      }
      out.at(r, c) = s / k;
    }
  return out;
}

int ring_count(int r, int c, int n) {
  int k = 0;
  for (const auto& o : kRing) k += r + o[0] >= 0 && r + o[0] < n && c + o[1] >= 0 && c + o[1] < n;
  return k;
}

AgentState agent(int id, Team t, Vec2 p, Vec2 v = {}) {
  AgentState a;
  a.id = id;
  a.team = t;
  a.position = p;
  a.velocity = v;
  return a;
}

int chebyshev(int r0, int c0, int r1, int c1) { return std::max(std::abs(r0 - r1), std::abs(c0 - c1)); }

}  // namespace

TEST_CASE("capture field equals the perimeter oracle on random grids") {
  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    Grid h(50);
    for (double& v : h.values()) v = rng.uniform() < 0.5 ? rng.uniform(0, 50) : 0.0;
    const Grid got = compute_capture_field(h);
    const Grid want = ring_oracle(h);
    for (std::size_t i = 0; i < got.count(); ++i) REQUIRE(std::abs(got[i] - want[i]) <= 1e-12 * std::max(1.0, want[i]));
  }
}

TEST_CASE("a single heat spike shows up on its Chebyshev-2 ring") {
  Grid h(50);
  h.at(25, 25) = 32.0;
  const Grid f = compute_capture_field(h);
  for (int r = 0; r < 50; ++r)
    for (int c = 0; c < 50; ++c) CHECK(f.at(r, c) == (chebyshev(r, c, 25, 25) == 2 ? 2.0 : 0.0));
}

TEST_CASE("boundary cells average over fewer ring cells") {
  // Counted by hand: at a corner only offsets with both components >= 0
  // survive, i.e. (0,2) (1,2) (2,2) (2,1) (2,0).
  CHECK(ring_count(0, 0, 50) == 5);
  CHECK(ring_count(0, 25, 50) == 9);
  CHECK(ring_count(1, 1, 50) == 7);
  CHECK(ring_count(25, 25, 50) == 16);
  Grid h(50, 1.0);
  h.at(2, 2) = 11.0;
  const Grid f = compute_capture_field(h);
  CHECK(f.at(0, 0) == doctest::Approx((4 * 1.0 + 11.0) / 5));
  CHECK(f.at(25, 25) == doctest::Approx(1.0));
  CHECK_THROWS(compute_capture_field(Grid(4)));
}

TEST_CASE("stationary agent heat follows the geometric series") {
  EngineConfig cfg;
  HeatField heat{Grid(50), Grid(50)};
  const std::vector<AgentState> a{agent(0, Team::Red, {0.5, 0.5})};
  for (int i = 0; i < 100; ++i) deposit_heat(heat, a, cfg);
  CHECK(heat[0].at(25, 25) == doctest::Approx((1 - std::pow(0.995, 100)) / 0.005).epsilon(1e-12));
  CHECK(heat[0].at(25, 25) == doctest::Approx(78.846).epsilon(1e-5));
  CHECK(heat[1].max() == 0.0);
  // an empty team only decays
  for (int i = 0; i < 10; ++i) deposit_heat(heat, {}, cfg);
  CHECK(heat[0].at(25, 25) == doctest::Approx((1 - std::pow(0.995, 100)) / 0.005 * std::pow(0.995, 10)));
}

TEST_CASE("capture mask needs activity and is scale invariant above the floor") {
  EngineConfig cfg;
  Grid f(50);
  f.at(3, 3) = 0.9;
  CHECK(std::none_of(capture_mask(f, cfg).begin(), capture_mask(f, cfg).end(), [](bool b) { return b; }));
  Rng rng(2);
  for (double& v : f.values()) v = rng.uniform(0, 10);
  const auto m = capture_mask(f, cfg);
  Grid g = f;
  for (double& v : g.values()) v *= 3.7;
  CHECK(capture_mask(g, cfg) == m);
}

TEST_CASE("lone stationary agent: mask is its ring and an opponent on the ring is taken within a tick") {
  EngineConfig cfg;
  DynamicsConfig dyn;
  GameState s = GameState::initial({agent(0, Team::Red, {0.51, 0.51}), agent(1, Team::Blue, {0.9, 0.1})}, cfg);
  const std::vector<Vec2> zero(2);
  for (int i = 0; i < 60; ++i) s = engine_tick(s, zero, dyn, cfg);
  REQUIRE(s.events.empty());
  const auto mask = capture_mask(s.capture[0], cfg);
  for (int r = 0; r < 50; ++r)
    for (int c = 0; c < 50; ++c) REQUIRE(mask[static_cast<std::size_t>(r * 50 + c)] == (chebyshev(r, c, 25, 25) == 2));

  // blue sits just outside the ring at column 28 and walks left into column 27
  s.agents[1].position = {0.5601, 0.51};
  s.agents[1].velocity = {-0.2, 0.0};
  s = engine_tick(s, zero, dyn, cfg);
  REQUIRE(cell_of(s.agents[1].position, 50).col == 27);
  REQUIRE(s.events.size() == 2);
  CHECK(s.events[0] == GameEvent{61, EventKind::Capture, 1, Team::Blue, Team::Red});
  CHECK(s.events[1].kind == EventKind::GameOver);
  CHECK(s.winner == Team::Red);
}

TEST_CASE("mutual capture flips both, conserves totals, no winner") {
  EngineConfig cfg;
  GameState s = GameState::initial({agent(0, Team::Red, {0.31, 0.31}), agent(1, Team::Blue, {0.71, 0.71}),
                                    agent(2, Team::Red, {0.1, 0.9}), agent(3, Team::Blue, {0.9, 0.1})},
                                   cfg);
  s.heat[0].at(35, 35) = 40;  // red ring covers cell (35+2, 35)
  s.heat[1].at(15, 13) = 40;  // blue ring covers cell (15, 15)
  for (Team t : kTeams) s.capture[index(t)] = compute_capture_field(s.heat[index(t)]);
  s.agents[0].position = {0.31, 0.31};  // cell (15,15)
  s.agents[1].position = {0.71, 0.75};  // cell (37,35)
  const auto ev = resolve_captures(s, cfg);
  REQUIRE(ev.size() == 2);
  CHECK(s.agents[0].team == Team::Blue);
  CHECK(s.agents[1].team == Team::Red);
  CHECK(s.team_size(Team::Red) == 2);
  CHECK(s.team_size(Team::Blue) == 2);
  CHECK_FALSE(s.winner.has_value());
}

TEST_CASE("capture resolution does not depend on agent order") {
  EngineConfig cfg;
  Rng rng(3);
  for (int t = 0; t < 30; ++t) {
    std::vector<AgentState> agents;
    for (int i = 0; i < 16; ++i) agents.push_back(agent(i, i % 2 ? Team::Blue : Team::Red, {rng.uniform(), rng.uniform()}));
    GameState a = GameState::initial(agents, cfg);
    for (Team tm : kTeams) {
      for (double& v : a.heat[index(tm)].values()) v = rng.uniform() < 0.05 ? rng.uniform(0, 30) : 0;
      a.capture[index(tm)] = compute_capture_field(a.heat[index(tm)]);
    }
    GameState b = a;
    std::reverse(b.agents.begin(), b.agents.end());
    resolve_captures(a, cfg);
    resolve_captures(b, cfg);
    auto by_id = [](std::vector<AgentState> v) {
      std::sort(v.begin(), v.end(), [](auto& x, auto& y) { return x.id < y.id; });
      return v;
    };
    REQUIRE(by_id(a.agents) == by_id(b.agents));
    REQUIRE(a.winner == b.winner);
  }
}

TEST_CASE("engine tick basics") {
  EngineConfig cfg;
  DynamicsConfig dyn;
  GameState s = GameState::initial({agent(0, Team::Red, {0.3, 0.3}), agent(1, Team::Blue, {0.7, 0.7})}, cfg);
  const std::vector<Vec2> zero(2);
  const GameState n = engine_tick(s, zero, dyn, cfg);
  CHECK(n.tick == 1);
  CHECK(n.agents[0].position == s.agents[0].position);
  CHECK(n.heat[0].at(15, 15) == 1.0);
  CHECK(n.heat[1].at(35, 35) == 1.0);
  CHECK_THROWS(engine_tick(s, std::vector<Vec2>(1), dyn, cfg));

  GameState over = n;
  over.winner = Team::Red;
  const GameState after = engine_tick(over, zero, dyn, cfg);
  CHECK(after.tick == over.tick);
  CHECK(after.agents == over.agents);
  CHECK(after.heat[0] == over.heat[0]);
}

TEST_CASE("old heat stays with the old team after a capture") {
  EngineConfig cfg;
  DynamicsConfig dyn;
  GameState s = GameState::initial({agent(0, Team::Red, {0.51, 0.51}), agent(1, Team::Blue, {0.9, 0.1}),
                                    agent(2, Team::Blue, {0.1, 0.9})},
                                   cfg);
  const std::vector<Vec2> zero(3);
  for (int i = 0; i < 40; ++i) s = engine_tick(s, zero, dyn, cfg);
  const double blue_before = s.heat[1].at(5, 45);  // agent 1's cell
  s.agents[1].position = {0.5601, 0.51};
  s.agents[1].velocity = {-0.2, 0.0};
  s = engine_tick(s, zero, dyn, cfg);
  REQUIRE(s.agents[1].team == Team::Red);
  CHECK(s.heat[1].at(5, 45) == doctest::Approx(blue_before * cfg.heat_decay));
  const CellIndex c = cell_of(s.agents[1].position, 50);
  const double red_here = s.heat[0].at(c.row, c.col);
  s = engine_tick(s, zero, dyn, cfg);
  CHECK(s.heat[0].at(c.row, c.col) == doctest::Approx(red_here * cfg.heat_decay + 1.0));
}

TEST_CASE("random games conserve agents and stop at game over") {
  EngineConfig cfg;
  DynamicsConfig dyn;
  Rng rng(4);
  for (int game = 0; game < 5; ++game) {
    Rng spawn(static_cast<std::uint64_t>(game));
    GameState s = GameState::initial(spawn_agents(4, spawn), cfg);
    std::vector<Vec2> u(s.agents.size());
    for (int t = 0; t < 1500; ++t) {
      for (auto& x : u) x = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
      const bool was_over = s.over();
      const GameState n = engine_tick(s, u, dyn, cfg);
      REQUIRE(n.team_size(Team::Red) + n.team_size(Team::Blue) == 8);
      REQUIRE(n.over() == (n.team_size(Team::Red) == 0 || n.team_size(Team::Blue) == 0));
      if (was_over) REQUIRE(n.tick == s.tick);
      s = n;
    }
  }
}
