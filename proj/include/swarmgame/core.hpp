#pragma once

// Shared domain types for the swarm game: 2-D vectors, agent state,
// double-integrator stepping and the deterministic RNG.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace swarmgame {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(x, y); }
  constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

/// Rescales v so that |v| <= limit; leaves shorter vectors untouched.
inline Vec2 clamp_norm(Vec2 v, double limit) {
  const double n = v.norm();
  if (n > limit && n > 0.0) return v * (limit / n);
  return v;
}

enum class Team : std::uint8_t { Red = 0, Blue = 1 };

inline constexpr Team opponent(Team t) { return t == Team::Red ? Team::Blue : Team::Red; }
inline constexpr std::size_t index(Team t) { return static_cast<std::size_t>(t); }
inline constexpr std::array<Team, 2> kTeams{Team::Red, Team::Blue};

std::string_view to_string(Team t);
Team team_from_string(std::string_view s);  // throws std::invalid_argument

struct AgentState {
  int id = 0;
  Team team = Team::Red;
  Vec2 position;
  Vec2 velocity;
  double altitude = 0.0;  // cosmetic

  bool operator==(const AgentState&) const = default;
};

struct DynamicsConfig {
  double dt_engine = 1.0 / 30.0;
  int control_every = 3;  // dt_control = control_every * dt_engine
  double v_max = 0.2;
  double u_max = 1.0;

  double dt_control() const { return control_every * dt_engine; }
  void validate() const;
};

/// Deterministic 64-bit generator (SplitMix64). Output depends only on the
/// seed and the number of draws, on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::uint64_t seed_state() const { return state_; }

 private:
  std::uint64_t state_;
};

class ControlError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Semi-implicit Euler step of a double integrator with velocity and box clamps.
/// Throws ControlError on a non-finite control.
AgentState integrate_agent(const AgentState& a, Vec2 u, double dt, const DynamicsConfig& dyn);

/// Corner spawns: red round-robin over (0,0),(1,0); blue over (0,1),(1,1).
/// Each agent is jittered inside a 0.1x0.1 box in its corner.
std::vector<AgentState> spawn_agents(int n_per_team, Rng& rng);

inline constexpr double kCornerBox = 0.1;

}  // namespace swarmgame
