#include "swarmgame/core.hpp"

#include <algorithm>
#include <numeric>

namespace swarmgame {

std::string_view to_string(Team t) { return t == Team::Red ? "red" : "blue"; }

Team team_from_string(std::string_view s) {
  if (s == "red") return Team::Red;
  if (s == "blue") return Team::Blue;
  throw std::invalid_argument("unknown team '" + std::string(s) + "'");
}

void DynamicsConfig::validate() const {
  if (!(dt_engine > 0.0)) throw std::invalid_argument("dt_engine must be positive");
  if (control_every < 1) throw std::invalid_argument("control_every must be >= 1");
  if (!(v_max > 0.0)) throw std::invalid_argument("v_max must be positive");
  if (!(u_max > 0.0)) throw std::invalid_argument("u_max must be positive");
}

std::uint64_t Rng::next_u64() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) return 0;
  // Lemire-style rejection keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r;
  do {
    r = next_u64();
  } while (r >= limit);
  return r % n;
}

AgentState integrate_agent(const AgentState& a, Vec2 u, double dt, const DynamicsConfig& dyn) {
  if (!u.finite()) {
    throw ControlError("non-finite control for agent " + std::to_string(a.id));
  }
  AgentState out = a;
  out.velocity = clamp_norm(a.velocity + u * dt, dyn.v_max);
  Vec2 p = a.position + out.velocity * dt;
  if (p.x < 0.0 || p.x > 1.0) {
    p.x = std::clamp(p.x, 0.0, 1.0);
    out.velocity.x = 0.0;
  }
  if (p.y < 0.0 || p.y > 1.0) {
    p.y = std::clamp(p.y, 0.0, 1.0);
    out.velocity.y = 0.0;
  }
  out.position = p;
  return out;
}

std::vector<AgentState> spawn_agents(int n_per_team, Rng& rng) {
  if (n_per_team < 1) throw std::invalid_argument("n_per_team must be >= 1");
  const int total = 2 * n_per_team;

  // Distinct altitude levels, shuffled (Fisher-Yates) so assignment is random.
  std::vector<int> levels(static_cast<std::size_t>(total));
  std::iota(levels.begin(), levels.end(), 0);
  for (int i = total - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i + 1)));
    std::swap(levels[static_cast<std::size_t>(i)], levels[static_cast<std::size_t>(j)]);
  }

  static constexpr Vec2 kRedCorners[2] = {{0.0, 0.0}, {1.0, 0.0}};
  static constexpr Vec2 kBlueCorners[2] = {{0.0, 1.0}, {1.0, 1.0}};

  std::vector<AgentState> agents;
  agents.reserve(static_cast<std::size_t>(total));
  for (int id = 0; id < total; ++id) {
    const Team team = id < n_per_team ? Team::Red : Team::Blue;
    const int slot = id % n_per_team;
    // n=1 puts the lone blue agent in the (1,1) corner, opposite red.
    const Vec2 corner = team == Team::Red ? kRedCorners[slot % 2]
                                          : kBlueCorners[(slot + 1) % 2];
    const double jx = rng.uniform(0.0, kCornerBox);
    const double jy = rng.uniform(0.0, kCornerBox);
    AgentState a;
    a.id = id;
    a.team = team;
    a.position = {corner.x == 0.0 ? jx : 1.0 - jx, corner.y == 0.0 ? jy : 1.0 - jy};
    a.altitude = 1.0 + 0.05 * levels[static_cast<std::size_t>(id)];
    agents.push_back(a);
  }
  return agents;
}

}  // namespace swarmgame
