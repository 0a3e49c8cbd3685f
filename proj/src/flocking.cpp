#include "swarmgame/flocking.hpp"

#include <algorithm>
#include <stdexcept>

namespace swarmgame {

namespace {

// Order-independent sum: sort the terms by (x, y) before accumulating.
Vec2 ordered_sum(std::vector<Vec2>& terms) {
  std::sort(terms.begin(), terms.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  Vec2 s;
  for (Vec2 t : terms) s += t;
  return s;
}

}  // namespace

void FlockCommand::validate() const {
  if (!(separation_radius > 0.0) || !(cohesion_radius > 0.0)) throw std::invalid_argument("flock radii must be positive");
  if (!(w_sep >= 0.0) || !(w_coh >= 0.0) || !(w_align >= 0.0)) throw std::invalid_argument("flock gains must be >= 0");
  for (const Attractor& a : attractors) {
    if (!(a.weight >= 0.0)) throw std::invalid_argument("attractor weight must be >= 0");
    if (!a.position.finite()) throw std::invalid_argument("attractor position must be finite");
  }
}

Vec2 flock_control(const AgentState& agent, std::span<const AgentState> teammates, const FlockCommand& cmd,
                   const DynamicsConfig& dyn) {
  const Vec2 p = agent.position;
  std::vector<Vec2> away, near_pos, vels;
  for (const AgentState& o : teammates) {
    const Vec2 d = p - o.position;
    const double dist = d.norm();
    if (dist < cmd.separation_radius && dist > 0.0) away.push_back(d / dist);
    if (dist < cmd.cohesion_radius) {
      near_pos.push_back(o.position);
      vels.push_back(o.velocity);
    }
  }

  Vec2 u;
  if (!away.empty()) u += ordered_sum(away) * cmd.w_sep;
  if (!near_pos.empty()) {
    const double n = static_cast<double>(near_pos.size());
    u += (ordered_sum(near_pos) / n - p) * cmd.w_coh;
    u += (ordered_sum(vels) / n - agent.velocity) * cmd.w_align;
  }
  for (const Attractor& a : cmd.attractors) u += (a.position - p) * a.weight;
  return clamp_norm(u, dyn.u_max);
}

}  // namespace swarmgame
