#pragma once

// Reynolds-style flocking with weighted point attractors: the baseline
// controller the ergodic stack is compared against.

#include <span>
#include <vector>

#include "swarmgame/core.hpp"

namespace swarmgame {

struct Attractor {
  Vec2 position;
  double weight = 1.0;

  bool operator==(const Attractor&) const = default;
};

struct FlockCommand {
  std::vector<Attractor> attractors;
  double separation_radius = 0.03;
  double cohesion_radius = 0.15;
  double w_sep = 0.1;
  double w_coh = 0.3;
  double w_align = 0.5;

  void validate() const;  // throws std::invalid_argument
  bool operator==(const FlockCommand&) const = default;
};

/// Control for `agent` given its teammates (agent itself excluded).
Vec2 flock_control(const AgentState& agent, std::span<const AgentState> teammates, const FlockCommand& cmd,
                   const DynamicsConfig& dyn);

}  // namespace swarmgame
