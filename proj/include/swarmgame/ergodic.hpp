#pragma once

// Decentralized receding-horizon ergodic control.
//
// Every agent keeps a running cosine-basis transform of its own trajectory.
// The team's coverage is the plain mean of its members' transforms, and each
// agent steers to shrink the weighted distance between that mean and the
// transform of the team's target density. The control is the first value of
// a costate integrated backwards along a coasting rollout.

#include <span>
#include <vector>

#include "swarmgame/core.hpp"
#include "swarmgame/painter.hpp"

namespace swarmgame {

/// K x K array of cosine-basis coefficients, indexed (k1, k2) row-major.
struct Coeffs {
  int order = 0;
  std::vector<double> values;

  Coeffs() = default;
  explicit Coeffs(int k, double fill = 0.0)
      : order(k), values(static_cast<std::size_t>(k) * static_cast<std::size_t>(k), fill) {}

  double& at(int k1, int k2) { return values[static_cast<std::size_t>(k1 * order + k2)]; }
  double at(int k1, int k2) const { return values[static_cast<std::size_t>(k1 * order + k2)]; }

  bool operator==(const Coeffs&) const = default;
};

struct BasisIndex {
  int k1 = 0;
  int k2 = 0;
};

class BasisConfig {
 public:
  explicit BasisConfig(int order = 8);

  int order() const { return order_; }
  /// L2 norm of the unnormalized mode over the unit square.
  double normalizer(int k1, int k2) const { return norm_.at(k1, k2); }
  /// (1 + |k|^2)^(-3/2) for the planar case.
  double weight(int k1, int k2) const { return weight_.at(k1, k2); }
  const Coeffs& normalizers() const { return norm_; }
  const Coeffs& weights() const { return weight_; }

 private:
  int order_;
  Coeffs norm_;
  Coeffs weight_;
};

struct ErgodicConfig {
  double q = 1.0;
  // Control weight R = [[r11, r12], [r12, r22]].
  double r11 = 0.01;
  double r12 = 0.0;
  double r22 = 0.01;
  double horizon = 0.5;  // seconds
  int horizon_steps = 10;
  double barrier_gain = 100.0;
  double barrier_margin = 0.02;
  double memory_seconds = 10.0;

  void validate() const;
};

double basis_eval(BasisIndex k, Vec2 s, const BasisConfig& cfg);
Vec2 basis_grad(BasisIndex k, Vec2 s, const BasisConfig& cfg);

/// All K x K basis values at s.
void basis_eval_all(Vec2 s, const BasisConfig& cfg, Coeffs& out);

/// Midpoint-quadrature transform of a density grid (serial path).
Coeffs target_coeffs(const TargetDistribution& phi, const BasisConfig& cfg);

struct CoverageCoefficients {
  Coeffs c;
  long sample_count = 0;

  /// Seeded with a single sample at s, as if the agent had always been there.
  static CoverageCoefficients at_position(Vec2 s, const BasisConfig& cfg);
  static CoverageCoefficients zeros(const BasisConfig& cfg);
};

/// Forgetting factor per control step: exp(-dt_control / memory_seconds).
double coverage_decay(const ErgodicConfig& ecfg, const DynamicsConfig& dyn);

/// c <- gamma * c + (1 - gamma) * F(s).
CoverageCoefficients update_own_coverage(const CoverageCoefficients& cc, Vec2 s,
                                         const BasisConfig& cfg, double gamma);

/// Mean of member coefficient arrays, summed in index order. Throws on empty.
Coeffs team_coeffs(std::span<const CoverageCoefficients> members);
Coeffs team_coeffs(std::span<const CoverageCoefficients* const> members);

double ergodic_metric(const Coeffs& c, const Coeffs& phi, const BasisConfig& cfg, double q);

double barrier(Vec2 s, const ErgodicConfig& cfg);
Vec2 barrier_grad(Vec2 s, const ErgodicConfig& cfg);

/// Spatial gradient of the running cost that drives the costate:
/// q * sum_k weight_k * 2 (c_k - phi_k) * w * grad F_k(s) + grad barrier(s).
Vec2 running_cost_grad(Vec2 s, const Coeffs& team_c, const Coeffs& phi, const BasisConfig& bcfg,
                       const ErgodicConfig& ecfg, double injection_weight);

/// The scalar running cost whose gradient is running_cost_grad.
double running_cost(Vec2 s, const Coeffs& team_c, const Coeffs& phi, const BasisConfig& bcfg,
                    const ErgodicConfig& ecfg, double injection_weight);

/// Optimal control for one agent. Throws ControlError on non-finite values.
Vec2 compute_control(const AgentState& agent, const Coeffs& team_c, const Coeffs& phi,
                     const BasisConfig& bcfg, const ErgodicConfig& ecfg, const DynamicsConfig& dyn);

/// Horizon objective for applying u for `apply_seconds` and coasting after:
/// sum of h * running_cost along the rollout plus the control effort term.
/// The rollout uses the simulator's velocity clamp.
double horizon_objective(const AgentState& agent, Vec2 u, double apply_seconds, const Coeffs& team_c,
                         const Coeffs& phi, const BasisConfig& bcfg, const ErgodicConfig& ecfg,
                         const DynamicsConfig& dyn);

}  // namespace swarmgame
