#include "swarmgame/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "swarmgame/kernels.hpp"

namespace swarmgame {

namespace {

constexpr double kPi = std::numbers::pi;

// cos(k pi x) and sin(k pi x) for k = 0..K-1.
struct Trig {
  double cx[32], sx[32], cy[32], sy[32];

  Trig(Vec2 s, int order) {
    for (int k = 0; k < order; ++k) {
      cx[k] = std::cos(k * kPi * s.x);
      sx[k] = std::sin(k * kPi * s.x);
      cy[k] = std::cos(k * kPi * s.y);
      sy[k] = std::sin(k * kPi * s.y);
    }
  }
};

void check_same_shape(const Coeffs& a, const Coeffs& b) {
  if (a.order != b.order || a.values.size() != b.values.size()) {
    throw std::invalid_argument("coefficient arrays differ in shape");
  }
}

}  // namespace

BasisConfig::BasisConfig(int order) : order_(order), norm_(order), weight_(order) {
  if (order < 1 || order > 32) throw std::invalid_argument("basis order must be in [1, 32]");
  for (int k1 = 0; k1 < order; ++k1) {
    for (int k2 = 0; k2 < order; ++k2) {
      // Integral of cos^2(k pi s) over [0,1] is 1 for k = 0 and 1/2 otherwise.
      const double i1 = k1 == 0 ? 1.0 : 0.5;
      const double i2 = k2 == 0 ? 1.0 : 0.5;
      norm_.at(k1, k2) = std::sqrt(i1 * i2);
      weight_.at(k1, k2) = std::pow(1.0 + k1 * k1 + k2 * k2, -1.5);
    }
  }
}

void ErgodicConfig::validate() const {
  if (!(q > 0.0)) throw std::invalid_argument("q must be positive");
  if (!(r11 > 0.0) || !(r11 * r22 - r12 * r12 > 0.0)) throw std::invalid_argument("R must be positive definite");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (horizon_steps < 1) throw std::invalid_argument("horizon_steps must be >= 1");
  if (!(barrier_gain > 0.0)) throw std::invalid_argument("barrier_gain must be positive");
  if (!(barrier_margin >= 0.0 && barrier_margin < 0.5)) throw std::invalid_argument("barrier_margin must be in [0, 0.5)");
  if (!(memory_seconds > 0.0)) throw std::invalid_argument("memory_seconds must be positive");
}

double basis_eval(BasisIndex k, Vec2 s, const BasisConfig& cfg) {
  return std::cos(k.k1 * kPi * s.x) * std::cos(k.k2 * kPi * s.y) / cfg.normalizer(k.k1, k.k2);
}

Vec2 basis_grad(BasisIndex k, Vec2 s, const BasisConfig& cfg) {
  const double inv_h = 1.0 / cfg.normalizer(k.k1, k.k2);
  const double a = k.k1 * kPi;
  const double b = k.k2 * kPi;
  return {-inv_h * a * std::sin(a * s.x) * std::cos(b * s.y),
          -inv_h * b * std::cos(a * s.x) * std::sin(b * s.y)};
}

void basis_eval_all(Vec2 s, const BasisConfig& cfg, Coeffs& out) {
  const int k = cfg.order();
  if (out.order != k) out = Coeffs(k);
  const Trig t(s, k);
  for (int k1 = 0; k1 < k; ++k1)
    for (int k2 = 0; k2 < k; ++k2) out.at(k1, k2) = t.cx[k1] * t.cy[k2] / cfg.normalizer(k1, k2);
}

Coeffs target_coeffs(const TargetDistribution& phi, const BasisConfig& cfg) {
  return kernels::serial::target_coeffs(phi.density, cfg);
}

CoverageCoefficients CoverageCoefficients::at_position(Vec2 s, const BasisConfig& cfg) {
  CoverageCoefficients cc;
  basis_eval_all(s, cfg, cc.c);
  cc.sample_count = 1;
  return cc;
}

CoverageCoefficients CoverageCoefficients::zeros(const BasisConfig& cfg) {
  CoverageCoefficients cc;
  cc.c = Coeffs(cfg.order());
  return cc;
}

double coverage_decay(const ErgodicConfig& ecfg, const DynamicsConfig& dyn) {
  return std::exp(-dyn.dt_control() / ecfg.memory_seconds);
}

CoverageCoefficients update_own_coverage(const CoverageCoefficients& cc, Vec2 s, const BasisConfig& cfg,
                                         double gamma) {
  Coeffs f;
  basis_eval_all(s, cfg, f);
  check_same_shape(cc.c, f);
  CoverageCoefficients out = cc;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    out.c.values[i] = gamma * cc.c.values[i] + (1.0 - gamma) * f.values[i];
  }
  ++out.sample_count;
  return out;
}

Coeffs team_coeffs(std::span<const CoverageCoefficients* const> members) {
  if (members.empty()) throw std::invalid_argument("team_coeffs: empty team");
  Coeffs out(members.front()->c.order);
  // Elementwise sums are taken over a sorted copy of each element's values so
  // the result does not depend on member order.
  std::vector<double> column(members.size());
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    for (std::size_t m = 0; m < members.size(); ++m) {
      check_same_shape(members[m]->c, out);
      column[m] = members[m]->c.values[i];
    }
    std::sort(column.begin(), column.end());
    double s = 0.0;
    for (double v : column) s += v;
    out.values[i] = s / static_cast<double>(members.size());
  }
  return out;
}

Coeffs team_coeffs(std::span<const CoverageCoefficients> members) {
  std::vector<const CoverageCoefficients*> ptrs;
  ptrs.reserve(members.size());
  for (const auto& m : members) ptrs.push_back(&m);
  return team_coeffs(std::span<const CoverageCoefficients* const>(ptrs));
}

double ergodic_metric(const Coeffs& c, const Coeffs& phi, const BasisConfig& cfg, double q) {
  check_same_shape(c, phi);
  double e = 0.0;
  for (int k1 = 0; k1 < c.order; ++k1) {
    for (int k2 = 0; k2 < c.order; ++k2) {
      const double d = c.at(k1, k2) - phi.at(k1, k2);
      e += cfg.weight(k1, k2) * d * d;
    }
  }
  return q * e;
}

double barrier(Vec2 s, const ErgodicConfig& cfg) {
  const double a = cfg.barrier_gain;
  const double hi = 1.0 - cfg.barrier_margin;
  const double lo = cfg.barrier_margin;
  return std::exp(a * (s.x - hi)) + std::exp(a * (lo - s.x)) + std::exp(a * (s.y - hi)) +
         std::exp(a * (lo - s.y));
}

Vec2 barrier_grad(Vec2 s, const ErgodicConfig& cfg) {
  const double a = cfg.barrier_gain;
  const double hi = 1.0 - cfg.barrier_margin;
  const double lo = cfg.barrier_margin;
  return {a * (std::exp(a * (s.x - hi)) - std::exp(a * (lo - s.x))),
          a * (std::exp(a * (s.y - hi)) - std::exp(a * (lo - s.y)))};
}

Vec2 running_cost_grad(Vec2 s, const Coeffs& team_c, const Coeffs& phi, const BasisConfig& bcfg,
                       const ErgodicConfig& ecfg, double injection_weight) {
  check_same_shape(team_c, phi);
  const int k = bcfg.order();
  const Trig t(s, k);
  Vec2 g;
  for (int k1 = 0; k1 < k; ++k1) {
    for (int k2 = 0; k2 < k; ++k2) {
      const double coef = bcfg.weight(k1, k2) * 2.0 * (team_c.at(k1, k2) - phi.at(k1, k2)) /
                          bcfg.normalizer(k1, k2);
      g.x += coef * (-k1 * kPi * t.sx[k1] * t.cy[k2]);
      g.y += coef * (-k2 * kPi * t.cx[k1] * t.sy[k2]);
    }
  }
  return g * (ecfg.q * injection_weight) + barrier_grad(s, ecfg);
}

double running_cost(Vec2 s, const Coeffs& team_c, const Coeffs& phi, const BasisConfig& bcfg,
                    const ErgodicConfig& ecfg, double injection_weight) {
  check_same_shape(team_c, phi);
  const int k = bcfg.order();
  const Trig t(s, k);
  double l = 0.0;
  for (int k1 = 0; k1 < k; ++k1) {
    for (int k2 = 0; k2 < k; ++k2) {
      l += bcfg.weight(k1, k2) * 2.0 * (team_c.at(k1, k2) - phi.at(k1, k2)) * t.cx[k1] * t.cy[k2] /
           bcfg.normalizer(k1, k2);
    }
  }
  return ecfg.q * injection_weight * l + barrier(s, ecfg);
}

Vec2 compute_control(const AgentState& agent, const Coeffs& team_c, const Coeffs& phi, const BasisConfig& bcfg,
                     const ErgodicConfig& ecfg, const DynamicsConfig& dyn) {
  const int n = ecfg.horizon_steps;
  const double h = ecfg.horizon / n;
  const double w = 1.0 - coverage_decay(ecfg, dyn);

  // Coasting rollout: velocity stays fixed under the zero default control.
  std::vector<Vec2> path(static_cast<std::size_t>(n) + 1);
  path[0] = agent.position;
  for (int j = 0; j < n; ++j) path[static_cast<std::size_t>(j) + 1] = path[static_cast<std::size_t>(j)] + agent.velocity * h;

  // Backward explicit Euler on the costate (rho_p, rho_v) from zero at the
  // horizon end. The double-integrator Jacobian couples rho_v to rho_p.
  Vec2 rho_p, rho_v;
  for (int j = n - 1; j >= 0; --j) {
    const Vec2 lp = running_cost_grad(path[static_cast<std::size_t>(j) + 1], team_c, phi, bcfg, ecfg, w);
    const Vec2 next_v = rho_v + rho_p * h;
    rho_p += lp * h;
    rho_v = next_v;
  }

  // u = -R^-1 B^T rho; B selects the velocity block.
  const double det = ecfg.r11 * ecfg.r22 - ecfg.r12 * ecfg.r12;
  const Vec2 u{-(ecfg.r22 * rho_v.x - ecfg.r12 * rho_v.y) / det,
               -(-ecfg.r12 * rho_v.x + ecfg.r11 * rho_v.y) / det};
  if (!u.finite()) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "compute_control: non-finite control for agent " << agent.id << " at (" << agent.position.x << ", "
        << agent.position.y << ") v=(" << agent.velocity.x << ", " << agent.velocity.y << ") rho_p=("
        << rho_p.x << ", " << rho_p.y << ") rho_v=(" << rho_v.x << ", " << rho_v.y << ")";
    throw ControlError(msg.str());
  }
  return clamp_norm(u, dyn.u_max);
}

double horizon_objective(const AgentState& agent, Vec2 u, double apply_seconds, const Coeffs& team_c,
                         const Coeffs& phi, const BasisConfig& bcfg, const ErgodicConfig& ecfg,
                         const DynamicsConfig& dyn) {
  const int n = ecfg.horizon_steps;
  const double h = ecfg.horizon / n;
  const double w = 1.0 - coverage_decay(ecfg, dyn);
  const int apply_steps = static_cast<int>(std::lround(apply_seconds / h));
  Vec2 p = agent.position;
  Vec2 v = agent.velocity;
  double j_cost = 0.0;
  for (int j = 0; j < n; ++j) {
    const Vec2 uj = j < apply_steps ? u : Vec2{};
    v = clamp_norm(v + uj * h, dyn.v_max);
    p += v * h;
    j_cost += h * running_cost(p, team_c, phi, bcfg, ecfg, w);
    j_cost += h * 0.5 * (ecfg.r11 * uj.x * uj.x + 2.0 * ecfg.r12 * uj.x * uj.y + ecfg.r22 * uj.y * uj.y);
  }
  return j_cost;
}

}  // namespace swarmgame
