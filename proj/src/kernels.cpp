#include "swarmgame/kernels.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>

#include "swarmgame/painter.hpp"

namespace swarmgame::kernels {

namespace {

// Per-element bodies shared by both paths.

inline double blur_row_at(const Grid& in, std::span<const double> taps, int r, int c) {
  const int n = in.size();
  const int radius = static_cast<int>(taps.size()) - 1;
  double acc = taps[0] * in.at(r, c);
  for (int t = 1; t <= radius; ++t) {
    acc += taps[static_cast<std::size_t>(t)] *
           (in.at(r, reflect_index(c - t, n)) + in.at(r, reflect_index(c + t, n)));
  }
  return acc;
}

inline double blur_col_at(const Grid& in, std::span<const double> taps, int r, int c) {
  const int n = in.size();
  const int radius = static_cast<int>(taps.size()) - 1;
  double acc = taps[0] * in.at(r, c);
  for (int t = 1; t <= radius; ++t) {
    acc += taps[static_cast<std::size_t>(t)] *
           (in.at(reflect_index(r - t, n), c) + in.at(reflect_index(r + t, n), c));
  }
  return acc;
}

inline double capture_at(const Grid& heat, int r, int c) {
  const int n = heat.size();
  double sum = 0.0;
  int count = 0;
  for (int dr = -2; dr <= 2; ++dr) {
    for (int dc = -2; dc <= 2; ++dc) {
      if (std::abs(dr) != 2 && std::abs(dc) != 2) continue;
      const int rr = r + dr;
      const int cc = c + dc;
      if (rr < 0 || rr >= n || cc < 0 || cc >= n) continue;
      sum += heat.at(rr, cc);
      ++count;
    }
  }
  return count ? sum / count : 0.0;
}

inline double coeff_at(const Grid& density, const BasisConfig& cfg, int k1, int k2) {
  const int n = density.size();
  const double inv_h = 1.0 / cfg.normalizer(k1, k2);
  double acc = 0.0;
  for (int r = 0; r < n; ++r) {
    const double y = (r + 0.5) / n;
    const double cy = std::cos(k2 * std::numbers::pi * y);
    for (int c = 0; c < n; ++c) {
      const double x = (c + 0.5) / n;
      acc += density.at(r, c) * (inv_h * std::cos(k1 * std::numbers::pi * x) * cy);
    }
  }
  return acc;
}

void check_controls_args(std::span<const AgentState> agents, std::span<const Coeffs* const> team_c,
                         std::span<const Coeffs* const> phi, std::span<Vec2> out) {
  if (team_c.size() != agents.size() || phi.size() != agents.size() || out.size() != agents.size()) {
    throw std::invalid_argument("controls: per-agent spans must have equal length");
  }
}

inline Vec2 control_at(const AgentState& a, const Coeffs* tc, const Coeffs* ph, const BasisConfig& bcfg,
                       const ErgodicConfig& ecfg, const DynamicsConfig& dyn) {
  if (ph == nullptr || tc == nullptr) return {};
  return compute_control(a, *tc, *ph, bcfg, ecfg, dyn);
}

}  // namespace

namespace serial {

Grid gaussian_blur(const Grid& in, std::span<const double> taps) {
  const int n = in.size();
  Grid tmp(n), out(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) tmp.at(r, c) = blur_row_at(in, taps, r, c);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out.at(r, c) = blur_col_at(tmp, taps, r, c);
  return out;
}

Grid capture_field(const Grid& heat) {
  const int n = heat.size();
  Grid out(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out.at(r, c) = capture_at(heat, r, c);
  return out;
}

Coeffs target_coeffs(const Grid& density, const BasisConfig& cfg) {
  const int k = cfg.order();
  Coeffs out(k);
  for (int k1 = 0; k1 < k; ++k1)
    for (int k2 = 0; k2 < k; ++k2) out.at(k1, k2) = coeff_at(density, cfg, k1, k2);
  return out;
}

void controls(std::span<const AgentState> agents, std::span<const Coeffs* const> team_c,
              std::span<const Coeffs* const> phi, const BasisConfig& bcfg, const ErgodicConfig& ecfg,
              const DynamicsConfig& dyn, std::span<Vec2> out) {
  check_controls_args(agents, team_c, phi, out);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    out[i] = control_at(agents[i], team_c[i], phi[i], bcfg, ecfg, dyn);
  }
}

}  // namespace serial

namespace omp {

Grid gaussian_blur(const Grid& in, std::span<const double> taps) {
  const int n = in.size();
  Grid tmp(n), out(n);
#pragma omp parallel
  {
#pragma omp for schedule(static)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) tmp.at(r, c) = blur_row_at(in, taps, r, c);
#pragma omp for schedule(static)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) out.at(r, c) = blur_col_at(tmp, taps, r, c);
  }
  return out;
}

Grid capture_field(const Grid& heat) {
  const int n = heat.size();
  Grid out(n);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out.at(r, c) = capture_at(heat, r, c);
  return out;
}

Coeffs target_coeffs(const Grid& density, const BasisConfig& cfg) {
  const int k = cfg.order();
  Coeffs out(k);
#pragma omp parallel for collapse(2) schedule(static)
  for (int k1 = 0; k1 < k; ++k1)
    for (int k2 = 0; k2 < k; ++k2) out.at(k1, k2) = coeff_at(density, cfg, k1, k2);
  return out;
}

void controls(std::span<const AgentState> agents, std::span<const Coeffs* const> team_c,
              std::span<const Coeffs* const> phi, const BasisConfig& bcfg, const ErgodicConfig& ecfg,
              const DynamicsConfig& dyn, std::span<Vec2> out) {
  check_controls_args(agents, team_c, phi, out);
  const auto n = static_cast<long>(agents.size());
  std::exception_ptr first_error;
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    try {
      out[u] = control_at(agents[u], team_c[u], phi[u], bcfg, ecfg, dyn);
    } catch (...) {
#pragma omp critical(swarmgame_controls_error)
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace omp

}  // namespace swarmgame::kernels
