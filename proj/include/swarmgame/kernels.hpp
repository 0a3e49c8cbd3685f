#pragma once

// Data-parallel grid kernels. Each kernel has a serial reference in
// `kernels::serial` and an OpenMP version in `kernels::omp`. Every output
// element is computed by the same arithmetic in both, so results are
// bitwise identical; the tests hold them to that.

#include <span>

#include "swarmgame/ergodic.hpp"
#include "swarmgame/grid.hpp"

namespace swarmgame::kernels {

namespace serial {

/// Separable Gaussian blur with half-sample reflective boundaries.
Grid gaussian_blur(const Grid& in, std::span<const double> taps);

/// Mean heat over the in-bounds cells of the 16-cell ring at Chebyshev
/// distance 2 around every cell.
Grid capture_field(const Grid& heat);

Coeffs target_coeffs(const Grid& density, const BasisConfig& cfg);

void controls(std::span<const AgentState> agents, std::span<const Coeffs* const> team_c,
              std::span<const Coeffs* const> phi, const BasisConfig& bcfg, const ErgodicConfig& ecfg,
              const DynamicsConfig& dyn, std::span<Vec2> out);

}  // namespace serial

namespace omp {

Grid gaussian_blur(const Grid& in, std::span<const double> taps);
Grid capture_field(const Grid& heat);
Coeffs target_coeffs(const Grid& density, const BasisConfig& cfg);

/// Per-agent ergodic controls. team_c[i] / phi[i] are the arrays agent i uses;
/// a null phi[i] yields a zero control.
void controls(std::span<const AgentState> agents, std::span<const Coeffs* const> team_c,
              std::span<const Coeffs* const> phi, const BasisConfig& bcfg, const ErgodicConfig& ecfg,
              const DynamicsConfig& dyn, std::span<Vec2> out);

}  // namespace omp

}  // namespace swarmgame::kernels
