#include <benchmark/benchmark.h>

#include <vector>

#include "swarmgame/kernels.hpp"
#include "swarmgame/painter.hpp"

using namespace swarmgame;

namespace {

Grid random_grid(int n, std::uint64_t seed) {
  Rng rng(seed);
  Grid g(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) g.at(r, c) = rng.uniform();
  return g;
}

struct ControlInputs {
  BasisConfig bcfg{8};
  ErgodicConfig ecfg;
  DynamicsConfig dyn;
  std::vector<AgentState> agents;
  Coeffs team_c;
  Coeffs phi;
  std::vector<const Coeffs*> team_ptrs, phi_ptrs;
  std::vector<Vec2> out;

  explicit ControlInputs(int n) {
    Rng rng(3);
    agents = spawn_agents(n / 2, rng);
    std::vector<CoverageCoefficients> m;
    for (const auto& a : agents) m.push_back(CoverageCoefficients::at_position(a.position, bcfg));
    team_c = team_coeffs(m);
    Grid g = random_grid(50, 4);
    phi = kernels::serial::target_coeffs(smooth_and_normalize(g).density, bcfg);
    team_ptrs.assign(agents.size(), &team_c);
    phi_ptrs.assign(agents.size(), &phi);
    out.resize(agents.size());
  }
};

template <bool Omp>
void BM_blur(benchmark::State& st) {
  const Grid g = random_grid(static_cast<int>(st.range(0)), 1);
  const auto taps = gaussian_taps(1.5, 4.0);
  for (auto _ : st) {
    Grid r = Omp ? kernels::omp::gaussian_blur(g, taps) : kernels::serial::gaussian_blur(g, taps);
    benchmark::DoNotOptimize(r);
  }
}

template <bool Omp>
void BM_capture_field(benchmark::State& st) {
  const Grid g = random_grid(static_cast<int>(st.range(0)), 2);
  for (auto _ : st) {
    Grid r = Omp ? kernels::omp::capture_field(g) : kernels::serial::capture_field(g);
    benchmark::DoNotOptimize(r);
  }
}

template <bool Omp>
void BM_target_coeffs(benchmark::State& st) {
  const Grid g = random_grid(50, 5);
  const BasisConfig cfg(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    Coeffs c = Omp ? kernels::omp::target_coeffs(g, cfg) : kernels::serial::target_coeffs(g, cfg);
    benchmark::DoNotOptimize(c);
  }
}

template <bool Omp>
void BM_controls(benchmark::State& st) {
  ControlInputs in(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    if (Omp)
      kernels::omp::controls(in.agents, in.team_ptrs, in.phi_ptrs, in.bcfg, in.ecfg, in.dyn, in.out);
    else
      kernels::serial::controls(in.agents, in.team_ptrs, in.phi_ptrs, in.bcfg, in.ecfg, in.dyn, in.out);
    benchmark::DoNotOptimize(in.out.data());
  }
}

}  // namespace

BENCHMARK(BM_blur<false>)->Arg(50)->Arg(200);
BENCHMARK(BM_blur<true>)->Arg(50)->Arg(200);
BENCHMARK(BM_capture_field<false>)->Arg(50)->Arg(200);
BENCHMARK(BM_capture_field<true>)->Arg(50)->Arg(200);
BENCHMARK(BM_target_coeffs<false>)->Arg(8)->Arg(16);
BENCHMARK(BM_target_coeffs<true>)->Arg(8)->Arg(16);
BENCHMARK(BM_controls<false>)->Arg(20)->Arg(100);
BENCHMARK(BM_controls<true>)->Arg(20)->Arg(100);

BENCHMARK_MAIN();
