#include <benchmark/benchmark.h>

#include <random>

#include "ipmix/entropy_claw.hpp"
#include "ipmix/lamination.hpp"
#include "ipmix/random_walk.hpp"
#include "ipmix/wave_cone.hpp"

using namespace ipmix;

static void BM_ThetaExact(benchmark::State& st) {
  const auto prof = make_profile(make_atwood(0.5), 1.0);
  double x = -2.0, acc = 0.0;
  for (auto _ : st) {
    acc += theta_exact(prof, 1.0, x);
    x = x > 2.0 ? -2.0 : x + 1e-3;
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_ThetaExact);

static void BM_SolveClaw(benchmark::State& st) {
  const auto p = make_atwood(0.5);
  ClawConfig cfg;
  cfg.n_cells = int(st.range(0));
  const auto th0 = flat_datum(cfg);
  for (auto _ : st) benchmark::DoNotOptimize(solve_claw(th0, p, 1.0, 1.0, cfg).final().data());
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_SolveClaw)->RangeMultiplier(2)->Range(200, 1600)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_IdentityCheck(benchmark::State& st) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> N;
  const auto p = make_atwood(0.3);
  const auto b = make_bounds(p, 3.0);
  for (auto _ : st) {
    const State z{0.3 * std::tanh(N(rng)), {N(rng), N(rng)}, {N(rng), N(rng)}};
    benchmark::DoNotOptimize(identity_check(z, p, b).max_relative());
  }
}
BENCHMARK(BM_IdentityCheck);

static void BM_Decompose(benchmark::State& st) {
  const auto p = make_atwood(0.5);
  std::mt19937_64 rng(2);
  std::vector<State> zs;
  for (int i = 0; i < 256; ++i) zs.push_back(sample_U(p, rng));
  std::size_t k = 0;
  for (auto _ : st) benchmark::DoNotOptimize(laminate_decompose(zs[k++ % zs.size()], p).root.weight);
}
BENCHMARK(BM_Decompose);

static void BM_SegmentRadius(benchmark::State& st) {
  const auto p = make_atwood(0.5);
  const auto b = make_bounds(p, 4.0);
  std::mt19937_64 rng(3);
  std::vector<State> zs;
  for (int i = 0; i < 256; ++i) zs.push_back(sample_U_M(p, b, rng));
  std::size_t k = 0;
  for (auto _ : st) {
    const State& z = zs[k++ % zs.size()];
    benchmark::DoNotOptimize(segment_radius(z, bounded_direction(z, p, b).dir.state(), SetId::U_M, p, b).radius());
  }
}
BENCHMARK(BM_SegmentRadius);

static void BM_BiotSavart(benchmark::State& st) {
  const int n = int(st.range(0));
  const Grid g = Grid::torus(n, n);
  ScalarField th(g);
  VectorField m(g);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      th.at(0, i, j) = std::cos(g.x1.coord(i) + 2 * g.x2.coord(j));
      m.at(0, i, j) = {std::sin(g.x2.coord(j)), 0.0};
    }
  const auto p = make_atwood(0.4);
  for (auto _ : st) benchmark::DoNotOptimize(biot_savart(th, m, p).values.data());
}
BENCHMARK(BM_BiotSavart)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_WalkStep(benchmark::State& st) {
  const auto cfg = make_walk_config(make_atwood(0.5), 0.5, 1.0 / 256, 1.0, int(st.range(0)), 7);
  Lattice lat = flat_lattice(cfg.n_cols, cfg.n_rows);
  ColumnStreams rng(cfg.seed, cfg.n_cols);
  for (int k = 0; k < 64; ++k) mc_step(lat, cfg.params, rng);
  for (auto _ : st) {
    Lattice copy = lat;
    mc_step(copy, cfg.params, rng);
    benchmark::DoNotOptimize(copy.values.data());
  }
}
BENCHMARK(BM_WalkStep)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_Recursion(benchmark::State& st) {
  std::vector<double> th(1024);
  for (int r = 0; r < 1024; ++r) th[r] = r >= 512 ? 1.0 : -1.0;
  const auto p = make_atwood(0.5);
  for (auto _ : st) benchmark::DoNotOptimize(recursion_run(th, p, 4.0, 1.0 / 256, 256, 256).theta.back().data());
}
BENCHMARK(BM_Recursion)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
