#include <benchmark/benchmark.h>

#include "kfreelat/kfreelat.hpp"

using namespace kfreelat;

namespace {

void BM_ball_enumeration(benchmark::State& state) {
  Lattice z2 = Lattice::hypercubic(2);
  const double radius = static_cast<double>(state.range(0));
  std::size_t count = 0;
  for (auto _ : state) {
    std::vector<Point> pts = points_in_ball(z2, radius, BallKind::open);
    count = pts.size();
    benchmark::DoNotOptimize(pts);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(count));
}
BENCHMARK(BM_ball_enumeration)->Arg(50)->Arg(200);

void BM_generate(benchmark::State& state) {
  KFreeParams params(2, 1);
  Lattice z2 = Lattice::hypercubic(2);
  const double radius = static_cast<double>(state.range(0));
  for (auto _ : state) {
    Configuration cfg = generate(params, z2, radius);
    benchmark::DoNotOptimize(cfg);
  }
}
BENCHMARK(BM_generate)->Arg(50)->Arg(200);

void BM_census(benchmark::State& state) {
  KFreeParams params(2, 1);
  Lattice z2 = Lattice::hypercubic(2);
  const double scan = static_cast<double>(state.range(0));
  for (auto _ : state) {
    PatchCensus cen = census(params, z2, 1.1, scan);
    benchmark::DoNotOptimize(cen);
  }
}
BENCHMARK(BM_census)->Arg(50)->Arg(150);

void BM_frequency_exact(benchmark::State& state) {
  KFreeParams params(2, 1);
  Lattice z2 = Lattice::hypercubic(2);
  Configuration patch;
  patch.window_radius = 1.1;
  patch.points = {{-1, 0}, {0, -1}, {0, 1}, {1, 0}};
  for (auto _ : state) {
    FrequencyResult nu = frequency_exact(patch, params, z2);
    benchmark::DoNotOptimize(nu);
  }
}
BENCHMARK(BM_frequency_exact);

void BM_kfree_sieve(benchmark::State& state) {
  const std::int64_t limit = state.range(0);
  for (auto _ : state) {
    KfreeSieve sieve(limit, 2);
    benchmark::DoNotOptimize(sieve);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          limit);
}
BENCHMARK(BM_kfree_sieve)->Arg(100000)->Arg(1000000);

void BM_hole(benchmark::State& state) {
  KFreeParams params(2, 1);
  Lattice z2 = Lattice::hypercubic(2);
  for (auto _ : state) {
    HoleCertificate cert = find_hole(params, z2, 1.5);
    benchmark::DoNotOptimize(cert);
  }
}
BENCHMARK(BM_hole);

void BM_amplitude(benchmark::State& state) {
  KFreeParams params(2, 1);
  Lattice z2 = Lattice::hypercubic(2);
  DualPoint y(std::vector<Rational>{Rational(1, 2), Rational(0, 1)});
  const double radius = static_cast<double>(state.range(0));
  for (auto _ : state) {
    std::complex<double> a = empirical_amplitude(y, params, z2, radius);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_amplitude)->Arg(100)->Arg(300);

}  // namespace

BENCHMARK_MAIN();
