#include <benchmark/benchmark.h>

#include <random>

#include "hitchin/anosov_cert.hpp"
#include "hitchin/limit_curve.hpp"
#include "hitchin/representations.hpp"
#include "hitchin/surface_group.hpp"

using namespace hitchin;

namespace {

const SurfaceRep& base_rep() {
  static SurfaceRep rep = fuchsian_genus2();
  return rep;
}

SurfaceRep sym_rep(int n) { return compose_irreducible(n, base_rep()); }

void BM_SymPower(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Eigen::Matrix2d m;
  m << g(rng), g(rng), g(rng), g(rng);
  if (m.determinant() < 0) m.col(0) *= -1.0;
  m /= std::sqrt(m.determinant());
  for (auto _ : state) benchmark::DoNotOptimize(sym_power(n, m));
}
BENCHMARK(BM_SymPower)->Arg(3)->Arg(5)->Arg(8);

void BM_Ball(benchmark::State& state) {
  const int radius = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ball(2, radius));
}
BENCHMARK(BM_Ball)->Arg(3)->Arg(4)->Arg(5);

void BM_WordEigen(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SurfaceRep rep = sym_rep(n);
  Word w = Word::from_text("a1 b2 A1 b1 a2 B1");
  for (auto _ : state) benchmark::DoNotOptimize(word_eigen(w, rep));
}
BENCHMARK(BM_WordEigen)->Arg(3)->Arg(4)->Arg(5);

void BM_WordSingularValues(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SurfaceRep rep = sym_rep(n);
  Word w = Word::from_text("a1 b2 A1 b1 a2 B1");
  for (auto _ : state) benchmark::DoNotOptimize(word_singular_values(w, rep));
}
BENCHMARK(BM_WordSingularValues)->Arg(3)->Arg(4)->Arg(5);

void BM_SampleCurve(benchmark::State& state) {
  const int radius = static_cast<int>(state.range(0));
  SurfaceRep rep = sym_rep(3);
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_curve(rep, base_rep(), radius));
}
BENCHMARK(BM_SampleCurve)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_GapGrowth(benchmark::State& state) {
  SurfaceRep rep = sym_rep(3);
  Ball b = ball(2, 4);
  for (auto _ : state) benchmark::DoNotOptimize(gap_growth(rep, b.words));
}
BENCHMARK(BM_GapGrowth)->Unit(benchmark::kMillisecond);

void BM_BundleNorm(benchmark::State& state) {
  VeroneseSource curve(static_cast<int>(state.range(0)));
  Triple w{CirclePoint::from_angle(0.2), CirclePoint::from_angle(1.7),
           CirclePoint::from_angle(4.4)};
  for (auto _ : state) benchmark::DoNotOptimize(bundle_norm(curve, w, 1));
}
BENCHMARK(BM_BundleNorm)->Arg(3)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
