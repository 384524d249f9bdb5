#include <fngon/chain.hpp>
#include <fngon/coeffsets.hpp>
#include <fngon/cyclotomic.hpp>
#include <fngon/join.hpp>
#include <fngon/locus.hpp>
#include <fngon/polyseries.hpp>
#include <fngon/star.hpp>

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace fngon;

void BM_CycMultiply(benchmark::State& state) {
  const auto m = static_cast<std::uint32_t>(state.range(0));
  const CycNum a = cyc_root_of_unity(m, 1) + CycNum::from_int(m, 3);
  const CycNum b = cyc_root_of_unity(m, 5) - CycNum::from_int(m, 2);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_CycMultiply)->Arg(8)->Arg(24)->Arg(80);

void BM_OmegaSet(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(omega_set(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_OmegaSet)->Arg(5)->Arg(12)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_CheckStar(benchmark::State& state) {
  const auto g = omega_set(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(check_star(g).satisfied());
}
BENCHMARK(BM_CheckStar)->Arg(3)->Arg(6)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_RootsCertified(benchmark::State& state) {
  const auto g = omega_set(4);
  ZeroSetEnumerator en(g, static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(3);
  for (auto _ : state) {
    const auto e = en.entry(rng() % en.count());
    benchmark::DoNotOptimize(e.roots.size());
  }
}
BENCHMARK(BM_RootsCertified)->Arg(6)->Arg(8)->Arg(12)->Unit(benchmark::kMicrosecond);

void BM_JoinWalk(benchmark::State& state) {
  const auto g = omega_set(5);
  const auto cert = check_star(g);
  const auto len = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(5);
  for (auto _ : state) {
    std::vector<std::size_t> a(len), b(len);
    for (auto& x : a) x = rng() % g.size();
    for (auto& x : b) x = rng() % g.size();
    benchmark::DoNotOptimize(walk_join(a, b, cert, [](const JoinHop&) { return true; }).hops);
  }
}
BENCHMARK(BM_JoinWalk)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_ChainToAnnulus(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = omega_set(n);
  const auto cert = check_star(g);
  const double radius = 1 / std::sqrt(double(n)) + 0.01;
  ZeroSetEnumerator en(g, 10);
  std::mt19937_64 rng(11);
  for (auto _ : state) {
    state.PauseTiming();
    std::uint64_t idx = 0;
    Complex s{};
    for (bool found = false; !found;) {
      idx = rng() % en.count();
      for (Complex z : en.entry(idx).roots.roots)
        if (!found && std::abs(z) <= radius) s = z, found = true;
    }
    const auto a = en.polynomial(idx);
    state.ResumeTiming();
    benchmark::DoNotOptimize(connect_to_annulus(a, s, cert).points.size());
  }
}
BENCHMARK(BM_ChainToAnnulus)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Membership(benchmark::State& state) {
  const auto g = omega_set(static_cast<int>(state.range(0)));
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> r(0.05, 0.95), t(0, 6.283185307179586);
  for (auto _ : state) benchmark::DoNotOptimize(membership(std::polar(r(rng), t(rng)), g).verdict);
}
BENCHMARK(BM_Membership)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_RenderLocus(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(render_locus(n, Region{}, 64, 64).codes.size());
}
BENCHMARK(BM_RenderLocus)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Attractor(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(attractor_points(3, {0.45, 0.2}, 100000, 7).points.size());
}
BENCHMARK(BM_Attractor)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
