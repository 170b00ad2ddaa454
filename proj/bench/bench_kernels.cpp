// Serial reference vs OpenMP kernels on the strange non-chaotic arctan point.

#include <benchmark/benchmark.h>

#include <vector>

#include "snalab/attractor.hpp"
#include "snalab/families.hpp"
#include "snalab/kernels.hpp"
#include "snalab/rectifiability.hpp"

using namespace snalab;

namespace {

const Phase kGolden = (std::sqrt(5.0L) - 1.0L) / 2.0L;

const CircleMapFamily& sna() {
  static const CircleMapFamily f = CircleMapFamily::arctan(2, 1000.0, 0.2, {ForcingKind::Cosine, 1.0}, kGolden);
  return f;
}

std::vector<Phase> grid(std::int64_t n) {
  std::vector<Phase> t(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = static_cast<Phase>(i) / n;
  return t;
}

template <Exec E>
void BM_Pullback(benchmark::State& st) {
  auto t = grid(st.range(0));
  std::vector<double> phi(t.size()), res(t.size());
  for (auto _ : st) {
    if constexpr (E == Exec::Serial) {
      kernels::pullback_serial(sna(), GraphDirection::Attractor, t, 200, 0.5, phi, res);
    } else {
      kernels::pullback_parallel(sna(), GraphDirection::Attractor, t, 200, 0.5, phi, res);
    }
    benchmark::DoNotOptimize(phi.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <Exec E>
void BM_CriticalScan(benchmark::State& st) {
  static const ConstantsEstimate k = estimate_constants(sna(), 512, 2048);
  auto t = grid(st.range(0));
  std::vector<char> member(t.size()), long_arc(t.size());
  for (auto _ : st) {
    if constexpr (E == Exec::Serial) {
      kernels::critical_scan_serial(sna(), k.data.C, k.data.E, t, 3, member, long_arc);
    } else {
      kernels::critical_scan_parallel(sna(), k.data.C, k.data.E, t, 3, member, long_arc);
    }
    benchmark::DoNotOptimize(member.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <Exec E>
void BM_Sweep(benchmark::State& st) {
  std::vector<CircleMapFamily> members;
  for (int i = 0; i < 64; ++i) members.push_back(CircleMapFamily::driven_arnold(1.0, 0.0, i / 64.0, kGolden));
  std::vector<double> rho(members.size());
  auto row = [&](std::size_t i, const OrbitSummary* r, const char*) { rho[i] = r ? r->rotation_number : 0.0; };
  for (auto _ : st) {
    if constexpr (E == Exec::Serial) {
      kernels::sweep_serial(members, 0.0L, 0.0, st.range(0), row);
    } else {
      kernels::sweep_parallel(members, 0.0L, 0.0, st.range(0), row);
    }
    benchmark::DoNotOptimize(rho.data());
  }
}

template <Exec E>
void BM_BallMeasures(benchmark::State& st) {
  static const InvariantGraphSample g = pullback_graph(sna(), GraphDirection::Attractor, 1 << 16, 200, 0.5);
  auto centers = sample_centers(g.theta, g.phi, 32, 7);
  auto eps = dyadic_scales(4, 13);
  std::vector<double> out(centers.size() * eps.size());
  for (auto _ : st) {
    if constexpr (E == Exec::Serial) {
      kernels::ball_measures_serial(g.theta, g.phi, centers, eps, out);
    } else {
      kernels::ball_measures_parallel(g.theta, g.phi, centers, eps, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_Pullback<Exec::Serial>)->Arg(1 << 14)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Pullback<Exec::Parallel>)->Arg(1 << 14)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CriticalScan<Exec::Serial>)->Arg(1 << 14)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CriticalScan<Exec::Parallel>)->Arg(1 << 14)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Sweep<Exec::Serial>)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep<Exec::Parallel>)->Arg(100000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BallMeasures<Exec::Serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BallMeasures<Exec::Parallel>)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
