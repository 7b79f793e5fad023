#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

#include "hexcmc/assembly.hpp"
#include "hexcmc/delaunay.hpp"
#include "hexcmc/hexnorm.hpp"
#include "hexcmc/isoperimetry.hpp"
#include "hexcmc/obj_io.hpp"

using namespace hexcmc;

static void BM_Psi(benchmark::State &state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<Vec3> dirs(1024);
  for (auto &d : dirs) {
    d = {g(rng), g(rng), g(rng)};
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hex_norm().psi(dirs[i++ & 1023]));
  }
}
BENCHMARK(BM_Psi);

static void BM_RealizeWulff(benchmark::State &state) {
  const SurfaceTopology t = wulff_prism_topology();
  for (auto _ : state) {
    benchmark::DoNotOptimize(realize(t));
  }
}
BENCHMARK(BM_RealizeWulff);

static void BM_DelaunayResidual(benchmark::State &state) {
  const DelaunayParams p = solve(DelaunayKind::Unduloid, 0.05).params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(residual(p));
  }
}
BENCHMARK(BM_DelaunayResidual);

static void BM_DelaunaySolve(benchmark::State &state) {
  const auto kind = state.range(0) == 0 ? DelaunayKind::Unduloid : DelaunayKind::Nodoid;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(kind, 0.1));
  }
}
BENCHMARK(BM_DelaunaySolve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_SolveAssembly(benchmark::State &state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_assembly(0.03));
  }
}
BENCHMARK(BM_SolveAssembly)->Unit(benchmark::kMillisecond);

static void BM_FitClosure(benchmark::State &state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_closure(3));
  }
}
BENCHMARK(BM_FitClosure)->Unit(benchmark::kMillisecond);

static void BM_BuildAssembly(benchmark::State &state) {
  const AssemblySolution s = fit_closure(3).solution;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_assembly(s));
  }
}
BENCHMARK(BM_BuildAssembly)->Unit(benchmark::kMillisecond);

static void BM_VerifyLemma(benchmark::State &state) {
  LemmaOptions o;
  o.trials = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_lemma({0.05, 0.05, 10, 2}, o));
  }
}
BENCHMARK(BM_VerifyLemma)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_FirstVariation(benchmark::State &state) {
  const FaceTestFunction v = FaceTestFunction::random({0.05, 0.05, 1, 1}, static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(first_variation_functional(v));
  }
}
BENCHMARK(BM_FirstVariation)->Arg(16)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

static void BM_ObjRoundTrip(benchmark::State &state) {
  const RealizedSurface s = build_assembly(fit_closure(3).solution).surface;
  for (auto _ : state) {
    std::stringstream io;
    write_obj(io, to_obj_mesh(s));
    benchmark::DoNotOptimize(measure_mesh(read_obj(io)));
  }
}
BENCHMARK(BM_ObjRoundTrip)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
