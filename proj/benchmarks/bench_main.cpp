#include "kr/compiler.hpp"
#include "kr/krbasic.hpp"
#include "kr/krlink.hpp"

#include <benchmark/benchmark.h>

namespace {

kr::Poly dense(int nvars, int deg) {
  kr::Poly p(1);
  kr::Poly s;
  for (int v = 0; v < nvars; ++v) s += kr::Poly::var(v);
  for (int k = 0; k < deg; ++k) p = p * s + kr::Poly(k + 1);
  return p;
}

void BM_PolyMultiply(benchmark::State& state) {
  const int deg = static_cast<int>(state.range(0));
  kr::Poly a = dense(4, deg), b = dense(4, deg);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_PolyMultiply)->Arg(3)->Arg(5)->Arg(7);

void BM_CrossingData(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kr::make_crossing_data(N));
}
BENCHMARK(BM_CrossingData)->DenseRange(2, 6, 2);

kr::Web theta_web(int N) {
  kr::Web w;
  w.N = N;
  for (int i = 0; i < 4; ++i) w.add_edge(i);
  w.add_vertex(kr::VertexKind::Singular, {0, 1}, {2, 3});
  w.add_vertex(kr::VertexKind::Identity, {2}, {0});
  w.add_vertex(kr::VertexKind::Identity, {3}, {1});
  return w;
}

void BM_CompileTheta(benchmark::State& state) {
  kr::Web w = theta_web(static_cast<int>(state.range(0)));
  kr::CompileOptions o;
  o.verify = false;
  for (auto _ : state) benchmark::DoNotOptimize(kr::compile_web(w, o));
}
BENCHMARK(BM_CompileTheta)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_TrefoilReduced(benchmark::State& state) {
  kr::LinkDiagram d = kr::builtin_diagram("trefoil");
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kr::kr_invariant(d, N, true));
}
BENCHMARK(BM_TrefoilReduced)->Arg(2)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
