#include <benchmark/benchmark.h>

#include <random>
#include <symplectomo/star_product.hpp>
#include <symplectomo/verify.hpp>

using namespace symplectomo;

static void BM_QuadratureEig(benchmark::State& state) {
  BasisConfig cfg{int(state.range(0))};
  ReferenceFrame fr{0.8, -0.6};
  OperatorMatrix H = quadrature_operator(fr, cfg);
  for (auto _ : state) {
    EigenSystem sys = eig_hermitian(H);
    benchmark::DoNotOptimize(sys.values.data());
  }
}
BENCHMARK(BM_QuadratureEig)->Arg(64)->Arg(128);

static void BM_QuantumTomogramSlice(benchmark::State& state) {
  DensityMatrix rho = density_state(CoherentSpec{Complex(1.0, 0.5)},
                                    BasisConfig{int(state.range(0))});
  AxisGrid g{0.0, 0.05, 512};
  for (auto _ : state) {
    TomogramSlice s = quantum_tomogram(rho, {0.7, -0.7}, g);
    benchmark::DoNotOptimize(s.density.data());
  }
}
BENCHMARK(BM_QuantumTomogramSlice)->Arg(32)->Arg(128);

static void BM_CharFnEval(benchmark::State& state) {
  std::mt19937_64 rng(7);
  SymbolField f =
      symbol_of_operator(random_density(int(state.range(0)), rng).op());
  double mu = 0.3;
  for (auto _ : state) {
    Complex v = f.char_fn(mu, -0.9);
    benchmark::DoNotOptimize(v);
    mu += 1e-6;
  }
}
BENCHMARK(BM_CharFnEval)->Arg(8)->Arg(16);

static void BM_StarViaKernel(benchmark::State& state) {
  std::mt19937_64 rng(11);
  SymbolField fa = symbol_of_operator(random_density(8, rng).op());
  SymbolField fb = symbol_of_operator(random_density(8, rng).op());
  QuadratureConfig quad;
  quad.max_refinements = 1;
  quad.rel_tol = 1e9;  // always accept the first refinement: fixed work
  LabelPoint x{0.2, {0.4, 1.1}};
  for (auto _ : state) {
    Complex v = star_via_kernel(fa, fb, x, quad);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_StarViaKernel);

BENCHMARK_MAIN();
