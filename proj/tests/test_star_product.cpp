#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <symplectomo/star_product.hpp>
#include <symplectomo/verify.hpp>

using namespace symplectomo;

TEST_CASE("displacement elements match the eigenbasis exponential") {
  // independent oracle: e^{i(mu q + nu p)} via diagonalization at a dim large
  // enough that the top-left block is truncation-free
  ReferenceFrame fr{0.7, -1.2};
  OperatorMatrix u =
      exp_displacement(0.0, ReferenceFrame{-fr.mu, -fr.nu}, BasisConfig{48});
  Complex gamma = Complex(0, 1) * Complex(fr.mu, fr.nu) / std::sqrt(2.0);
  for (int m = 0; m < 8; ++m)
    for (int n = 0; n < 8; ++n)
      CHECK(std::abs(displacement_element(m, n, gamma) - u(m, n)) < 1e-9);
}

TEST_CASE("operator characteristic function: closed form vs trace oracle") {
  DensityMatrix rho =
      density_state(CoherentSpec{Complex(0.6, 0.2)}, BasisConfig{16});
  SymbolField f = symbol_of_operator(rho.op());
  // ground-state-displaced closed form and, independently, the trace route
  for (auto [mu, nu] : std::vector<std::pair<double, double>>{
           {1.0, 0.0}, {0.4, -0.9}, {2.0, 1.5}}) {
    OperatorMatrix e = exp_displacement(0.0, ReferenceFrame{-mu, -nu},
                                        BasisConfig{48});
    Complex oracle =
        (density_state(CoherentSpec{Complex(0.6, 0.2)}, BasisConfig{48}).op() *
         e)
            .trace();
    CHECK(std::abs(f.char_fn(mu, nu) - oracle) < 1e-9);
  }
  // ground state: G = exp(-(mu^2+nu^2)/4)
  SymbolField f0 =
      symbol_of_operator(density_state(FockSpec{0}, BasisConfig{16}).op());
  CHECK(std::abs(f0.char_fn(1.3, -0.4) -
                 std::exp(-(1.69 + 0.16) / 4.0)) < 1e-12);
}

TEST_CASE("dequantize_symbol golden values") {
  DensityMatrix f0 = density_state(FockSpec{0}, BasisConfig{64});
  CHECK(std::abs(dequantize_symbol(f0.op(), {0.0, {1.0, 0.0}}) -
                 Complex(0.5641895835, 0)) < 1e-5);

  DensityMatrix c1 =
      density_state(CoherentSpec{Complex(1, 0)}, BasisConfig{64});
  CHECK(std::abs(dequantize_symbol(c1.op(), {std::sqrt(2.0), {1.0, 0.0}}) -
                 Complex(0.5641895835, 0)) < 1e-4);

  // Hermitian input gives a real symbol
  std::mt19937_64 rng(7);
  OperatorMatrix h = random_hermitian(12, rng);
  Complex v = dequantize_symbol(h, {0.3, {0.8, -0.5}});
  CHECK(std::abs(v.imag()) < 1e-8);
}

TEST_CASE("star_trace is the symbol of the operator product") {
  std::mt19937_64 rng(11);
  OperatorMatrix a = random_hermitian(8, rng), b = random_hermitian(8, rng);
  LabelPoint x{0.4, {1.1, -0.6}};
  CHECK(std::abs(star_trace(a, b, x) - dequantize_symbol(a * b, x)) < 1e-12);

  BasisConfig cfg{16};
  OperatorMatrix p0 = density_state(FockSpec{0}, cfg).op();
  OperatorMatrix p1 = density_state(FockSpec{1}, cfg).op();
  CHECK(std::abs(star_trace(p0, p0, x) - dequantize_symbol(p0, x)) < 1e-10);
  CHECK(std::abs(star_trace(p0, p1, x)) < 1e-10);

  // noncommutativity witnessed somewhere
  double sep = 0.0;
  for (double X : {-0.8, 0.0, 0.9})
    sep = std::max(sep, std::abs(star_trace(a, b, {X, {1.0, 0.7}}) -
                                 star_trace(b, a, {X, {1.0, 0.7}})));
  CHECK(sep > 1e-6);

  OperatorMatrix small = OperatorMatrix::Identity(4, 4);
  CHECK_THROWS_AS(star_trace(a, small, x), Error);
}

TEST_CASE("quantum kernel closed form") {
  LabelPoint x1{0.0, {1.0, 0.0}}, x2{0.0, {0.0, 1.0}}, x{0.0, {1.0, 1.0}};
  KernelValue kv = kernel_quantum(x1, x2, x);
  CHECK(kv.constraint_residual == doctest::Approx(0.0));
  Complex expect = std::exp(Complex(0, -0.5)) / (4.0 * kPi * kPi);
  CHECK(std::abs(kv.prefactor - expect) < 1e-15);

  // swap flips the sign of the antisymmetric phase term
  KernelValue sw = kernel_quantum(x2, x1, x);
  CHECK(sw.constraint_residual == doctest::Approx(kv.constraint_residual));
  CHECK(std::abs(sw.prefactor -
                 std::exp(Complex(0, 0.5)) / (4.0 * kPi * kPi)) < 1e-15);

  CHECK_THROWS_AS(kernel_quantum(x1, x2, {0.0, {1.0, 0.0}}), Error);
}

TEST_CASE("classical kernel closed form and exchange symmetry") {
  LabelPoint x1{0.0, {1.0, 0.0}}, x2{0.0, {0.0, 1.0}}, x{0.0, {1.0, 1.0}};
  KernelValue kv = kernel_classical(x1, x2, x);
  CHECK(std::abs(kv.prefactor - Complex(1.0 / (4.0 * kPi * kPi), 0)) < 1e-15);

  LabelPoint y{1.0, {1.0, 1.0}};
  KernelValue ky = kernel_classical(x1, x2, y);
  CHECK(std::abs(ky.prefactor -
                 std::exp(Complex(0, -1.0)) / (4.0 * kPi * kPi)) < 1e-15);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 200; ++t) {
    LabelPoint a{u(rng), {u(rng), u(rng)}}, b{u(rng), {u(rng), u(rng)}};
    LabelPoint c{u(rng), {u(rng), 1.0 + std::abs(u(rng))}};
    KernelValue ab = kernel_classical(a, b, c), ba = kernel_classical(b, a, c);
    CHECK(ab.prefactor == ba.prefactor);
    CHECK(ab.constraint_residual == ba.constraint_residual);
  }
}

TEST_CASE("kernel ratio equals the interference phase") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    LabelPoint x1{u(rng), {u(rng), u(rng)}}, x2{u(rng), {u(rng), u(rng)}};
    LabelPoint x{u(rng), {u(rng), 0.5 + std::abs(u(rng))}};
    Complex expect = std::exp(Complex(
        0, 0.5 * (x2.frame.mu * x1.frame.nu - x1.frame.mu * x2.frame.nu)));
    worst = std::max(worst, std::abs(kernel_ratio_check(x1, x2, x) - expect));
  }
  CHECK(worst < 1e-12);
  LabelPoint same{0.2, {0.5, 0.7}};
  CHECK(std::abs(kernel_ratio_check(same, same, {0.0, {0.0, 1.0}}) -
                 Complex(1, 0)) < 1e-15);
}

TEST_CASE("kernel route agrees with the trace route") {
  BasisConfig cfg{16};
  OperatorMatrix p0 = density_state(FockSpec{0}, cfg).op();
  SymbolField f0 = symbol_of_operator(p0);
  LabelPoint x{0.0, {1.0, 1.0}};
  Complex ref = star_trace(p0, p0, x);
  Complex ker = star_via_kernel(f0, f0, x);
  CHECK(std::abs(ker - ref) < 1e-3 * std::abs(ref));

  SymbolField f1 = symbol_of_operator(density_state(FockSpec{1}, cfg).op());
  CHECK(std::abs(star_via_kernel(f0, f1, x)) < 1e-3);

  CHECK_THROWS_AS(star_via_kernel(f0, f1, {0.0, {1.0, 0.0}}), Error);

  QuadratureConfig hopeless{12.0, 6.0, 1e-3, 0};
  CHECK_THROWS_AS(star_via_kernel(f0, f0, x, hopeless), Error);
}

TEST_CASE("classical kernel route is exchange symmetric") {
  SymbolField fa = symbol_of_classical(GaussianForm{0.2, 0.0, 1.0, 1.2, 0.1});
  SymbolField fb = symbol_of_classical(GaussianForm{-0.4, 0.3, 0.9, 1.0, 0.0});
  LabelPoint x{0.3, {0.0, 1.0}};
  Complex ab = star_via_kernel(fa, fb, x, {}, KernelKind::Classical);
  Complex ba = star_via_kernel(fb, fa, x, {}, KernelKind::Classical);
  CHECK(std::abs(ab - ba) < 1e-12);
}

TEST_CASE("associativity") {
  std::mt19937_64 rng(13);
  OperatorMatrix a = random_hermitian(8, rng), b = random_hermitian(8, rng),
                 c = random_hermitian(8, rng);
  CHECK(associativity_residual(a, b, c, {0.3, {0.9, -0.4}}) < 1e-10);

  BasisConfig cfg{16};
  OperatorMatrix p0 = density_state(FockSpec{0}, cfg).op();
  OperatorMatrix p1 = density_state(FockSpec{1}, cfg).op();
  CHECK(associativity_residual(p0, p1, p0, {0.1, {1.0, 0.3}}) == 0.0);

  OperatorMatrix da = random_density(8, rng).op(),
                 db = random_density(8, rng).op(),
                 dc = random_density(8, rng).op();
  CHECK(associativity_residual_kernel(da, db, dc, {0.3, {0.4, 1.1}}) < 2e-3);
}

TEST_CASE("dual symbols") {
  int dim = 16;
  OperatorMatrix id = OperatorMatrix::Identity(dim, dim);
  CHECK(std::abs(dual_symbol(id, {0.0, {0.0, 0.0}}) -
                 Complex(dim / (2.0 * kPi), 0)) < 1e-12);

  DensityMatrix f0 = density_state(FockSpec{0}, BasisConfig{32});
  for (auto [mu, nu] :
       std::vector<std::pair<double, double>>{{1.0, 0.0}, {0.6, -1.1}}) {
    Complex expect = std::exp(-(mu * mu + nu * nu) / 4.0) / (2.0 * kPi);
    CHECK(std::abs(dual_symbol(f0.op(), {0.0, {mu, nu}}) - expect) < 1e-6);
  }

  std::mt19937_64 rng(17);
  OperatorMatrix a = random_hermitian(12, rng);
  double base = std::abs(dual_symbol(a, {0.0, {0.9, -0.4}}));
  for (double X : {1.0, -3.0})
    CHECK(std::abs(dual_symbol(a, {X, {0.9, -0.4}})) ==
          doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("dual kernel behaves under symmetry and stays finite") {
  BasisConfig cfg{32};
  LabelPoint x1{0.4, {1.0, 0.2}}, x2{-0.7, {0.3, -1.1}};

  // equal arguments, trivial frame in the quantizer: real after the phase
  LabelPoint sym{0.7, {0.0, 0.0}};
  Complex v = kernel_dual(x1, x1, sym, cfg) * std::exp(Complex(0, -sym.X));
  CHECK(std::abs(v.imag()) < 1e-8);

  LabelPoint x{0.9, {0.6, 0.5}};
  LabelPoint xneg{-x.X, {-x.frame.mu, -x.frame.nu}};
  CHECK(std::abs(std::conj(kernel_dual(x1, x2, x, cfg)) -
                 kernel_dual(x2, x1, xneg, cfg)) < 1e-10);

  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int t = 0; t < 100; ++t) {
    LabelPoint a{u(rng), {u(rng), 0.5 + std::abs(u(rng))}};
    LabelPoint b{u(rng), {0.5 + std::abs(u(rng)), u(rng)}};
    LabelPoint c{u(rng), {u(rng), 0.5 + std::abs(u(rng))}};
    Complex k = kernel_dual(a, b, c, cfg);
    CHECK(std::isfinite(k.real()));
    CHECK(std::isfinite(k.imag()));
  }
}

TEST_CASE("mean values reduce to slice moments") {
  BasisConfig cfg{64};
  AxisGrid g{0.0, 0.05, 512};
  auto slices_of = [&](const StateSpec& spec) {
    DensityMatrix rho = density_state(spec, cfg);
    std::vector<TomogramSlice> out;
    for (auto [mu, nu] : std::vector<std::pair<double, double>>{
             {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}})
      out.push_back(quantum_tomogram(rho, {mu, nu}, g));
    return out;
  };

  auto f3 = slices_of(FockSpec{3});
  CHECK(mean_value(f3, PolyObservable::Q2) == doctest::Approx(3.5).epsilon(1e-4));
  CHECK(mean_value(f3, PolyObservable::One) == doctest::Approx(1.0).epsilon(1e-4));

  auto c1 = slices_of(CoherentSpec{Complex(1, 0)});
  CHECK(mean_value(c1, PolyObservable::Q) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
  CHECK(std::abs(mean_value(c1, PolyObservable::P)) < 1e-4);

  std::vector<TomogramSlice> missing = {f3[0]};
  CHECK_THROWS_AS(mean_value(missing, PolyObservable::P), Error);
}

TEST_CASE("weyl symbols of coordinates and the vacuum") {
  BasisConfig cfg{64};
  OperatorMatrix q = build_position(cfg), p = build_momentum(cfg);
  for (double qq : {-2.0, -0.5, 1.0})
    for (double pp : {-1.5, 0.0, 2.0}) {
      CHECK(std::abs(weyl_symbol(q, qq, pp) - qq) < 1e-3);
      CHECK(std::abs(weyl_symbol(p, qq, pp) - pp) < 1e-3);
    }
  OperatorMatrix id = OperatorMatrix::Identity(64, 64);
  CHECK(std::abs(weyl_symbol(id, 0.7, -0.4) - Complex(1, 0)) < 1e-6);

  DensityMatrix f0 = density_state(FockSpec{0}, BasisConfig{32});
  CHECK(std::abs(weyl_symbol(f0.op(), 0.0, 0.0) - Complex(2, 0)) < 1e-4);
}

TEST_CASE("distributional symbols and the regularized pairing") {
  auto id = distributional_symbol(NamedOperator::Identity);
  REQUIRE(id.terms.size() == 1);
  CHECK(id.terms[0].coefficient == doctest::Approx(-kPi));
  CHECK(id.terms[0].x_profile == DistributionalTerm::XProfile::AbsX);
  CHECK(id.terms[0].mu_derivative_order == 0);
  CHECK(id.terms[0].nu_derivative_order == 0);

  auto pos = distributional_symbol(NamedOperator::Position);
  CHECK(pos.terms[0].coefficient == doctest::Approx(kPi / 2));
  CHECK(pos.terms[0].x_profile == DistributionalTerm::XProfile::XAbsX);
  CHECK(pos.terms[0].mu_derivative_order == 1);
  CHECK(pos.terms[0].nu_derivative_order == 0);

  auto mom = distributional_symbol(NamedOperator::Momentum);
  CHECK(mom.terms[0].mu_derivative_order == 0);
  CHECK(mom.terms[0].nu_derivative_order == 1);

  double prev = std::abs(regularized_identity_pairing(0.1) - 1.0);
  for (double eps : {0.01, 0.001}) {
    double cur = std::abs(regularized_identity_pairing(eps) - 1.0);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("quantize_operator inverts dequantization") {
  BasisConfig cfg{8};
  AxisGrid g{0.0, 0.05, 512};
  FrameLattice lat = make_polar_lattice();

  SymbolField f0 = symbol_of_operator(density_state(FockSpec{0}, cfg).op());
  QuantizeDiagnostics diag;
  OperatorMatrix back = quantize_operator(f0, lat, g, cfg, {}, &diag);
  CHECK(std::abs(back(0, 0) - Complex(1, 0)) < 1e-3);
  double off = 0.0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      if (i || j) off = std::max(off, std::abs(back(i, j)));
  CHECK(off < 1e-3);
  CHECK(diag.trace_deviation < 1e-3);
  CHECK(diag.hermiticity_defect < 1e-6);

  // linearity: symbol of a mixture quantizes to the mixed density
  OperatorMatrix mix = 0.5 * density_state(FockSpec{0}, cfg).op() +
                       0.5 * density_state(FockSpec{1}, cfg).op();
  OperatorMatrix qmix =
      quantize_operator(symbol_of_operator(mix), lat, g, cfg);
  CHECK((qmix - mix).cwiseAbs().maxCoeff() < 1e-3);
}
