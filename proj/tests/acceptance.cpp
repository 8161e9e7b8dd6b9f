// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <symplectomo/io.hpp>
#include <symplectomo/star_product.hpp>
#include <symplectomo/verify.hpp>

using namespace symplectomo;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

void report(int index, const char* name, bool ok, double measured,
            double budget_s, double elapsed_s) {
  if (!ok) ++failures;
  std::printf("criterion %02d %-34s %s  (worst %.3e, %.1fs/%.0fs)\n", index,
              name, ok ? "pass" : "FAIL", measured, elapsed_s, budget_s);
  std::fflush(stdout);
}

ReferenceFrame seeded_frame(std::mt19937_64& rng, double rmin, double rmax) {
  std::uniform_real_distribution<double> ur(rmin, rmax), ut(0.0, 2.0 * kPi);
  double r = ur(rng), t = ut(rng);
  return {r * std::cos(t), r * std::sin(t)};
}

// 1. tomogram sanity across a state/frame panel: normalization,
//    nonnegativity, homogeneity.
void criterion_tomogram_panel() {
  Timer timer;
  std::mt19937_64 rng(1001);
  std::vector<StateSpec> states = {FockSpec{0},
                                   FockSpec{1},
                                   FockSpec{2},
                                   FockSpec{3},
                                   FockSpec{4},
                                   FockSpec{5},
                                   CoherentSpec{Complex(1.0, 0.5)},
                                   ThermalSpec{0.5}};
  std::vector<ReferenceFrame> frames;
  for (int i = 0; i < 12; ++i) frames.push_back(seeded_frame(rng, 0.4, 2.0));

  BasisConfig cfg{128};
  double worst = 0.0;
  bool ok = true;
  for (const auto& spec : states) {
    DensityMatrix rho = density_state(spec, cfg);
    for (const auto& fr : frames) {
      AxisGrid g{0.0, 0.05 * std::max(1.0, fr.radius()), 512};
      TomogramSlice s = quantum_tomogram(rho, fr, g);
      double norm_err = std::abs(s.trapezoid_integral() - 1.0);
      double neg = std::max(0.0, -s.density.minCoeff());
      worst = std::max(worst, norm_err);
      ok = ok && norm_err <= 1e-4 && neg <= 1e-6;
    }
    // homogeneity through point evaluations of the band-limited symbol
    for (double lambda : {-2.0, 0.5, 3.0}) {
      LabelPoint x{0.4, seeded_frame(rng, 0.5, 1.2)};
      LabelPoint xs{lambda * x.X, {lambda * x.frame.mu, lambda * x.frame.nu}};
      double hom = std::abs(
          std::abs(lambda) * dequantize_symbol(rho.op(), xs).real() -
          dequantize_symbol(rho.op(), x).real());
      worst = std::max(worst, hom);
      ok = ok && hom <= 1e-3;
    }
  }
  double t = timer.seconds();
  report(1, "tomogram_panel", ok && t < 30.0, worst, 30.0, t);
}

// 2. frozen golden values of known tomograms.
void criterion_goldens() {
  Timer timer;
  AxisGrid g{0.0, 0.05, 512};
  BasisConfig cfg{64};

  TomogramSlice s0 =
      quantum_tomogram(density_state(FockSpec{0}, cfg), {1.0, 0.0}, g);
  double e1 = std::abs(s0.density(g.count / 2) - 0.5641895835);

  TomogramSlice s1 =
      quantum_tomogram(density_state(FockSpec{1}, cfg), {1.0, 0.0}, g);
  double e2 = std::abs(s1.density(g.count / 2 + 20) - 0.4151074974);

  DensityMatrix c1 = density_state(CoherentSpec{Complex(1, 0)}, cfg);
  std::vector<TomogramSlice> slices = {
      quantum_tomogram(c1, {1.0, 0.0}, g), quantum_tomogram(c1, {0.0, 1.0}, g)};
  double e3 = std::abs(mean_value(slices, PolyObservable::Q) - std::sqrt(2.0));

  double worst = std::max({e1, e2, e3});
  report(2, "golden_values", e1 <= 1e-5 && e2 <= 1e-5 && e3 <= 1e-4, worst,
         60.0, timer.seconds());
}

// 3. classical inverse Radon on a two-Gaussian mixture.
void criterion_classical_inverse() {
  Timer timer;
  GaussianForm g1{-1.2, 0.5, 0.8, 1.1, 0.1};
  GaussianForm g2{1.0, -0.8, 1.2, 0.7, -0.2};
  FrameLattice lattice = make_polar_lattice();
  AxisGrid sx{0.0, 0.05, 512};
  // pick each slice window wide enough for both components' marginals
  std::vector<TomogramSlice> mix;
  mix.reserve(lattice.nodes.size());
  for (const auto& node : lattice.nodes) {
    const auto& fr = node.frame;
    auto stats = [&](const GaussianForm& g) {
      double m = fr.mu * g.mean_q + fr.nu * g.mean_p;
      double v = fr.mu * fr.mu * g.cov_qq + 2 * fr.mu * fr.nu * g.cov_qp +
                 fr.nu * fr.nu * g.cov_pp;
      return std::pair{m, std::sqrt(v)};
    };
    auto [m1, sd1] = stats(g1);
    auto [m2, sd2] = stats(g2);
    double lo = std::min(m1 - 8.0 * sd1, m2 - 8.0 * sd2);
    double hi = std::max(m1 + 8.0 * sd1, m2 + 8.0 * sd2);
    AxisGrid ax = sx;
    ax.center = 0.5 * (lo + hi);
    ax.step = std::max(sx.step, (hi - lo) / double(sx.count - 1));
    TomogramSlice a = classical_tomogram({g1, Convention::Plain}, fr, ax);
    TomogramSlice b = classical_tomogram({g2, Convention::Plain}, fr, ax);
    a.density = 0.6 * a.density + 0.4 * b.density;
    mix.push_back(std::move(a));
  }
  AxisGrid axis{0.0, 0.05, 128};
  ClassicalDistribution rec = classical_inverse(mix, lattice, axis, axis);
  const auto& grid = std::get<GridForm>(rec.form);
  auto dens = [](const GaussianForm& g, double q, double p) {
    double det = g.cov_qq * g.cov_pp - g.cov_qp * g.cov_qp;
    double dq = q - g.mean_q, dp = p - g.mean_p;
    double quad =
        (g.cov_pp * dq * dq - 2 * g.cov_qp * dq * dp + g.cov_qq * dp * dp) /
        det;
    return std::exp(-0.5 * quad) / (2.0 * kPi * std::sqrt(det));
  };
  double worst = 0.0;
  for (int i = 0; i < axis.count; ++i)
    for (int j = 0; j < axis.count; ++j) {
      double q = axis.point(i), p = axis.point(j);
      double expect = 0.6 * dens(g1, q, p) + 0.4 * dens(g2, q, p);
      worst = std::max(worst, std::abs(grid.values(i, j) - expect));
    }
  double t = timer.seconds();
  report(3, "classical_inverse_mixture", worst <= 1e-2 && t < 60.0, worst,
         60.0, t);
}

// 4. quantum state reconstruction fidelity from lattice tomograms.
void criterion_quantum_reconstruction() {
  Timer timer;
  FrameLattice lattice = make_polar_lattice();
  AxisGrid sx{0.0, 0.05, 512};
  double worst = 0.0;
  for (const auto& [spec, dim] : std::vector<std::pair<StateSpec, int>>{
           {FockSpec{0}, 16}, {CoherentSpec{Complex(0.8, 0.0)}, 24}}) {
    DensityMatrix rho = density_state(spec, BasisConfig{dim});
    auto slices = quantum_slices(rho, lattice, sx);
    DensityMatrix rec = density_from_tomogram(slices, lattice, BasisConfig{dim});
    worst = std::max(worst, 1.0 - fidelity(rho, rec));
  }
  double t = timer.seconds();
  report(4, "quantum_reconstruction", worst <= 1e-3 && t < 120.0, worst,
         120.0, t);
}

// 5. kernel-route star product against the trace route on random densities.
void criterion_kernel_vs_trace() {
  Timer timer;
  std::mt19937_64 rng(1005);
  std::uniform_real_distribution<double> ux(-1.0, 1.0), um(-1.2, 1.2),
      un(0.8, 1.5);
  double worst = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    DensityMatrix a = random_density(8, rng), b = random_density(8, rng);
    SymbolField fa = symbol_of_operator(a.op());
    SymbolField fb = symbol_of_operator(b.op());
    for (int k = 0; k < 5; ++k) {
      double nu = un(rng) * (k % 2 == 0 ? 1.0 : -1.0);
      LabelPoint x{ux(rng), {um(rng), nu}};
      Complex ref = star_trace(a.op(), b.op(), x);
      Complex ker = star_via_kernel(fa, fb, x);
      worst = std::max(worst,
                       std::abs(ker - ref) / std::max(std::abs(ref), 1e-3));
    }
  }
  report(5, "kernel_vs_trace_star", worst <= 1e-3, worst, 240.0,
         timer.seconds());
}

// 6. associativity through both routes.
void criterion_associativity() {
  Timer timer;
  std::mt19937_64 rng(1006);
  std::uniform_real_distribution<double> ux(-1.0, 1.0), un(0.8, 1.5);
  double worst_trace = 0.0;
  for (int t = 0; t < 50; ++t) {
    OperatorMatrix a = random_hermitian(8, rng), b = random_hermitian(8, rng),
                   c = random_hermitian(8, rng);
    LabelPoint x{ux(rng), {ux(rng), un(rng)}};
    worst_trace = std::max(worst_trace, associativity_residual(a, b, c, x));
  }
  double worst_kernel = 0.0;
  for (int t = 0; t < 5; ++t) {
    OperatorMatrix a = random_density(8, rng).op();
    OperatorMatrix b = random_density(8, rng).op();
    OperatorMatrix c = random_density(8, rng).op();
    LabelPoint x{ux(rng), {ux(rng), un(rng)}};
    worst_kernel =
        std::max(worst_kernel, associativity_residual_kernel(a, b, c, x));
  }
  report(6, "associativity", worst_trace <= 1e-10 && worst_kernel <= 2e-3,
         std::max(worst_trace, worst_kernel), 240.0, timer.seconds());
}

// 7. classical kernel exchange symmetry plus the quantum/classical ratio.
void criterion_kernel_symmetry() {
  Timer timer;
  std::mt19937_64 rng(1007);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double sym = 0.0, ratio = 0.0;
  for (int t = 0; t < 1000; ++t) {
    LabelPoint x1{u(rng), {u(rng), u(rng)}}, x2{u(rng), {u(rng), u(rng)}};
    LabelPoint x{u(rng), {u(rng), 0.5 + std::abs(u(rng))}};
    KernelValue ab = kernel_classical(x1, x2, x);
    KernelValue ba = kernel_classical(x2, x1, x);
    sym = std::max(sym, std::max(std::abs(ab.prefactor - ba.prefactor),
                                 std::abs(ab.constraint_residual -
                                          ba.constraint_residual)));
    Complex expect = std::exp(Complex(
        0, 0.5 * (x2.frame.mu * x1.frame.nu - x1.frame.mu * x2.frame.nu)));
    ratio = std::max(ratio, std::abs(kernel_ratio_check(x1, x2, x) - expect));
  }
  report(7, "kernel_symmetry_and_ratio", sym == 0.0 && ratio <= 1e-12,
         std::max(sym, ratio), 60.0, timer.seconds());
}

// 8. tomographic mean values against direct traces.
void criterion_mean_values() {
  Timer timer;
  std::vector<StateSpec> states = {FockSpec{0}, FockSpec{1},
                                   FockSpec{2}, FockSpec{3},
                                   CoherentSpec{Complex(1, 0)},
                                   ThermalSpec{0.5}};
  BasisConfig cfg{64};
  OperatorMatrix q = build_position(cfg), p = build_momentum(cfg);
  AxisGrid g{0.0, 0.05, 512};
  double worst = 0.0;
  for (const auto& spec : states) {
    DensityMatrix rho = density_state(spec, cfg);
    std::vector<TomogramSlice> slices;
    for (auto [mu, nu] : std::vector<std::pair<double, double>>{
             {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}})
      slices.push_back(quantum_tomogram(rho, {mu, nu}, g));
    auto tr = [&](const OperatorMatrix& op) {
      return (rho.op() * op).trace().real();
    };
    std::vector<std::pair<PolyObservable, double>> cases = {
        {PolyObservable::One, 1.0},
        {PolyObservable::Q, tr(q)},
        {PolyObservable::P, tr(p)},
        {PolyObservable::Q2, tr(q * q)},
        {PolyObservable::P2, tr(p * p)},
        {PolyObservable::QPPQ, tr(q * p + p * q)}};
    for (auto [obs, expect] : cases)
      worst = std::max(worst, std::abs(mean_value(slices, obs) - expect));
  }
  report(8, "mean_values", worst <= 1e-4, worst, 60.0, timer.seconds());
}

// 9. Weyl symbols of the coordinate operators.
void criterion_weyl() {
  Timer timer;
  BasisConfig cfg{64};
  OperatorMatrix q = build_position(cfg), p = build_momentum(cfg);
  double worst = 0.0;
  for (double qq = -2.0; qq <= 2.0; qq += 0.5)
    for (double pp = -2.0; pp <= 2.0; pp += 0.5) {
      worst = std::max(worst, std::abs(weyl_symbol(q, qq, pp) - qq));
      worst = std::max(worst, std::abs(weyl_symbol(p, qq, pp) - pp));
    }
  report(9, "weyl_coordinates", worst <= 1e-3, worst, 60.0, timer.seconds());
}

// 10. regularized identity pairing approaches 1.
void criterion_pairing() {
  Timer timer;
  double err = std::abs(regularized_identity_pairing(1e-3) - 1.0);
  report(10, "identity_pairing", err <= 1e-2, err, 30.0, timer.seconds());
}

// 11. full verification suite, single-core wall-clock budget.
void criterion_full_suite() {
  Timer timer;
  SuiteConfig cfg;
  cfg.profile = SuiteProfile::Full;
  SuiteReport rep = run_suite(cfg);
  double t = timer.seconds();
  bool ok = rep.all_passed() && t < 300.0;
  double worst = 0.0;
  for (const auto& c : rep.checks)
    if (c.status == "fail") {
      worst = std::max(worst, c.measured);
      std::printf("  suite check failed: %s (measured %.3e, tol %.3e)\n",
                  c.name.c_str(), c.measured, c.tolerance);
    }
  report(11, "full_verification_suite", ok, worst, 300.0, t);
}

}  // namespace

int main() {
  criterion_tomogram_panel();
  criterion_goldens();
  criterion_classical_inverse();
  criterion_quantum_reconstruction();
  criterion_kernel_vs_trace();
  criterion_associativity();
  criterion_kernel_symmetry();
  criterion_mean_values();
  criterion_weyl();
  criterion_pairing();
  criterion_full_suite();
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
