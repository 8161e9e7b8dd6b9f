#include "symplectomo/star_product.hpp"

#include <cmath>
#include <memory>

namespace symplectomo {

Complex displacement_element(int m, int n, Complex gamma) {
  if (m < 0 || n < 0) fail(ErrorCode::ConfigError, "negative Fock index");
  const double u = std::norm(gamma);
  const int d = m - n;
  const Complex z = d >= 0 ? gamma : -std::conj(gamma);
  const int pmin = std::min(m, n);
  Complex sum = 0.0;
  for (int k = 0; k <= pmin; ++k) {
    double lc = 0.5 * (std::lgamma(m + 1.0) + std::lgamma(n + 1.0)) -
                std::lgamma(std::abs(d) + k + 1.0) - std::lgamma(k + 1.0) -
                std::lgamma(pmin - k + 1.0);
    double c = std::exp(lc) * ((k % 2 == 0) ? 1.0 : -1.0);
    sum += c * std::pow(u, k);
  }
  return std::exp(-0.5 * u) * std::pow(z, std::abs(d)) * sum;
}

namespace {

// Tr(A exp(i(mu q + nu p))) as e^{-u/2} sum_d z^d P_d(u): closed-form
// displacement matrix elements collected into per-diagonal polynomials in
// u = |gamma|^2. Exact for finite matrices, so it stays trustworthy at
// frame radii where the truncated-eigenbasis route has already broken down.
struct CharFnPoly {
  int dim = 0;
  std::vector<std::vector<Complex>> polys;  // index d + dim - 1

  explicit CharFnPoly(const OperatorMatrix& A) : dim(int(A.rows())) {
    polys.assign(2 * dim - 1, {});
    for (auto& p : polys) p.assign(dim, Complex(0, 0));
    for (int m = 0; m < dim; ++m)
      for (int n = 0; n < dim; ++n) {
        Complex a = A(n, m);  // Tr(A D) pairs A(n,m) with <m|D|n>
        if (a == Complex(0, 0)) continue;
        int d = m - n, pmin = std::min(m, n);
        for (int k = 0; k <= pmin; ++k) {
          double lc = 0.5 * (std::lgamma(m + 1.0) + std::lgamma(n + 1.0)) -
                      std::lgamma(std::abs(d) + k + 1.0) -
                      std::lgamma(k + 1.0) - std::lgamma(pmin - k + 1.0);
          double c = std::exp(lc) * ((k % 2 == 0) ? 1.0 : -1.0);
          polys[d + dim - 1][k] += a * c;
        }
      }
  }

  Complex horner(int d, double u) const {
    const auto& p = polys[d + dim - 1];
    Complex acc = 0.0;
    for (int k = dim - 1; k >= 0; --k) acc = acc * u + p[k];
    return acc;
  }

  Complex operator()(double mu, double nu) const {
    Complex gamma = Complex(0, 1) * Complex(mu, nu) / std::sqrt(2.0);
    double u = std::norm(gamma);
    Complex zp = 1.0, zm = 1.0;
    Complex acc = horner(0, u);
    for (int d = 1; d < dim; ++d) {
      zp *= gamma;
      zm *= -std::conj(gamma);
      acc += zp * horner(d, u) + zm * horner(-d, u);
    }
    return std::exp(-0.5 * u) * acc;
  }
};

OperatorMatrix parity_operator(int dim) {
  OperatorMatrix p = OperatorMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) p(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
  return p;
}

// Full <n|D(gamma)|m> matrix through the generalized-Laguerre three-term
// recurrence; the explicit factorial sum cancels catastrophically once the
// indices reach ~40, this stays accurate at any dim that fits in memory.
OperatorMatrix displacement_matrix(int dim, Complex gamma) {
  const double u = std::norm(gamma);
  if (u == 0.0) return OperatorMatrix::Identity(dim, dim);
  OperatorMatrix D(dim, dim);
  const double lg = std::log(std::abs(gamma));
  const double argp = std::arg(gamma), argm = std::arg(-std::conj(gamma));
  for (int d = 0; d < dim; ++d) {
    double Lm1 = 0.0, L = 1.0;  // L_m^{(d)}(u), starting at m = 0
    for (int m = 0; m + d < dim; ++m) {
      double lmag = 0.5 * (std::lgamma(m + 1.0) - std::lgamma(m + d + 1.0)) -
                    0.5 * u + d * lg;
      double mag = std::exp(lmag);
      D(m + d, m) = mag * std::exp(Complex(0, d * argp)) * L;
      D(m, m + d) = mag * std::exp(Complex(0, d * argm)) * L;
      double Ln = ((2.0 * m + 1.0 + d - u) * L - (m + d) * Lm1) / (m + 1.0);
      Lm1 = L;
      L = Ln;
    }
  }
  return D;
}

}  // namespace

Complex dequantize_symbol(const OperatorMatrix& A, const LabelPoint& x) {
  x.frame.require_valid();
  const int dim = int(A.rows());
  if (A.cols() != dim) fail(ErrorCode::DimensionMismatch, "A must be square");
  if (dim <= 16) {
    // Operators that saturate a small truncation have char-fn support past
    // the band the eigen-comb route can resolve, so integrate the exact
    // closed form instead: w(X) = (1/2pi) int G(k mu, k nu) e^{-ikX} dk.
    CharFnPoly cf(A);
    double umax = 80.0;  // e^{-u/2} u^{dim-1} tail below ~e^{-40}
    for (int it = 0; it < 8; ++it)
      umax = 2.0 * (40.0 + (dim - 1) * std::log(umax));
    const double K = std::sqrt(2.0 * umax) / x.frame.radius();
    double h =
        std::min(K / 2048.0, kPi / (20.0 * std::max(1.0, std::abs(x.X))));
    const int half = int(std::ceil(K / h));
    h = K / half;
    const int N = 2 * half;
    Complex acc = 0.0;
    for (int i = 0; i <= N; ++i) {
      double k = -K + i * h;
      double wgt = (i == 0 || i == N) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      acc += wgt * cf(k * x.frame.mu, k * x.frame.nu) *
             std::exp(Complex(0, -k * x.X));
    }
    return acc * h / (6.0 * kPi);
  }
  EigenSystem sys = eig_hermitian(quadrature_operator(x.frame, BasisConfig{dim}));
  // band-limited delta: (1/2pi) int_{-kc}^{kc} e^{ik(X - lambda)} dk
  const double kc = char_fn_radius(dim) / x.frame.radius();
  Complex acc = 0.0;
  for (int j = 0; j < dim; ++j) {
    ComplexVector v = sys.vectors.col(j);
    Complex c = (v.adjoint() * A * v)(0);
    double u = x.X - sys.values(j);
    double kern = std::abs(u) < 1e-12 ? kc / kPi : std::sin(kc * u) / (kPi * u);
    acc += c * kern;
  }
  return acc;
}

Complex star_trace(const OperatorMatrix& A, const OperatorMatrix& B,
                   const LabelPoint& x) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    fail(ErrorCode::DimensionMismatch, "star_trace operands differ in dim");
  return dequantize_symbol(A * B, x);
}

KernelValue kernel_quantum(const LabelPoint& x1, const LabelPoint& x2,
                           const LabelPoint& x) {
  if (x.frame.nu == 0.0)
    fail(ErrorCode::NuZeroInKernel,
         "closed-form kernel divides by nu; use the trace route at nu = 0");
  const auto &f1 = x1.frame, &f2 = x2.frame, &f = x.frame;
  KernelValue kv;
  kv.constraint_residual = f.mu * (f1.nu + f2.nu) - f.nu * (f1.mu + f2.mu);
  double phase = 0.5 * ((f1.nu * f2.mu - f2.nu * f1.mu) + 2.0 * x1.X +
                        2.0 * x2.X - 2.0 * (f1.nu + f2.nu) * x.X / f.nu);
  kv.prefactor = std::exp(Complex(0, phase)) / (4.0 * kPi * kPi);
  return kv;
}

KernelValue kernel_classical(const LabelPoint& x1, const LabelPoint& x2,
                             const LabelPoint& x) {
  if (x.frame.nu == 0.0)
    fail(ErrorCode::NuZeroInKernel,
         "closed-form kernel divides by nu; use the trace route at nu = 0");
  const auto &f1 = x1.frame, &f2 = x2.frame, &f = x.frame;
  KernelValue kv;
  kv.constraint_residual = f.mu * (f1.nu + f2.nu) - f.nu * (f1.mu + f2.mu);
  double phase = x1.X + x2.X - x.X * (f1.nu + f2.nu) / f.nu;
  kv.prefactor = std::exp(Complex(0, phase)) / (4.0 * kPi * kPi);
  return kv;
}

Complex kernel_ratio_check(const LabelPoint& x1, const LabelPoint& x2,
                           const LabelPoint& x) {
  return kernel_quantum(x1, x2, x).prefactor /
         kernel_classical(x1, x2, x).prefactor;
}

namespace {

Complex kernel_route_pass(const SymbolField& fA, const SymbolField& fB,
                          const LabelPoint& x, double extent, double step,
                          KernelKind kind) {
  const double mu = x.frame.mu, nu = x.frame.nu;
  const int half = std::max(1, int(std::lround(extent / step)));
  const int n = 2 * half + 1;
  auto node = [&](int i) { return (i - half) * step; };
  auto tw = [&](int i) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; };

  // G_A on its fixed grid once; G_B arguments shift with (nu1, nu2)
  Eigen::MatrixXcd GA(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) GA(i, j) = fA.char_fn(node(i), node(j));

  Complex total = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    double nu1 = node(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      double nu2 = node(i2);
      double s = nu1 + nu2;
      double c = mu / nu * s;  // delta constraint resolved for mu2
      Complex outer = std::exp(Complex(0, -s * x.X / nu)) * tw(i1) * tw(i2);
      if (kind == KernelKind::Quantum)
        outer *= std::exp(Complex(0, 0.5 * nu1 * c));
      Complex inner = 0.0;
      for (int j = 0; j < n; ++j) {
        double mu1 = node(j);
        Complex term = GA(j, i1) * fB.char_fn(c - mu1, nu2) * tw(j);
        if (kind == KernelKind::Quantum)
          term *= std::exp(Complex(0, -0.5 * s * mu1));
        inner += term;
      }
      total += outer * inner;
    }
  }
  return total * std::pow(step, 3) / (4.0 * kPi * kPi * std::abs(nu));
}

}  // namespace

Complex star_via_kernel(const SymbolField& fA, const SymbolField& fB,
                        const LabelPoint& x, const QuadratureConfig& quad,
                        KernelKind kind) {
  if (x.frame.nu == 0.0)
    fail(ErrorCode::NuZeroInKernel,
         "kernel route undefined at nu = 0; use the trace route");
  if (!fA.char_fn || !fB.char_fn)
    fail(ErrorCode::ConfigError,
         "kernel route needs symbols carrying characteristic functions");
  double step = quad.step;
  Complex coarse = kernel_route_pass(fA, fB, x, quad.extent, step, kind);
  for (int r = 0; r < quad.max_refinements; ++r) {
    step *= 0.5;
    Complex fine = kernel_route_pass(fA, fB, x, quad.extent, step, kind);
    double scale = std::max(std::abs(fine), 1e-3);
    if (std::abs(fine - coarse) <= quad.rel_tol * scale) return fine;
    coarse = fine;
  }
  fail(ErrorCode::QuadratureNotConverged,
       "kernel-route quadrature did not stabilize under step halving");
}

OperatorMatrix quantize_operator(const SymbolField& symbol,
                                 const FrameLattice& lattice,
                                 const AxisGrid& x_axis, const BasisConfig& cfg,
                                 const TomographyConfig& tcfg,
                                 QuantizeDiagnostics* diag) {
  std::vector<Complex> fourier(lattice.nodes.size());
  for (size_t i = 0; i < lattice.nodes.size(); ++i) {
    const auto& fr = lattice.nodes[i].frame;
    if (symbol.char_fn) {
      fourier[i] = symbol.char_fn(fr.mu, fr.nu);
    } else {
      Complex acc = 0.0;
      for (int k = 0; k < x_axis.count; ++k) {
        double w = (k == 0 || k == x_axis.count - 1) ? 0.5 : 1.0;
        double X = x_axis.point(k);
        acc += w * symbol.evaluator(LabelPoint{X, fr}) *
               std::exp(Complex(0, X));
      }
      fourier[i] = acc * x_axis.step;
    }
  }
  double max_boundary = 0.0;
  for (size_t i = 0; i < lattice.nodes.size(); ++i)
    if (lattice.nodes[i].boundary)
      max_boundary = std::max(max_boundary, std::abs(fourier[i]));
  detail::check_boundary_decay(fourier, lattice, tcfg.boundary_decay_tol);
  OperatorMatrix out = detail::reconstruct_operator(fourier, lattice, cfg, tcfg);
  if (diag) {
    diag->hermiticity_defect = hermiticity_defect(out);
    diag->trace_deviation = std::abs(out.trace() - Complex(1.0, 0.0));
    diag->max_boundary_fourier = max_boundary;
  }
  return out;
}

double associativity_residual(const OperatorMatrix& A, const OperatorMatrix& B,
                              const OperatorMatrix& C, const LabelPoint& x) {
  if (A.rows() != B.rows() || B.rows() != C.rows())
    fail(ErrorCode::DimensionMismatch, "associativity operands differ in dim");
  OperatorMatrix left = (A * B) * C;
  OperatorMatrix right = A * (B * C);
  return std::abs(dequantize_symbol(left, x) - dequantize_symbol(right, x));
}

double associativity_residual_kernel(const OperatorMatrix& A,
                                     const OperatorMatrix& B,
                                     const OperatorMatrix& C,
                                     const LabelPoint& x,
                                     const QuadratureConfig& quad) {
  if (A.rows() != B.rows() || B.rows() != C.rows())
    fail(ErrorCode::DimensionMismatch, "associativity operands differ in dim");
  Complex left = star_via_kernel(symbol_of_operator(A * B),
                                 symbol_of_operator(C), x, quad);
  Complex right = star_via_kernel(symbol_of_operator(A),
                                  symbol_of_operator(B * C), x, quad);
  return std::abs(left - right);
}

Complex dual_symbol(const OperatorMatrix& A, const LabelPoint& x) {
  const int dim = int(A.rows());
  if (A.cols() != dim) fail(ErrorCode::DimensionMismatch, "A must be square");
  Complex phase = std::exp(Complex(0, x.X)) / (2.0 * kPi);
  if (x.frame.is_origin()) return phase * A.trace();
  return phase *
         (A * exp_displacement(0.0, x.frame, BasisConfig{dim})).trace();
}

Complex kernel_dual(const LabelPoint& x1, const LabelPoint& x2,
                    const LabelPoint& x, const BasisConfig& cfg, double eps) {
  cfg.validate();
  if (eps <= 0.0) fail(ErrorCode::ConfigError, "smearing width must be > 0");
  auto smeared_u = [&](const LabelPoint& xi) {
    xi.frame.require_valid();
    EigenSystem sys = eig_hermitian(quadrature_operator(xi.frame, cfg));
    ComplexVector g(cfg.dim);
    for (int j = 0; j < cfg.dim; ++j) {
      double u = xi.X - sys.values(j);
      g(j) = std::exp(-u * u / (eps * eps)) / (eps * std::sqrt(kPi));
    }
    return OperatorMatrix(sys.vectors * g.asDiagonal() *
                          sys.vectors.adjoint());
  };
  OperatorMatrix u1 = smeared_u(x1), u2 = smeared_u(x2);
  OperatorMatrix d = x.frame.is_origin()
                         ? OperatorMatrix::Identity(cfg.dim, cfg.dim)
                         : exp_displacement(0.0, x.frame, cfg);
  return std::exp(Complex(0, x.X)) / (2.0 * kPi) * (u1 * u2 * d).trace();
}

namespace {

const TomogramSlice& find_slice(const std::vector<TomogramSlice>& slices,
                                double mu, double nu) {
  for (const auto& s : slices)
    if (std::abs(s.frame.mu - mu) < 1e-9 && std::abs(s.frame.nu - nu) < 1e-9)
      return s;
  fail(ErrorCode::MissingRequiredFrame,
       "mean_value needs slices at frames (1,0), (0,1) and (1,1)");
}

}  // namespace

double mean_value(const std::vector<TomogramSlice>& slices,
                  PolyObservable observable) {
  switch (observable) {
    case PolyObservable::One:
      return find_slice(slices, 1, 0).trapezoid_integral();
    case PolyObservable::Q:
      return tomogram_moments(find_slice(slices, 1, 0), 1);
    case PolyObservable::P:
      return tomogram_moments(find_slice(slices, 0, 1), 1);
    case PolyObservable::Q2:
      return tomogram_moments(find_slice(slices, 1, 0), 2);
    case PolyObservable::P2:
      return tomogram_moments(find_slice(slices, 0, 1), 2);
    case PolyObservable::QPPQ:
      return tomogram_moments(find_slice(slices, 1, 1), 2) -
             tomogram_moments(find_slice(slices, 1, 0), 2) -
             tomogram_moments(find_slice(slices, 0, 1), 2);
  }
  fail(ErrorCode::ConfigError, "unknown observable");
}

Complex weyl_symbol(const OperatorMatrix& A, double q, double p) {
  const int dim = int(A.rows());
  if (A.cols() != dim) fail(ErrorCode::DimensionMismatch, "A must be square");
  // 2 Tr(A D(gamma) Pi) with gamma = sqrt(2)(q + ip). Sharp truncation of the
  // Fock sum leaves slowly decaying oscillatory tails, so the index sum gets a
  // supergaussian window; flat through ~0.3*dim, then rolls off smoothly.
  const Complex gamma = std::sqrt(2.0) * Complex(q, p);
  OperatorMatrix D = displacement_matrix(dim, gamma);
  auto win = [dim](int k) {
    double t = double(k) / (0.4 * dim);
    double t2 = t * t;
    double t4 = t2 * t2;
    return std::exp(-t4 * t4);
  };
  Complex acc = 0.0;
  for (int m = 0; m < dim; ++m) {
    const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
    for (int n = 0; n < dim; ++n)
      acc += A(m, n) * sgn * win(m) * win(n) * D(n, m);
  }
  return 2.0 * acc;
}

DistributionalSymbol distributional_symbol(NamedOperator which) {
  using XP = DistributionalTerm::XProfile;
  switch (which) {
    case NamedOperator::Identity:
      return {{{-kPi, XP::AbsX, 0, 0}}};
    case NamedOperator::Position:
      return {{{kPi / 2.0, XP::XAbsX, 1, 0}}};
    case NamedOperator::Momentum:
      return {{{kPi / 2.0, XP::XAbsX, 0, 1}}};
  }
  fail(ErrorCode::ConfigError, "unknown named operator");
}

double regularized_identity_pairing(double eps) {
  if (eps <= 0.0) fail(ErrorCode::ConfigError, "eps must be > 0");
  // (1/2pi)(-pi) * 2 int_0^inf X cos(X) e^{-eps X^2} dX, composite Simpson
  double xmax = std::sqrt(40.0 / eps);
  int n = std::max(2000, int(xmax / 0.01));
  if (n % 2 != 0) ++n;
  double h = xmax / n;
  auto f = [&](double X) { return X * std::cos(X) * std::exp(-eps * X * X); };
  double s = f(0.0) + f(xmax);
  for (int i = 1; i < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f(i * h);
  return -(s * h / 3.0);
}

namespace detail {

std::function<Complex(double, double)> closed_form_char_fn(OperatorMatrix A) {
  auto poly = std::make_shared<CharFnPoly>(A);
  return [poly](double mu, double nu) { return (*poly)(mu, nu); };
}

}  // namespace detail

SymbolField symbol_of_operator(OperatorMatrix A) {
  auto shared = std::make_shared<OperatorMatrix>(std::move(A));
  auto poly = std::make_shared<CharFnPoly>(*shared);
  SymbolField f;
  f.declared = SymbolClass::TraceClassNumeric;
  f.evaluator = [shared](const LabelPoint& x) {
    return dequantize_symbol(*shared, x);
  };
  f.char_fn = [poly](double mu, double nu) { return (*poly)(mu, nu); };
  return f;
}

SymbolField symbol_of_classical(const GaussianForm& g) {
  g.validate();
  GaussianForm gc = g;
  SymbolField f;
  f.declared = SymbolClass::TraceClassNumeric;
  f.evaluator = [gc](const LabelPoint& x) {
    x.frame.require_valid();
    double mean = x.frame.mu * gc.mean_q + x.frame.nu * gc.mean_p;
    double var = x.frame.mu * x.frame.mu * gc.cov_qq +
                 2.0 * x.frame.mu * x.frame.nu * gc.cov_qp +
                 x.frame.nu * x.frame.nu * gc.cov_pp;
    double u = x.X - mean;
    return Complex(std::exp(-0.5 * u * u / var) /
                   std::sqrt(2.0 * kPi * var));
  };
  f.char_fn = [gc](double mu, double nu) {
    double mean = mu * gc.mean_q + nu * gc.mean_p;
    double var = mu * mu * gc.cov_qq + 2.0 * mu * nu * gc.cov_qp +
                 nu * nu * gc.cov_pp;
    return std::exp(Complex(-0.5 * var, mean));
  };
  return f;
}

}  // namespace symplectomo
