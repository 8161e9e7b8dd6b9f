#include "symplectomo/tomography.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>

#include "symplectomo/star_product.hpp"

namespace symplectomo {

double TomogramSlice::trapezoid_integral() const {
  double s = 0.0;
  for (int i = 0; i < x_axis.count; ++i) {
    double w = (i == 0 || i == x_axis.count - 1) ? 0.5 : 1.0;
    s += w * density(i);
  }
  return s * x_axis.step;
}

Complex slice_fourier(const TomogramSlice& slice) {
  Complex s = 0.0;
  for (int i = 0; i < slice.x_axis.count; ++i) {
    double w = (i == 0 || i == slice.x_axis.count - 1) ? 0.5 : 1.0;
    s += w * slice.density(i) * std::exp(Complex(0, slice.x_axis.point(i)));
  }
  return s * slice.x_axis.step;
}

FrameLattice make_polar_lattice(double cutoff, double dr, double dtheta) {
  if (cutoff <= 0.0 || dr <= 0.0 || dtheta <= 0.0)
    fail(ErrorCode::ConfigError, "polar lattice parameters must be positive");
  int nr = std::max(2, static_cast<int>(std::lround(cutoff / dr)));
  if (nr % 2 != 0) ++nr;  // Simpson needs an even interval count
  double h = cutoff / nr;
  int ntheta = std::max(4, static_cast<int>(std::lround(2.0 * kPi / dtheta)));
  double th_step = 2.0 * kPi / ntheta;

  FrameLattice lat;
  lat.cutoff = cutoff;
  lat.nodes.reserve(static_cast<size_t>(nr) * ntheta);
  for (int i = 1; i <= nr; ++i) {
    double r = i * h;
    double simpson = (i == nr) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    double wr = simpson * h / 3.0;
    for (int a = 0; a < ntheta; ++a) {
      double th = a * th_step;
      FrameNode node;
      node.frame = ReferenceFrame{r * std::cos(th), r * std::sin(th)};
      node.weight = r * wr * th_step;
      node.boundary = (i == nr);
      lat.nodes.push_back(node);
    }
  }
  return lat;
}

namespace {

double gaussian_density(double u, double sigma2) {
  return std::exp(-0.5 * u * u / sigma2) / std::sqrt(2.0 * kPi * sigma2);
}

TomogramSlice gaussian_closed_form(const GaussianForm& g,
                                   const ReferenceFrame& frame,
                                   const AxisGrid& x_axis) {
  double mean = frame.mu * g.mean_q + frame.nu * g.mean_p;
  double var = frame.mu * frame.mu * g.cov_qq +
               2.0 * frame.mu * frame.nu * g.cov_qp +
               frame.nu * frame.nu * g.cov_pp;
  TomogramSlice slice{frame, x_axis, RealVector(x_axis.count)};
  for (int i = 0; i < x_axis.count; ++i)
    slice.density(i) = gaussian_density(x_axis.point(i) - mean, var);
  return slice;
}

double bilinear(const GridForm& grid, double q, double p) {
  const auto& qa = grid.q_axis;
  const auto& pa = grid.p_axis;
  double fq = (q - qa.lo()) / qa.step;
  double fp = (p - pa.lo()) / pa.step;
  int i = static_cast<int>(std::floor(fq));
  int j = static_cast<int>(std::floor(fp));
  if (i < 0 || j < 0 || i + 1 >= qa.count || j + 1 >= pa.count) return 0.0;
  double a = fq - i, b = fp - j;
  return (1 - a) * (1 - b) * grid.values(i, j) + a * (1 - b) * grid.values(i + 1, j) +
         (1 - a) * b * grid.values(i, j + 1) + a * b * grid.values(i + 1, j + 1);
}

void require_support_covered(const GridForm& grid) {
  // mass on the outermost cells signals a distribution leaking off the grid
  double edge = 0.0, total = 0.0;
  for (int i = 0; i < grid.q_axis.count; ++i)
    for (int j = 0; j < grid.p_axis.count; ++j) {
      double v = grid.values(i, j);
      total += v;
      if (i == 0 || j == 0 || i == grid.q_axis.count - 1 ||
          j == grid.p_axis.count - 1)
        edge += v;
    }
  if (total <= 0.0)
    fail(ErrorCode::SupportNotCovered, "grid distribution has no mass");
  if (edge / total > 1e-6)
    fail(ErrorCode::SupportNotCovered,
         "grid distribution has mass on the boundary cells");
}

TomogramSlice grid_radon(const GridForm& grid, const ReferenceFrame& frame,
                         const AxisGrid& x_axis) {
  require_support_covered(grid);
  TomogramSlice slice{frame, x_axis, RealVector::Zero(x_axis.count)};
  // integrate along the line mu q + nu p = X over the better-conditioned axis
  bool over_q = std::abs(frame.nu) >= std::abs(frame.mu);
  if (over_q) {
    // p = (X - mu q)/nu, dp slice weight 1/|nu|
    for (int ix = 0; ix < x_axis.count; ++ix) {
      double X = x_axis.point(ix);
      double acc = 0.0;
      for (int i = 0; i < grid.q_axis.count; ++i) {
        double q = grid.q_axis.point(i);
        double w = (i == 0 || i == grid.q_axis.count - 1) ? 0.5 : 1.0;
        acc += w * bilinear(grid, q, (X - frame.mu * q) / frame.nu);
      }
      slice.density(ix) = acc * grid.q_axis.step / std::abs(frame.nu);
    }
  } else {
    for (int ix = 0; ix < x_axis.count; ++ix) {
      double X = x_axis.point(ix);
      double acc = 0.0;
      for (int j = 0; j < grid.p_axis.count; ++j) {
        double p = grid.p_axis.point(j);
        double w = (j == 0 || j == grid.p_axis.count - 1) ? 0.5 : 1.0;
        acc += w * bilinear(grid, (X - frame.nu * p) / frame.mu, p);
      }
      slice.density(ix) = acc * grid.p_axis.step / std::abs(frame.mu);
    }
  }
  return slice;
}

}  // namespace

TomogramSlice classical_tomogram(const ClassicalDistribution& f,
                                 const ReferenceFrame& frame,
                                 const AxisGrid& x_axis,
                                 const TomographyConfig& cfg) {
  frame.require_valid();
  x_axis.validate();
  if (const auto* g = std::get_if<GaussianForm>(&f.form)) {
    g->validate();
    return gaussian_closed_form(*g, frame, x_axis);
  }
  if (const auto* pt = std::get_if<PointForm>(&f.form)) {
    double eps = cfg.smearing_scale * x_axis.step;
    double X0 = frame.mu * pt->q0 + frame.nu * pt->p0;
    TomogramSlice slice{frame, x_axis, RealVector(x_axis.count)};
    for (int i = 0; i < x_axis.count; ++i) {
      double u = x_axis.point(i) - X0;
      slice.density(i) = std::exp(-u * u / (eps * eps)) / (eps * std::sqrt(kPi));
    }
    return slice;
  }
  TomogramSlice slice = grid_radon(std::get<GridForm>(f.form), frame, x_axis);
  if (f.convention == Convention::Wigner) slice.density /= 2.0 * kPi;
  return slice;
}

TomogramSlice quantum_tomogram(const DensityMatrix& rho,
                               const ReferenceFrame& frame,
                               const AxisGrid& x_axis) {
  frame.require_valid();
  x_axis.validate();
  const int dim = rho.dim();
  const int n = x_axis.count;

  // characteristic function along the frame ray, with a k-window past which
  // the values are either corrupted (eigen-comb route) or negligible (closed
  // form). Small truncations get the closed form: the comb's validity radius
  // shrinks below the state's real support there and windowing it away would
  // discard genuine mass.
  std::function<Complex(double)> char_line;
  double k_cut;
  if (dim <= 16) {
    auto cf = detail::closed_form_char_fn(rho.op());
    char_line = [cf, frame](double k) {
      // comb convention below is Tr(rho e^{-ik(mu q + nu p)})
      return cf(-k * frame.mu, -k * frame.nu);
    };
    double umax = 80.0;  // e^{-u/2} u^{dim-1} tail below ~e^{-40}
    for (int it = 0; it < 8; ++it)
      umax = 2.0 * (40.0 + (dim - 1) * std::log(umax));
    k_cut = std::sqrt(2.0 * umax) / frame.radius();
  } else {
    EigenSystem sys =
        eig_hermitian(quadrature_operator(frame, BasisConfig{dim}));
    RealVector weights(dim);
    for (int j = 0; j < dim; ++j) {
      ComplexVector v = sys.vectors.col(j);
      weights(j) = (v.adjoint() * rho.op() * v)(0).real();
    }
    char_line = [sys = std::move(sys), weights = std::move(weights),
                 dim](double k) {
      Complex c = 0.0;
      for (int j = 0; j < dim; ++j)
        c += weights(j) * std::exp(Complex(0, -k * sys.values(j)));
      return c;
    };
    k_cut = char_fn_radius(dim) / frame.radius();
  }

  // k grid tied to the x grid by dk * dx * n = 2pi
  const double dk = 2.0 * kPi / (n * x_axis.step);
  std::vector<Complex> a(n, Complex(0, 0));
  for (int m = 0; m < n; ++m) {
    double k = (m - n / 2) * dk;
    if (std::abs(k) > k_cut) continue;
    double sign = (m % 2 == 0) ? 1.0 : -1.0;
    a[m] = char_line(k) *
           std::exp(Complex(0, (m - n / 2) * dk * x_axis.center)) * sign;
  }
  Eigen::FFT<double> fft;
  std::vector<Complex> spectrum(n);
  fft.inv(spectrum, a);  // (1/n) sum_m a_m e^{+2pi i m j / n}
  Complex corner = std::pow(Complex(0, 1), n % 4);  // e^{i pi n / 2}

  TomogramSlice slice{frame, x_axis, RealVector(n)};
  double max_re = 0.0, max_im = 0.0;
  for (int i = 0; i < n; ++i) {
    double sign = (i % 2 == 0) ? 1.0 : -1.0;
    Complex w = spectrum[i] * double(n) * sign * corner * dk / (2.0 * kPi);
    slice.density(i) = w.real();
    max_re = std::max(max_re, std::abs(w.real()));
    max_im = std::max(max_im, std::abs(w.imag()));
  }
  if (max_im > 1e-8 * std::max(max_re, 1e-300))
    fail(ErrorCode::ImaginaryResidueTooLarge,
         "quantum tomogram has non-negligible imaginary part");
  return slice;
}

TomogramSlice quantum_tomogram_spectral(const DensityMatrix& rho,
                                        const ReferenceFrame& frame,
                                        const AxisGrid& x_axis,
                                        const TomographyConfig& cfg) {
  frame.require_valid();
  x_axis.validate();
  const int dim = rho.dim();
  EigenSystem sys = eig_hermitian(quadrature_operator(frame, BasisConfig{dim}));
  RealVector weights(dim);
  for (int j = 0; j < dim; ++j) {
    ComplexVector v = sys.vectors.col(j);
    weights(j) = (v.adjoint() * rho.op() * v)(0).real();
  }
  double eps = cfg.smearing_scale * x_axis.step;
  TomogramSlice slice{frame, x_axis, RealVector::Zero(x_axis.count)};
  for (int i = 0; i < x_axis.count; ++i) {
    double X = x_axis.point(i);
    double acc = 0.0;
    for (int j = 0; j < dim; ++j) {
      double u = X - sys.values(j);
      acc += weights(j) * std::exp(-u * u / (eps * eps));
    }
    slice.density(i) = acc / (eps * std::sqrt(kPi));
  }
  return slice;
}

TomogramSlice gaussian_smooth(const TomogramSlice& slice, double width) {
  const int n = slice.x_axis.count;
  const double dx = slice.x_axis.step;
  TomogramSlice out{slice.frame, slice.x_axis, RealVector::Zero(n)};
  int reach = static_cast<int>(std::ceil(6.0 * width / dx));
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = std::max(0, i - reach); j < std::min(n, i + reach + 1); ++j) {
      double u = (i - j) * dx;
      acc += slice.density(j) * std::exp(-u * u / (width * width));
    }
    out.density(i) = acc * dx / (width * std::sqrt(kPi));
  }
  return out;
}

namespace detail {

void check_boundary_decay(const std::vector<Complex>& fourier,
                          const FrameLattice& lattice, double tol) {
  for (size_t i = 0; i < lattice.nodes.size(); ++i)
    if (lattice.nodes[i].boundary && std::abs(fourier[i]) > tol)
      fail(ErrorCode::InsufficientFrameCoverage,
           "tomogram Fourier data has not decayed at the lattice cutoff");
}

OperatorMatrix reconstruct_operator(const std::vector<Complex>& fourier,
                                    const FrameLattice& lattice,
                                    const BasisConfig& cfg,
                                    const TomographyConfig& tcfg) {
  cfg.validate();
  if (fourier.size() != lattice.nodes.size())
    fail(ErrorCode::DimensionMismatch, "fourier data does not match lattice");
  const int dim = cfg.dim;
  const int dw = dim + tcfg.quantizer_padding;
  BasisConfig work{dw};
  OperatorMatrix acc = OperatorMatrix::Zero(dim, dim);
  for (size_t i = 0; i < lattice.nodes.size(); ++i) {
    const auto& node = lattice.nodes[i];
    if (node.weight == 0.0 || fourier[i] == Complex(0, 0)) continue;
    EigenSystem sys = eig_hermitian(quadrature_operator(node.frame, work));
    // top-left dim x dim block of exp(-i(mu q + nu p)) at the padded dim
    OperatorMatrix P = sys.vectors.topRows(dim);
    ComplexVector phases(dw);
    for (int j = 0; j < dw; ++j) phases(j) = std::exp(Complex(0, -sys.values(j)));
    acc += (fourier[i] * node.weight) * (P * phases.asDiagonal() * P.adjoint());
  }
  return acc / (2.0 * kPi);
}

}  // namespace detail

namespace {

// value(q,p) = pref * sum_i G_i w_i e^{-i(mu_i q + nu_i p)}, rank-1 updates
Eigen::MatrixXd inverse_fourier_grid(const std::vector<Complex>& fourier,
                                     const FrameLattice& lattice,
                                     const AxisGrid& q_axis,
                                     const AxisGrid& p_axis, double pref,
                                     double imag_tol) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(q_axis.count, p_axis.count);
  ComplexVector u(q_axis.count), v(p_axis.count);
  for (size_t i = 0; i < lattice.nodes.size(); ++i) {
    if (fourier[i] == Complex(0, 0)) continue;
    const auto& fr = lattice.nodes[i].frame;
    for (int a = 0; a < q_axis.count; ++a)
      u(a) = std::exp(Complex(0, -fr.mu * q_axis.point(a)));
    for (int b = 0; b < p_axis.count; ++b)
      v(b) = std::exp(Complex(0, -fr.nu * p_axis.point(b)));
    acc.noalias() += (fourier[i] * lattice.nodes[i].weight) * (u * v.transpose());
  }
  acc *= pref;
  double max_re = acc.real().cwiseAbs().maxCoeff();
  double max_im = acc.imag().cwiseAbs().maxCoeff();
  if (max_im > imag_tol * std::max(max_re, 1e-300))
    fail(ErrorCode::ImaginaryResidueTooLarge,
         "inverse Radon output has non-negligible imaginary part");
  return acc.real();
}

std::vector<Complex> fourier_per_slice(const std::vector<TomogramSlice>& slices,
                                       const FrameLattice& lattice,
                                       const TomographyConfig& cfg) {
  if (slices.size() != lattice.nodes.size())
    fail(ErrorCode::InsufficientFrameCoverage,
         "slice collection does not match the frame lattice");
  std::vector<Complex> fourier(slices.size());
  for (size_t i = 0; i < slices.size(); ++i) fourier[i] = slice_fourier(slices[i]);
  detail::check_boundary_decay(fourier, lattice, cfg.boundary_decay_tol);
  return fourier;
}

}  // namespace

ClassicalDistribution classical_inverse(const std::vector<TomogramSlice>& slices,
                                        const FrameLattice& lattice,
                                        const AxisGrid& q_axis,
                                        const AxisGrid& p_axis,
                                        const TomographyConfig& cfg) {
  auto fourier = fourier_per_slice(slices, lattice, cfg);
  GridForm grid{q_axis, p_axis,
                inverse_fourier_grid(fourier, lattice, q_axis, p_axis,
                                     1.0 / (4.0 * kPi * kPi), cfg.imag_residue_tol)};
  return ClassicalDistribution{std::move(grid), Convention::Plain};
}

WignerGrid wigner_from_tomogram(const std::vector<TomogramSlice>& slices,
                                const FrameLattice& lattice,
                                const AxisGrid& q_axis, const AxisGrid& p_axis,
                                const TomographyConfig& cfg) {
  auto fourier = fourier_per_slice(slices, lattice, cfg);
  return WignerGrid{q_axis, p_axis,
                    inverse_fourier_grid(fourier, lattice, q_axis, p_axis,
                                         1.0 / (2.0 * kPi), cfg.imag_residue_tol)};
}

DensityMatrix density_from_tomogram(const std::vector<TomogramSlice>& slices,
                                    const FrameLattice& lattice,
                                    const BasisConfig& cfg,
                                    const TomographyConfig& tcfg) {
  auto fourier = fourier_per_slice(slices, lattice, tcfg);
  OperatorMatrix raw = detail::reconstruct_operator(fourier, lattice, cfg, tcfg);
  // finite-lattice reconstructions carry O(1e-4) negative eigenvalue leakage
  return DensityMatrix::from_reconstruction(std::move(raw), -1e-3);
}

double tomogram_moments(const TomogramSlice& slice, int order) {
  if (order != 1 && order != 2)
    fail(ErrorCode::ConfigError, "tomogram_moments supports order 1 or 2");
  if (std::abs(slice.trapezoid_integral() - 1.0) > 1e-3)
    fail(ErrorCode::NotNormalized, "slice is not normalized within 1e-3");
  double s = 0.0;
  for (int i = 0; i < slice.x_axis.count; ++i) {
    double w = (i == 0 || i == slice.x_axis.count - 1) ? 0.5 : 1.0;
    double X = slice.x_axis.point(i);
    s += w * slice.density(i) * (order == 1 ? X : X * X);
  }
  return s * slice.x_axis.step;
}

std::vector<TomogramSlice> quantum_slices(const DensityMatrix& rho,
                                          const FrameLattice& lattice,
                                          const AxisGrid& x_axis) {
  BasisConfig cfg{rho.dim()};
  OperatorMatrix q = build_position(cfg), p = build_momentum(cfg);
  std::vector<TomogramSlice> slices;
  slices.reserve(lattice.nodes.size());
  for (const auto& node : lattice.nodes) {
    // widen the grid adaptively so the slice support is always captured
    OperatorMatrix Q = node.frame.mu * q + node.frame.nu * p;
    double m1 = (rho.op() * Q).trace().real();
    double m2 = (rho.op() * Q * Q).trace().real();
    double sigma = std::sqrt(std::max(m2 - m1 * m1, 1e-12));
    AxisGrid axis = x_axis;
    axis.center = m1;
    axis.step = std::max(x_axis.step, 14.0 * sigma / (x_axis.count - 1));
    slices.push_back(quantum_tomogram(rho, node.frame, axis));
  }
  return slices;
}

std::vector<TomogramSlice> classical_slices(const ClassicalDistribution& f,
                                            const FrameLattice& lattice,
                                            const AxisGrid& x_axis,
                                            const TomographyConfig& cfg) {
  // phase-space moments so each slice window tracks its own mean and width
  double mq = 0, mp = 0, cqq = 1, cpp = 1, cqp = 0;
  if (const auto* g = std::get_if<GaussianForm>(&f.form)) {
    mq = g->mean_q; mp = g->mean_p;
    cqq = g->cov_qq; cpp = g->cov_pp; cqp = g->cov_qp;
  } else if (const auto* pt = std::get_if<PointForm>(&f.form)) {
    mq = pt->q0; mp = pt->p0;
    cqq = cpp = 0; cqp = 0;
  } else {
    const auto& grid = std::get<GridForm>(f.form);
    double mass = 0, sqq = 0, spp = 0, sqp = 0;
    for (int i = 0; i < grid.q_axis.count; ++i)
      for (int j = 0; j < grid.p_axis.count; ++j) {
        double v = grid.values(i, j);
        double q = grid.q_axis.point(i), p = grid.p_axis.point(j);
        mass += v; mq += v * q; mp += v * p;
        sqq += v * q * q; spp += v * p * p; sqp += v * q * p;
      }
    if (mass <= 0.0)
      fail(ErrorCode::SupportNotCovered, "grid distribution has no mass");
    mq /= mass; mp /= mass;
    cqq = sqq / mass - mq * mq;
    cpp = spp / mass - mp * mp;
    cqp = sqp / mass - mq * mp;
  }
  std::vector<TomogramSlice> slices;
  slices.reserve(lattice.nodes.size());
  for (const auto& node : lattice.nodes) {
    const auto& fr = node.frame;
    double var = fr.mu * fr.mu * cqq + 2.0 * fr.mu * fr.nu * cqp +
                 fr.nu * fr.nu * cpp;
    double sigma = std::sqrt(std::max(var, 1e-12));
    AxisGrid axis = x_axis;
    axis.center = fr.mu * mq + fr.nu * mp;
    axis.step = std::max(x_axis.step, 14.0 * sigma / (x_axis.count - 1));
    slices.push_back(classical_tomogram(f, node.frame, axis, cfg));
  }
  return slices;
}

}  // namespace symplectomo
