#pragma once

#include <functional>
#include <variant>

#include "symplectomo/hilbert.hpp"
#include "symplectomo/types.hpp"

namespace symplectomo {

enum class Convention { Plain, Wigner };  // int f dq dp = 1 vs (1/2pi) int f = 1

struct GaussianForm {
  double mean_q = 0.0, mean_p = 0.0;
  double cov_qq = 1.0, cov_pp = 1.0, cov_qp = 0.0;

  void validate() const {
    if (cov_qq <= 0.0 || cov_pp <= 0.0 ||
        cov_qq * cov_pp - cov_qp * cov_qp <= 0.0)
      fail(ErrorCode::ConfigError, "gaussian covariance not positive definite");
  }
};

struct GridForm {
  AxisGrid q_axis, p_axis;
  Eigen::MatrixXd values;  // values(i, j) = f(q_i, p_j), nonnegative
};

struct PointForm {
  double q0 = 0.0, p0 = 0.0;
};

struct ClassicalDistribution {
  std::variant<GaussianForm, GridForm, PointForm> form;
  Convention convention = Convention::Plain;
};

struct TomogramSlice {
  ReferenceFrame frame;
  AxisGrid x_axis;
  RealVector density;

  double trapezoid_integral() const;
};

struct WignerGrid {
  AxisGrid q_axis, p_axis;
  Eigen::MatrixXd values;  // values(i, j) = W(q_i, p_j)
};

/// Frame lattice with quadrature weights; reconstruction sums
/// G(mu,nu) * kernel(mu,nu) * weight over the nodes.
struct FrameNode {
  ReferenceFrame frame;
  double weight = 0.0;
  bool boundary = false;  // node on the radial cutoff shell
};

struct FrameLattice {
  std::vector<FrameNode> nodes;
  double cutoff = 0.0;
};

/// Polar lattice over the (mu, nu) plane: radial Simpson rule with spacing
/// dr up to the cutoff, uniform angles with spacing dtheta over [0, 2pi).
FrameLattice make_polar_lattice(double cutoff = 6.0, double dr = 0.1,
                                double dtheta = kPi / 64);

struct TomographyConfig {
  double smearing_scale = 2.0;       // delta width = scale * x step
  double boundary_decay_tol = 1e-3;  // |G| allowed on the lattice boundary
  double imag_residue_tol = 1e-6;    // relative imaginary residue
  int quantizer_padding = 48;        // working-dim headroom for reconstruction
};

TomogramSlice classical_tomogram(const ClassicalDistribution& f,
                                 const ReferenceFrame& frame,
                                 const AxisGrid& x_axis,
                                 const TomographyConfig& cfg = {});

ClassicalDistribution classical_inverse(const std::vector<TomogramSlice>& slices,
                                        const FrameLattice& lattice,
                                        const AxisGrid& q_axis,
                                        const AxisGrid& p_axis,
                                        const TomographyConfig& cfg = {});

TomogramSlice quantum_tomogram(const DensityMatrix& rho,
                               const ReferenceFrame& frame,
                               const AxisGrid& x_axis);

TomogramSlice quantum_tomogram_spectral(const DensityMatrix& rho,
                                        const ReferenceFrame& frame,
                                        const AxisGrid& x_axis,
                                        const TomographyConfig& cfg = {});

WignerGrid wigner_from_tomogram(const std::vector<TomogramSlice>& slices,
                                const FrameLattice& lattice,
                                const AxisGrid& q_axis, const AxisGrid& p_axis,
                                const TomographyConfig& cfg = {});

DensityMatrix density_from_tomogram(const std::vector<TomogramSlice>& slices,
                                    const FrameLattice& lattice,
                                    const BasisConfig& cfg,
                                    const TomographyConfig& tcfg = {});

double tomogram_moments(const TomogramSlice& slice, int order);

/// Tomogram slices of a quantum state over every lattice node.
std::vector<TomogramSlice> quantum_slices(const DensityMatrix& rho,
                                          const FrameLattice& lattice,
                                          const AxisGrid& x_axis);

/// Tomogram slices of a classical distribution over every lattice node.
std::vector<TomogramSlice> classical_slices(const ClassicalDistribution& f,
                                            const FrameLattice& lattice,
                                            const AxisGrid& x_axis,
                                            const TomographyConfig& cfg = {});

/// X-Fourier transform of a slice: G = int w(X) e^{iX} dX (trapezoid).
Complex slice_fourier(const TomogramSlice& slice);

/// Gaussian smoothing of a slice on its own grid (route-comparison helper).
TomogramSlice gaussian_smooth(const TomogramSlice& slice, double width);

namespace detail {
/// Raw (un-hermitized) reconstruction sum shared by density_from_tomogram
/// and quantize_operator. G values are the per-node X-Fourier transforms.
OperatorMatrix reconstruct_operator(const std::vector<Complex>& fourier,
                                    const FrameLattice& lattice,
                                    const BasisConfig& cfg,
                                    const TomographyConfig& tcfg);

void check_boundary_decay(const std::vector<Complex>& fourier,
                          const FrameLattice& lattice, double tol);
}  // namespace detail

}  // namespace symplectomo
