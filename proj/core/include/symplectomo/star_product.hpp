#pragma once

#include <functional>

#include "symplectomo/tomography.hpp"

namespace symplectomo {

/// Label point x = (X, mu, nu) of the tomographic scheme.
struct LabelPoint {
  double X = 0.0;
  ReferenceFrame frame;
};

/// Closed-form kernel value: prefactor * delta(constraint_residual). The
/// delta factor stays symbolic; evaluation never returns an infinity.
struct KernelValue {
  double constraint_residual = 0.0;
  Complex prefactor;
};

/// One term c * g(X) * delta^(a)(mu) * delta^(b)(nu) of a distributional
/// symbol; g is |X| or X|X|.
struct DistributionalTerm {
  double coefficient = 0.0;
  enum class XProfile { AbsX, XAbsX } x_profile = XProfile::AbsX;
  int mu_derivative_order = 0;  // a in {0, 1}
  int nu_derivative_order = 0;  // b in {0, 1}
};

struct DistributionalSymbol {
  std::vector<DistributionalTerm> terms;
};

enum class SymbolClass { TraceClassNumeric, Distributional };

/// Symbol of an operator: pointwise evaluator plus (when available) the
/// exact X-Fourier transform G(mu, nu) = int f(X, mu, nu) e^{iX} dX that
/// kernel-route integrals consume.
struct SymbolField {
  std::function<Complex(const LabelPoint&)> evaluator;
  SymbolClass declared = SymbolClass::TraceClassNumeric;
  std::function<Complex(double, double)> char_fn;  // optional
};

struct QuadratureConfig {
  double extent = 12.0;  // integration box [-extent, extent] per variable
  double step = 0.5;     // coarse trapezoid step
  double rel_tol = 1e-3;
  int max_refinements = 2;  // step halvings tried before giving up
};

enum class KernelKind { Quantum, Classical };

enum class PolyObservable { One, Q, P, Q2, P2, QPPQ };

struct QuantizeDiagnostics {
  double hermiticity_defect = 0.0;
  double trace_deviation = 0.0;
  double max_boundary_fourier = 0.0;
};

/// f_A(x) = Tr(A U(x)); the band-limited characteristic-function route,
/// valid for arbitrary (also non-Hermitian) finite matrices A.
Complex dequantize_symbol(const OperatorMatrix& A, const LabelPoint& x);

/// A = int f(x) D(x) dx over the lattice; raw output, no Hermitization.
OperatorMatrix quantize_operator(const SymbolField& symbol,
                                 const FrameLattice& lattice,
                                 const AxisGrid& x_axis,
                                 const BasisConfig& cfg,
                                 const TomographyConfig& tcfg = {},
                                 QuantizeDiagnostics* diag = nullptr);

/// Trace-route star-product: Tr(A B U(x)).
Complex star_trace(const OperatorMatrix& A, const OperatorMatrix& B,
                   const LabelPoint& x);

KernelValue kernel_quantum(const LabelPoint& x1, const LabelPoint& x2,
                           const LabelPoint& x);
KernelValue kernel_classical(const LabelPoint& x1, const LabelPoint& x2,
                             const LabelPoint& x);

/// kernel_quantum.prefactor / kernel_classical.prefactor; equals
/// exp(i(mu2 nu1 - mu1 nu2)/2).
Complex kernel_ratio_check(const LabelPoint& x1, const LabelPoint& x2,
                           const LabelPoint& x);

/// Kernel-route star-product. The delta constraint is resolved analytically
/// for mu2; the remaining 3D integral over (mu1, nu1, nu2) runs on a
/// trapezoid grid with halving-based convergence control.
Complex star_via_kernel(const SymbolField& fA, const SymbolField& fB,
                        const LabelPoint& x, const QuadratureConfig& quad = {},
                        KernelKind kind = KernelKind::Quantum);

/// |Tr((AB)C U(x)) - Tr(A(BC) U(x))| (trace route).
double associativity_residual(const OperatorMatrix& A, const OperatorMatrix& B,
                              const OperatorMatrix& C, const LabelPoint& x);

/// Kernel-route associativity: |f_{AB} * f_C - f_A * f_{BC}| at x with both
/// outer products taken through star_via_kernel.
double associativity_residual_kernel(const OperatorMatrix& A,
                                     const OperatorMatrix& B,
                                     const OperatorMatrix& C,
                                     const LabelPoint& x,
                                     const QuadratureConfig& quad = {});

/// Dual symbol f^(d)_A(x) = (1/2pi) e^{iX} Tr(A exp(-i mu q - i nu p)).
/// Frame (0,0) is allowed here: the exponential degenerates to the identity.
Complex dual_symbol(const OperatorMatrix& A, const LabelPoint& x);

/// Smeared dual kernel Tr(U(x1) U(x2) D(x)) with Gaussian dequantizers of
/// width eps, evaluated at the given truncation dim.
Complex kernel_dual(const LabelPoint& x1, const LabelPoint& x2,
                    const LabelPoint& x, const BasisConfig& cfg,
                    double eps = 0.1);

/// Mean value of a polynomial observable from tomogram slices; requires
/// slices at frames (1,0), (0,1) and -- for QPPQ -- (1,1).
double mean_value(const std::vector<TomogramSlice>& slices,
                  PolyObservable observable);

/// Weyl symbol W_A(q,p) = 2 Tr(A D(2 alpha) I_parity), alpha = (q+ip)/sqrt2.
Complex weyl_symbol(const OperatorMatrix& A, double q, double p);

enum class NamedOperator { Identity, Position, Momentum };

/// Closed-form distributional tomographic symbols of 1, q and p.
DistributionalSymbol distributional_symbol(NamedOperator which);

/// (1/2pi)(-pi) int |X| e^{iX - eps X^2} dX; converges to 1 as eps -> 0.
double regularized_identity_pairing(double eps);

/// Symbol field of a finite operator: band-limited pointwise evaluator and
/// the exact characteristic function Tr(A e^{i(mu q + nu p)}) computed from
/// closed-form displacement matrix elements.
SymbolField symbol_of_operator(OperatorMatrix A);

/// Symbol field of a classical Gaussian: closed-form slice density and
/// characteristic function.
SymbolField symbol_of_classical(const GaussianForm& g);

/// <m| exp(gamma a^dag - conj(gamma) a) |n> in the Fock basis.
Complex displacement_element(int m, int n, Complex gamma);

namespace detail {
/// Exact Tr(A e^{i(mu q + nu p)}) as a reusable closure; stable for small
/// truncations where eigenbasis routes lose the characteristic-function tail.
std::function<Complex(double, double)> closed_form_char_fn(OperatorMatrix A);
}  // namespace detail

}  // namespace symplectomo
