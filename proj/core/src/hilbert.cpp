#include "symplectomo/hilbert.hpp"

#include <cmath>

namespace symplectomo {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::FockLevelOutOfRange: return "FockLevelOutOfRange";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::InvalidFrame: return "InvalidFrame";
    case ErrorCode::SupportNotCovered: return "SupportNotCovered";
    case ErrorCode::InsufficientFrameCoverage: return "InsufficientFrameCoverage";
    case ErrorCode::ImaginaryResidueTooLarge: return "ImaginaryResidueTooLarge";
    case ErrorCode::NyquistViolation: return "NyquistViolation";
    case ErrorCode::NuZeroInKernel: return "NuZeroInKernel";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::MissingRequiredFrame: return "MissingRequiredFrame";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

double hermiticity_defect(const OperatorMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

DensityMatrix::DensityMatrix(OperatorMatrix op) : op_(std::move(op)) {
  if (op_.rows() != op_.cols())
    fail(ErrorCode::DimensionMismatch, "density matrix must be square");
  if (hermiticity_defect(op_) > 1e-12)
    fail(ErrorCode::NotHermitian, "density matrix not Hermitian within 1e-12");
  double tr = op_.trace().real();
  if (std::abs(tr - 1.0) > 1e-10)
    fail(ErrorCode::InvalidWeights, "density matrix trace deviates from 1");
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(op_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    fail(ErrorCode::InvalidWeights, "density matrix not positive semidefinite");
}

DensityMatrix DensityMatrix::from_reconstruction(OperatorMatrix op,
                                                 double psd_floor) {
  DensityMatrix d;
  d.op_ = 0.5 * (op + op.adjoint());
  double tr = d.op_.trace().real();
  if (std::abs(tr) < 1e-12)
    fail(ErrorCode::InsufficientFrameCoverage, "reconstructed trace is zero");
  d.op_ /= tr;
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(d.op_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < psd_floor)
    fail(ErrorCode::InvalidWeights,
         "reconstructed density matrix violates relaxed PSD floor");
  return d;
}

OperatorMatrix build_position(const BasisConfig& cfg) {
  cfg.validate();
  OperatorMatrix q = OperatorMatrix::Zero(cfg.dim, cfg.dim);
  for (int n = 1; n < cfg.dim; ++n) {
    double v = std::sqrt(n / 2.0);
    q(n - 1, n) = v;
    q(n, n - 1) = v;
  }
  return q;
}

OperatorMatrix build_momentum(const BasisConfig& cfg) {
  cfg.validate();
  OperatorMatrix p = OperatorMatrix::Zero(cfg.dim, cfg.dim);
  for (int n = 1; n < cfg.dim; ++n) {
    double v = std::sqrt(n / 2.0);
    p(n, n - 1) = Complex(0, v);
    p(n - 1, n) = Complex(0, -v);
  }
  return p;
}

OperatorMatrix quadrature_operator(const ReferenceFrame& frame,
                                   const BasisConfig& cfg) {
  return frame.mu * build_position(cfg) + frame.nu * build_momentum(cfg);
}

namespace {

ComplexVector coherent_amplitudes(Complex alpha, int dim) {
  ComplexVector v(dim);
  v(0) = 1.0;
  for (int n = 1; n < dim; ++n) v(n) = v(n - 1) * alpha / std::sqrt(double(n));
  v *= std::exp(-0.5 * std::norm(alpha));
  return v;
}

OperatorMatrix state_matrix(const StateSpec& spec, const BasisConfig& cfg);

OperatorMatrix mixture_matrix(const MixtureSpec& mix, const BasisConfig& cfg) {
  if (mix.components.empty())
    fail(ErrorCode::InvalidWeights, "mixture has no components");
  double wsum = 0.0;
  for (const auto& [w, s] : mix.components) {
    if (w < 0.0) fail(ErrorCode::InvalidWeights, "negative mixture weight");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-9)
    fail(ErrorCode::InvalidWeights, "mixture weights must sum to 1");
  OperatorMatrix rho = OperatorMatrix::Zero(cfg.dim, cfg.dim);
  for (const auto& [w, s] : mix.components) rho += w * state_matrix(s, cfg);
  return rho;
}

OperatorMatrix state_matrix(const StateSpec& spec, const BasisConfig& cfg) {
  OperatorMatrix rho = OperatorMatrix::Zero(cfg.dim, cfg.dim);
  if (const auto* f = std::get_if<FockSpec>(&spec)) {
    if (f->n < 0 || f->n >= cfg.dim)
      fail(ErrorCode::FockLevelOutOfRange, "fock level outside truncation");
    rho(f->n, f->n) = 1.0;
  } else if (const auto* c = std::get_if<CoherentSpec>(&spec)) {
    ComplexVector v = coherent_amplitudes(c->alpha, cfg.dim);
    rho = v * v.adjoint();
    rho /= rho.trace().real();  // renormalize after truncation
  } else if (const auto* t = std::get_if<ThermalSpec>(&spec)) {
    if (t->nbar < 0.0) fail(ErrorCode::InvalidWeights, "thermal nbar < 0");
    double r = t->nbar / (t->nbar + 1.0);
    double w = 1.0;
    double sum = 0.0;
    for (int n = 0; n < cfg.dim; ++n, w *= r) {
      rho(n, n) = w;
      sum += w;
    }
    rho /= sum;  // renormalize after truncation
  } else {
    rho = mixture_matrix(std::get<MixtureSpec>(spec), cfg);
  }
  return rho;
}

}  // namespace

DensityMatrix density_state(const StateSpec& spec, const BasisConfig& cfg) {
  cfg.validate();
  return DensityMatrix(state_matrix(spec, cfg));
}

EigenSystem eig_hermitian(const OperatorMatrix& H) {
  if (H.rows() != H.cols())
    fail(ErrorCode::DimensionMismatch, "eig_hermitian needs a square matrix");
  if (hermiticity_defect(H) > 1e-10)
    fail(ErrorCode::NotHermitian, "matrix not Hermitian within 1e-10");
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(H);
  return EigenSystem{es.eigenvalues(), es.eigenvectors()};
}

OperatorMatrix exp_displacement(double s, const ReferenceFrame& frame,
                                const BasisConfig& cfg) {
  EigenSystem sys = eig_hermitian(quadrature_operator(frame, cfg));
  ComplexVector phases(cfg.dim);
  for (int j = 0; j < cfg.dim; ++j)
    phases(j) = std::exp(Complex(0, s - sys.values(j)));
  return sys.vectors * phases.asDiagonal() * sys.vectors.adjoint();
}

Complex trace_product(const std::vector<OperatorMatrix>& ops) {
  if (ops.empty()) fail(ErrorCode::DimensionMismatch, "trace of empty product");
  const auto dim = ops.front().rows();
  for (const auto& m : ops)
    if (m.rows() != dim || m.cols() != dim)
      fail(ErrorCode::DimensionMismatch, "trace_product dims differ");
  OperatorMatrix acc = ops.front();
  for (size_t i = 1; i < ops.size(); ++i) acc = acc * ops[i];
  return acc.trace();
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim())
    fail(ErrorCode::DimensionMismatch, "fidelity dims differ");
  double overlap = (a.op() * b.op()).trace().real();
  double pa = (a.op() * a.op()).trace().real();
  double pb = (b.op() * b.op()).trace().real();
  return overlap / std::max(pa, pb);
}

}  // namespace symplectomo
