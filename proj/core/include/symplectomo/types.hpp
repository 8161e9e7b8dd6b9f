#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace symplectomo {

using Complex = std::complex<double>;
using OperatorMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorCode {
  NotHermitian,
  DimensionMismatch,
  FockLevelOutOfRange,
  InvalidWeights,
  InvalidFrame,
  SupportNotCovered,
  InsufficientFrameCoverage,
  ImaginaryResidueTooLarge,
  NyquistViolation,
  NuZeroInKernel,
  QuadratureNotConverged,
  MissingRequiredFrame,
  NotNormalized,
  ParseError,
  FormatError,
  ConfigError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }
  const char* code_name() const { return error_code_name(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

/// Truncated Fock-basis configuration. Conventions: hbar = 1, unit mass,
/// unit oscillator frequency.
struct BasisConfig {
  int dim = 64;

  void validate() const {
    if (dim < 2) fail(ErrorCode::ConfigError, "BasisConfig.dim must be >= 2");
  }
};

/// Phase-space reference frame (mu, nu); the quadrature in this frame is
/// X = mu*q + nu*p.
struct ReferenceFrame {
  double mu = 1.0;
  double nu = 0.0;

  double radius() const { return std::hypot(mu, nu); }
  bool is_origin() const { return mu == 0.0 && nu == 0.0; }

  void require_valid() const {
    if (std::abs(mu) + std::abs(nu) <= 0.0)
      fail(ErrorCode::InvalidFrame, "frame (0,0) is not a valid tomogram frame");
  }
};

/// Uniform grid, used for X, q and p axes.
struct AxisGrid {
  double center = 0.0;
  double step = 0.05;
  int count = 512;

  double point(int i) const { return center + (i - count / 2) * step; }
  double lo() const { return point(0); }
  double hi() const { return point(count - 1); }

  void validate() const {
    if (count < 8) fail(ErrorCode::NyquistViolation, "grid count must be >= 8");
    if (step <= 0.0) fail(ErrorCode::NyquistViolation, "grid step must be > 0");
  }

  std::vector<double> points() const {
    std::vector<double> xs(count);
    for (int i = 0; i < count; ++i) xs[i] = point(i);
    return xs;
  }
};

/// Largest |k|*|frame| radius at which the truncated-basis characteristic
/// function Tr(A exp(-ik(mu q + nu p))) is trustworthy. Beyond this the
/// truncation boundary reflects and the value is junk of order one.
inline double char_fn_radius(int dim) { return 0.9 * std::sqrt(2.0 * dim); }

}  // namespace symplectomo
