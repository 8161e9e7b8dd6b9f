#pragma once

#include <optional>
#include <variant>

#include "symplectomo/types.hpp"

namespace symplectomo {

struct FockSpec {
  int n = 0;
};
struct CoherentSpec {
  Complex alpha;
};
struct ThermalSpec {
  double nbar = 0.0;
};
struct MixtureSpec;

using StateSpec =
    std::variant<FockSpec, CoherentSpec, ThermalSpec, MixtureSpec>;

struct MixtureSpec {
  std::vector<std::pair<double, StateSpec>> components;
};

/// Density operator in the truncated Fock basis. Hermitian, unit trace,
/// positive semidefinite (within the stated tolerances).
class DensityMatrix {
 public:
  explicit DensityMatrix(OperatorMatrix op);

  const OperatorMatrix& op() const { return op_; }
  int dim() const { return static_cast<int>(op_.rows()); }

  /// Construction bypass for reconstruction outputs whose PSD check is
  /// relaxed; still requires hermiticity and unit trace.
  static DensityMatrix from_reconstruction(OperatorMatrix op,
                                           double psd_floor = -1e-6);

 private:
  DensityMatrix() = default;
  OperatorMatrix op_;
};

struct EigenSystem {
  RealVector values;      // ascending
  OperatorMatrix vectors; // orthonormal columns
};

OperatorMatrix build_position(const BasisConfig& cfg);
OperatorMatrix build_momentum(const BasisConfig& cfg);

/// mu*q + nu*p in the truncated basis.
OperatorMatrix quadrature_operator(const ReferenceFrame& frame,
                                   const BasisConfig& cfg);

DensityMatrix density_state(const StateSpec& spec, const BasisConfig& cfg);

EigenSystem eig_hermitian(const OperatorMatrix& H);

/// exp(i s - i mu q - i nu p), computed via the eigendecomposition of
/// mu q + nu p. Unitary within 1e-8.
OperatorMatrix exp_displacement(double s, const ReferenceFrame& frame,
                                const BasisConfig& cfg);

Complex trace_product(const std::vector<OperatorMatrix>& ops);

/// Tr(a b) / max(Tr a^2, Tr b^2).
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

double hermiticity_defect(const OperatorMatrix& m);

}  // namespace symplectomo
