#pragma once

#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <random>
#include <string>

#include "symplectomo/star_product.hpp"

namespace symplectomo {

enum class SuiteProfile { Quick, Full };

struct SuiteConfig {
  SuiteProfile profile = SuiteProfile::Full;
  std::uint64_t seed = 20260826;
  double tolerance_scale = 1.0;  // global tolerance override knob
};

struct SuiteCheck {
  std::string name;  // names the module invariant it exercises
  std::string status;  // pass | fail | skip
  double measured = 0.0;
  double tolerance = 0.0;
  double runtime_ms = 0.0;
};

struct SuiteReport {
  std::vector<SuiteCheck> checks;
  std::uint64_t seed = 0;

  bool all_passed() const {
    for (const auto& c : checks)
      if (c.status == "fail") return false;
    return true;
  }
};

/// Brute-force Radon oracle: direct 2D quadrature of
/// f(q,p) * gaussian_delta(mu q + nu p - X, eps). Independent of the
/// classical_tomogram code path.
double radon_quadrature_oracle(const ClassicalDistribution& f,
                               const ReferenceFrame& frame, double X,
                               double eps = 0.02);

/// Seeded Hermitian matrix, entries uniform in [-1,1], symmetrized.
OperatorMatrix random_hermitian(int dim, std::mt19937_64& rng);

/// Seeded density matrix via the Gram construction M M^dag / Tr.
DensityMatrix random_density(int dim, std::mt19937_64& rng);

SuiteReport run_suite(const SuiteConfig& config);

nlohmann::json suite_report_json(const SuiteReport& report);

}  // namespace symplectomo
