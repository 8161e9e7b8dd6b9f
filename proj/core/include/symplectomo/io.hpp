#pragma once

#include <filesystem>
#include <nlohmann/json_fwd.hpp>
#include <string>

#include "symplectomo/tomography.hpp"

namespace symplectomo {

/// Runtime configuration shared by the CLI commands. Every field can come
/// from a JSON config file and be overridden by a flag of the same name.
struct RunConfig {
  int dim = 64;
  AxisGrid x_grid{0.0, 0.05, 512};

  // polar frame lattice; an explicit frame list (CLI --frame) bypasses it
  double lattice_cutoff = 6.0;
  double lattice_dr = 0.1;
  double lattice_dtheta = kPi / 64;

  double epsilon = 0.1;  // smearing width for spectral-route deltas
  TomographyConfig tomo;
  Convention convention = Convention::Plain;
  std::uint64_t seed = 20260826;

  void validate() const;
};

RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json run_config_to_json(const RunConfig& cfg);
RunConfig load_run_config(const std::filesystem::path& path);

/// SYMPLECTOMO_SEED, when set, wins over config/flag seeds.
void apply_env_seed(RunConfig& cfg);

/// Shortest-9-significant-digit decimal used by all CSV writers.
std::string format_double(double v);

/// All file writes go through a temp file + rename.
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content);

// -- tomogram CSV: header "X,w", 9 significant digits ----------------------
struct TomogramCsv {
  std::vector<double> X, w;
};
std::string tomogram_csv_text(const TomogramCsv& rows);
void write_tomogram_csv(const std::filesystem::path& path,
                        const TomogramCsv& rows);
void write_tomogram_csv(const std::filesystem::path& path,
                        const TomogramSlice& slice);
TomogramCsv read_tomogram_csv(const std::filesystem::path& path);

/// Recover the uniform axis of a CSV column (FormatError if non-uniform).
AxisGrid axis_from_points(const std::vector<double>& xs);

// -- phase-space grid CSV: header "q,p,value", row-major over q then p -----
std::string grid_csv_text(const AxisGrid& q_axis, const AxisGrid& p_axis,
                          const Eigen::MatrixXd& values);
void write_grid_csv(const std::filesystem::path& path, const AxisGrid& q_axis,
                    const AxisGrid& p_axis, const Eigen::MatrixXd& values);
struct GridCsv {
  std::vector<double> q, p, value;
};
GridCsv read_grid_csv(const std::filesystem::path& path);

// -- matrix JSON: {dim, entries: [[re, im], ...] row-major} ----------------
nlohmann::json matrix_to_json(const OperatorMatrix& m);
OperatorMatrix matrix_from_json(const nlohmann::json& j);
void write_matrix_json(const std::filesystem::path& path,
                       const OperatorMatrix& m);
OperatorMatrix read_matrix_json(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

// -- state specification grammar -------------------------------------------
// fock:n | coherent:re,im | thermal:nbar | cgauss:q0,p0,sqq,spp,sqp |
// cpoint:q0,p0 | mix:w1*spec1+w2*spec2  (mix components must be quantum)
struct ParsedSpec {
  bool classical = false;
  StateSpec state;
  ClassicalDistribution distribution;
};
ParsedSpec parse_state_spec(const std::string& text);

}  // namespace symplectomo
