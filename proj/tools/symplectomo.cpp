#include <CLI11.hpp>
#include <iostream>
#include <nlohmann/json.hpp>

#include "symplectomo/io.hpp"
#include "symplectomo/star_product.hpp"
#include "symplectomo/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace symplectomo;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  // flag overrides; negative sentinel = not set
  int dim = -1;
  double lattice_cutoff = -1, lattice_dr = -1, lattice_dtheta = -1;
  double epsilon = -1;
  double x_center = std::nan("");
  double x_step = -1;
  int x_count = -1;
  std::string convention;
  long long seed = -1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--dim", o.dim, "truncation dimension");
  cmd->add_option("--lattice-cutoff", o.lattice_cutoff, "polar lattice radius");
  cmd->add_option("--lattice-dr", o.lattice_dr, "polar lattice radial step");
  cmd->add_option("--lattice-dtheta", o.lattice_dtheta, "polar angular step");
  cmd->add_option("--epsilon", o.epsilon, "smearing width");
  cmd->add_option("--x-center", o.x_center, "X grid center");
  cmd->add_option("--x-step", o.x_step, "X grid step");
  cmd->add_option("--x-count", o.x_count, "X grid point count");
  cmd->add_option("--convention", o.convention, "plain | wigner");
  cmd->add_option("--seed", o.seed, "random seed");
}

RunConfig resolve_config(const CommonOpts& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) cfg = load_run_config(o.config_path);
  if (o.dim >= 0) cfg.dim = o.dim;
  if (o.lattice_cutoff >= 0) cfg.lattice_cutoff = o.lattice_cutoff;
  if (o.lattice_dr >= 0) cfg.lattice_dr = o.lattice_dr;
  if (o.lattice_dtheta >= 0) cfg.lattice_dtheta = o.lattice_dtheta;
  if (o.epsilon >= 0) cfg.epsilon = o.epsilon;
  if (!std::isnan(o.x_center)) cfg.x_grid.center = o.x_center;
  if (o.x_step >= 0) cfg.x_grid.step = o.x_step;
  if (o.x_count >= 0) cfg.x_grid.count = o.x_count;
  if (!o.convention.empty()) {
    if (o.convention == "plain")
      cfg.convention = Convention::Plain;
    else if (o.convention == "wigner")
      cfg.convention = Convention::Wigner;
    else
      fail(ErrorCode::ConfigError, "convention must be plain or wigner");
  }
  if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
  apply_env_seed(cfg);
  cfg.validate();
  return cfg;
}

ReferenceFrame parse_frame(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos)
    fail(ErrorCode::ParseError, "frame needs mu,nu: '" + text + "'");
  try {
    size_t a = 0, b = 0;
    std::string lhs = text.substr(0, comma), rhs = text.substr(comma + 1);
    ReferenceFrame fr{std::stod(lhs, &a), std::stod(rhs, &b)};
    if (a != lhs.size() || b != rhs.size()) throw std::invalid_argument(text);
    fr.require_valid();
    return fr;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorCode::ParseError, "bad frame '" + text + "'");
  }
}

json frame_json(const ReferenceFrame& fr) {
  return json::array({fr.mu, fr.nu});
}

int cmd_tomogram(const std::string& spec_text,
                 const std::vector<std::string>& frame_args, bool use_lattice,
                 const CommonOpts& opts) {
  RunConfig cfg = resolve_config(opts);
  ParsedSpec spec = parse_state_spec(spec_text);
  fs::create_directories(opts.out_dir);

  std::vector<TomogramSlice> slices;
  json manifest{{"command", "tomogram"},
                {"state", spec_text},
                {"classical", spec.classical},
                {"config", run_config_to_json(cfg)}};
  if (use_lattice) {
    FrameLattice lattice = make_polar_lattice(cfg.lattice_cutoff, cfg.lattice_dr,
                                              cfg.lattice_dtheta);
    if (spec.classical) {
      ClassicalDistribution dist = spec.distribution;
      dist.convention = cfg.convention;
      slices = classical_slices(dist, lattice, cfg.x_grid, cfg.tomo);
    } else {
      DensityMatrix rho = density_state(spec.state, BasisConfig{cfg.dim});
      slices = quantum_slices(rho, lattice, cfg.x_grid);
    }
    manifest["lattice"] = {{"type", "polar"},
                           {"cutoff", cfg.lattice_cutoff},
                           {"dr", cfg.lattice_dr},
                           {"dtheta", cfg.lattice_dtheta}};
  } else {
    if (frame_args.empty())
      fail(ErrorCode::ConfigError, "need --frame mu,nu or --lattice");
    manifest["lattice"] = {{"type", "explicit"}};
    for (const auto& arg : frame_args) {
      ReferenceFrame fr = parse_frame(arg);
      if (spec.classical) {
        ClassicalDistribution dist = spec.distribution;
        dist.convention = cfg.convention;
        slices.push_back(classical_tomogram(dist, fr, cfg.x_grid, cfg.tomo));
      } else {
        DensityMatrix rho = density_state(spec.state, BasisConfig{cfg.dim});
        slices.push_back(quantum_tomogram(rho, fr, cfg.x_grid));
      }
    }
  }

  json frames = json::array(), files = json::array();
  for (size_t i = 0; i < slices.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "tomogram_%05zu.csv", i);
    write_tomogram_csv(fs::path(opts.out_dir) / name, slices[i]);
    frames.push_back(frame_json(slices[i].frame));
    files.push_back(name);
  }
  manifest["frames"] = std::move(frames);
  manifest["files"] = std::move(files);
  write_json(fs::path(opts.out_dir) / "manifest.json", manifest);
  std::cout << "wrote " << slices.size() << " slice(s) to " << opts.out_dir
            << "\n";
  return 0;
}

int cmd_invert(const std::string& dir, const std::string& target,
               double grid_step, int grid_count, const CommonOpts& opts) {
  RunConfig cfg = resolve_config(opts);
  json manifest = read_json(fs::path(dir) / "manifest.json");
  if (!manifest.contains("lattice") ||
      manifest["lattice"].value("type", "") != "polar")
    fail(ErrorCode::FormatError,
         "invert needs a polar-lattice tomogram set (run tomogram --lattice)");
  FrameLattice lattice = make_polar_lattice(
      manifest["lattice"].value("cutoff", 6.0),
      manifest["lattice"].value("dr", 0.1),
      manifest["lattice"].value("dtheta", kPi / 64));
  const auto& files = manifest.at("files");
  const auto& frames = manifest.at("frames");
  if (files.size() != lattice.nodes.size() || frames.size() != files.size())
    fail(ErrorCode::FormatError,
         "manifest inconsistent with its declared lattice");

  std::vector<TomogramSlice> slices;
  slices.reserve(files.size());
  for (size_t i = 0; i < files.size(); ++i) {
    ReferenceFrame fr{frames[i].at(0).get<double>(),
                      frames[i].at(1).get<double>()};
    if (std::abs(fr.mu - lattice.nodes[i].frame.mu) > 1e-9 ||
        std::abs(fr.nu - lattice.nodes[i].frame.nu) > 1e-9)
      fail(ErrorCode::FormatError, "manifest frames do not match the lattice");
    TomogramCsv rows =
        read_tomogram_csv(fs::path(dir) / files[i].get<std::string>());
    TomogramSlice s;
    s.frame = fr;
    s.x_axis = axis_from_points(rows.X);
    s.density = Eigen::Map<const RealVector>(rows.w.data(), rows.w.size());
    slices.push_back(std::move(s));
  }

  fs::create_directories(opts.out_dir);
  AxisGrid axis{0.0, grid_step, grid_count};
  json out_manifest{{"command", "invert"},
                    {"target", target},
                    {"source", dir},
                    {"config", run_config_to_json(cfg)}};
  if (target == "density") {
    DensityMatrix rho =
        density_from_tomogram(slices, lattice, BasisConfig{cfg.dim}, cfg.tomo);
    write_matrix_json(fs::path(opts.out_dir) / "density.json", rho.op());
    OperatorMatrix raw = rho.op();
    out_manifest["diagnostics"] = {
        {"hermiticity_defect", hermiticity_defect(raw)},
        {"trace_deviation", std::abs(raw.trace() - Complex(1, 0))}};
    out_manifest["files"] = json::array({"density.json"});
  } else if (target == "wigner" || target == "classical") {
    Eigen::MatrixXd values;
    if (target == "wigner") {
      WignerGrid w = wigner_from_tomogram(slices, lattice, axis, axis, cfg.tomo);
      values = std::move(w.values);
    } else {
      ClassicalDistribution rec =
          classical_inverse(slices, lattice, axis, axis, cfg.tomo);
      values = std::get<GridForm>(rec.form).values;
    }
    std::string name = target + ".csv";
    write_grid_csv(fs::path(opts.out_dir) / name, axis, axis, values);
    out_manifest["files"] = json::array({name});
  } else {
    fail(ErrorCode::ConfigError,
         "target must be wigner, density or classical: '" + target + "'");
  }
  write_json(fs::path(opts.out_dir) / "invert_manifest.json", out_manifest);
  std::cout << "inverted " << slices.size() << " slice(s) -> " << target
            << " in " << opts.out_dir << "\n";
  return 0;
}

OperatorMatrix parse_operand(const std::string& text, int dim) {
  BasisConfig cfg{dim};
  if (text == "q") return build_position(cfg);
  if (text == "p") return build_momentum(cfg);
  if (text == "1") return OperatorMatrix::Identity(dim, dim);
  ParsedSpec spec = parse_state_spec(text);
  if (spec.classical)
    fail(ErrorCode::ParseError,
         "star operands must be quantum states or named operators: '" + text +
             "'");
  return density_state(spec.state, cfg).op();
}

int cmd_star(const std::string& spec_a, const std::string& spec_b,
             const std::string& point_text, const std::string& route,
             const CommonOpts& opts) {
  RunConfig cfg = resolve_config(opts);
  auto toks = point_text;
  auto first = toks.find(',');
  auto second = first == std::string::npos ? first : toks.find(',', first + 1);
  if (second == std::string::npos)
    fail(ErrorCode::ParseError, "point needs X,mu,nu: '" + point_text + "'");
  LabelPoint x;
  try {
    x.X = std::stod(toks.substr(0, first));
    x.frame.mu = std::stod(toks.substr(first + 1, second - first - 1));
    x.frame.nu = std::stod(toks.substr(second + 1));
  } catch (const std::exception&) {
    fail(ErrorCode::ParseError, "bad point '" + point_text + "'");
  }
  x.frame.require_valid();
  if (route != "trace" && route != "kernel" && route != "both")
    fail(ErrorCode::ConfigError, "route must be trace, kernel or both");

  OperatorMatrix a = parse_operand(spec_a, cfg.dim);
  OperatorMatrix b = parse_operand(spec_b, cfg.dim);
  json out{{"A", spec_a},
           {"B", spec_b},
           {"x", json::array({x.X, x.frame.mu, x.frame.nu})},
           {"route", route}};
  Complex trace_value, kernel_value;
  if (route != "kernel") {
    trace_value = star_trace(a, b, x);
    out["trace_value"] = json::array({trace_value.real(), trace_value.imag()});
  }
  if (route != "trace") {
    kernel_value = star_via_kernel(symbol_of_operator(a), symbol_of_operator(b), x);
    out["kernel_value"] =
        json::array({kernel_value.real(), kernel_value.imag()});
  }
  if (route == "both") out["abs_diff"] = std::abs(trace_value - kernel_value);
  std::cout << out.dump(2) << "\n";
  fs::create_directories(opts.out_dir);
  write_json(fs::path(opts.out_dir) / "star.json", out);
  return 0;
}

int cmd_mean(const std::string& spec_text, const std::string& obs_text,
             const CommonOpts& opts) {
  RunConfig cfg = resolve_config(opts);
  PolyObservable obs;
  if (obs_text == "1")
    obs = PolyObservable::One;
  else if (obs_text == "q")
    obs = PolyObservable::Q;
  else if (obs_text == "p")
    obs = PolyObservable::P;
  else if (obs_text == "q2")
    obs = PolyObservable::Q2;
  else if (obs_text == "p2")
    obs = PolyObservable::P2;
  else if (obs_text == "qp+pq")
    obs = PolyObservable::QPPQ;
  else
    fail(ErrorCode::ParseError,
         "observable must be one of 1, q, p, q2, p2, qp+pq: '" + obs_text +
             "'");

  ParsedSpec spec = parse_state_spec(spec_text);
  if (spec.classical)
    fail(ErrorCode::ParseError, "mean needs a quantum state spec");
  BasisConfig bc{cfg.dim};
  DensityMatrix rho = density_state(spec.state, bc);
  std::vector<TomogramSlice> slices;
  for (auto [mu, nu] : std::vector<std::pair<double, double>>{
           {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}})
    slices.push_back(quantum_tomogram(rho, {mu, nu}, cfg.x_grid));
  double tomographic = mean_value(slices, obs);

  OperatorMatrix q = build_position(bc), p = build_momentum(bc);
  OperatorMatrix op;
  switch (obs) {
    case PolyObservable::One: op = OperatorMatrix::Identity(cfg.dim, cfg.dim); break;
    case PolyObservable::Q: op = q; break;
    case PolyObservable::P: op = p; break;
    case PolyObservable::Q2: op = q * q; break;
    case PolyObservable::P2: op = p * p; break;
    case PolyObservable::QPPQ: op = q * p + p * q; break;
  }
  double trace_value = (rho.op() * op).trace().real();

  json out{{"observable", obs_text},
           {"tomographic_value", tomographic},
           {"trace_value", trace_value},
           {"abs_diff", std::abs(tomographic - trace_value)}};
  std::cout << out.dump(2) << "\n";
  fs::create_directories(opts.out_dir);
  write_json(fs::path(opts.out_dir) / "mean.json", out);
  return 0;
}

int cmd_verify(const std::string& profile, const CommonOpts& opts) {
  RunConfig cfg = resolve_config(opts);
  SuiteConfig sc;
  sc.seed = cfg.seed;
  if (profile == "quick")
    sc.profile = SuiteProfile::Quick;
  else if (profile == "full")
    sc.profile = SuiteProfile::Full;
  else
    fail(ErrorCode::ConfigError, "profile must be quick or full");
  SuiteReport report = run_suite(sc);
  for (const auto& c : report.checks)
    std::cout << c.status << "  " << c.name << "  measured=" << c.measured
              << " tol=" << c.tolerance << " (" << c.runtime_ms << " ms)\n";
  fs::create_directories(opts.out_dir);
  write_json(fs::path(opts.out_dir) / "report.json", suite_report_json(report));
  std::cout << (report.all_passed() ? "all checks passed" : "FAILURES present")
            << "\n";
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symplectic tomography and star-product quantization toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string state_spec, target = "wigner", dir;
  std::string spec_a, spec_b, point_text, route = "both";
  std::string obs_text, profile = "quick";
  std::vector<std::string> frame_args;
  bool use_lattice = false;
  double grid_step = 0.1;
  int grid_count = 81;

  auto* tomo = app.add_subcommand("tomogram", "emit tomogram slice CSVs");
  tomo->add_option("state", state_spec, "state specification")->required();
  tomo->add_option("--frame", frame_args, "frame mu,nu (repeatable)");
  tomo->add_flag("--lattice", use_lattice, "use the polar frame lattice");
  add_common(tomo, opts);

  auto* inv = app.add_subcommand("invert", "reconstruct from tomogram slices");
  inv->add_option("dir", dir, "tomogram directory")->required();
  inv->add_option("target", target, "wigner | density | classical")->required();
  inv->add_option("--grid-step", grid_step, "output grid step");
  inv->add_option("--grid-count", grid_count, "output grid point count");
  add_common(inv, opts);

  auto* star = app.add_subcommand("star", "star-product of two symbols");
  star->add_option("A", spec_a, "first operand")->required();
  star->add_option("B", spec_b, "second operand")->required();
  star->add_option("--point", point_text, "label point X,mu,nu")->required();
  star->add_option("--route", route, "trace | kernel | both");
  add_common(star, opts);

  auto* mean = app.add_subcommand("mean", "observable mean from tomograms");
  mean->add_option("state", state_spec, "state specification")->required();
  mean->add_option("observable", obs_text, "1|q|p|q2|p2|qp+pq")->required();
  add_common(mean, opts);

  auto* verify = app.add_subcommand("verify", "run the property suite");
  verify->add_option("profile", profile, "quick | full");
  add_common(verify, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (tomo->parsed())
      return cmd_tomogram(state_spec, frame_args, use_lattice, opts);
    if (inv->parsed())
      return cmd_invert(dir, target, grid_step, grid_count, opts);
    if (star->parsed())
      return cmd_star(spec_a, spec_b, point_text, route, opts);
    if (mean->parsed()) return cmd_mean(state_spec, obs_text, opts);
    if (verify->parsed()) return cmd_verify(profile, opts);
  } catch (const Error& e) {
    std::cerr << "error[" << e.code_name() << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error[Internal]: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
