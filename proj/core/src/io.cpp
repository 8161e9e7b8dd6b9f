#include "symplectomo/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace symplectomo {

namespace fs = std::filesystem;
using nlohmann::json;

void RunConfig::validate() const {
  if (dim < 2) fail(ErrorCode::ConfigError, "dim must be >= 2");
  if (x_grid.count < 8) fail(ErrorCode::ConfigError, "x_grid.count must be >= 8");
  if (x_grid.step <= 0.0) fail(ErrorCode::ConfigError, "x_grid.step must be > 0");
  if (lattice_cutoff <= 0.0)
    fail(ErrorCode::ConfigError, "lattice_cutoff must be > 0");
  if (lattice_dr <= 0.0 || lattice_dtheta <= 0.0)
    fail(ErrorCode::ConfigError, "lattice spacings must be > 0");
  if (epsilon <= 0.0) fail(ErrorCode::ConfigError, "epsilon must be > 0");
}

RunConfig run_config_from_json(const json& j) {
  RunConfig cfg;
  try {
    cfg.dim = j.value("dim", cfg.dim);
    if (j.contains("x_grid")) {
      const auto& g = j.at("x_grid");
      cfg.x_grid.center = g.value("center", cfg.x_grid.center);
      cfg.x_grid.step = g.value("step", cfg.x_grid.step);
      cfg.x_grid.count = g.value("count", cfg.x_grid.count);
    }
    if (j.contains("lattice")) {
      const auto& l = j.at("lattice");
      cfg.lattice_cutoff = l.value("cutoff", cfg.lattice_cutoff);
      cfg.lattice_dr = l.value("dr", cfg.lattice_dr);
      cfg.lattice_dtheta = l.value("dtheta", cfg.lattice_dtheta);
    }
    cfg.epsilon = j.value("epsilon", cfg.epsilon);
    if (j.contains("tomo")) {
      const auto& t = j.at("tomo");
      cfg.tomo.smearing_scale = t.value("smearing_scale", cfg.tomo.smearing_scale);
      cfg.tomo.boundary_decay_tol =
          t.value("boundary_decay_tol", cfg.tomo.boundary_decay_tol);
      cfg.tomo.imag_residue_tol =
          t.value("imag_residue_tol", cfg.tomo.imag_residue_tol);
      cfg.tomo.quantizer_padding =
          t.value("quantizer_padding", cfg.tomo.quantizer_padding);
    }
    if (j.contains("convention")) {
      std::string c = j.at("convention").get<std::string>();
      if (c == "plain")
        cfg.convention = Convention::Plain;
      else if (c == "wigner")
        cfg.convention = Convention::Wigner;
      else
        fail(ErrorCode::ConfigError, "convention must be plain or wigner");
    }
    cfg.seed = j.value("seed", cfg.seed);
  } catch (const json::exception& e) {
    fail(ErrorCode::FormatError, std::string("bad config JSON: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

json run_config_to_json(const RunConfig& cfg) {
  return json{
      {"dim", cfg.dim},
      {"x_grid",
       {{"center", cfg.x_grid.center},
        {"step", cfg.x_grid.step},
        {"count", cfg.x_grid.count}}},
      {"lattice",
       {{"cutoff", cfg.lattice_cutoff},
        {"dr", cfg.lattice_dr},
        {"dtheta", cfg.lattice_dtheta}}},
      {"epsilon", cfg.epsilon},
      {"tomo",
       {{"smearing_scale", cfg.tomo.smearing_scale},
        {"boundary_decay_tol", cfg.tomo.boundary_decay_tol},
        {"imag_residue_tol", cfg.tomo.imag_residue_tol},
        {"quantizer_padding", cfg.tomo.quantizer_padding}}},
      {"convention", cfg.convention == Convention::Plain ? "plain" : "wigner"},
      {"seed", cfg.seed},
  };
}

RunConfig load_run_config(const fs::path& path) {
  return run_config_from_json(read_json(path));
}

void apply_env_seed(RunConfig& cfg) {
  const char* env = std::getenv("SYMPLECTOMO_SEED");
  if (!env || !*env) return;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0')
    fail(ErrorCode::ConfigError, "SYMPLECTOMO_SEED is not an integer");
  cfg.seed = v;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_text_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::FormatError, "cannot open " + tmp.string());
    out << content;
    if (!out) fail(ErrorCode::FormatError, "write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::FormatError, "rename failed: " + path.string());
}

std::string tomogram_csv_text(const TomogramCsv& rows) {
  if (rows.X.size() != rows.w.size())
    fail(ErrorCode::FormatError, "X/w column length mismatch");
  std::string out = "X,w\n";
  for (size_t i = 0; i < rows.X.size(); ++i) {
    out += format_double(rows.X[i]);
    out += ',';
    out += format_double(rows.w[i]);
    out += '\n';
  }
  return out;
}

void write_tomogram_csv(const fs::path& path, const TomogramCsv& rows) {
  write_text_atomic(path, tomogram_csv_text(rows));
}

void write_tomogram_csv(const fs::path& path, const TomogramSlice& slice) {
  TomogramCsv rows;
  rows.X = slice.x_axis.points();
  rows.w.assign(slice.density.data(), slice.density.data() + slice.density.size());
  write_tomogram_csv(path, rows);
}

namespace {

double parse_number(const std::string& tok) {
  try {
    size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size())
      fail(ErrorCode::FormatError, "trailing junk in number: " + tok);
    return v;
  } catch (const std::invalid_argument&) {
    fail(ErrorCode::FormatError, "not a number: " + tok);
  } catch (const std::out_of_range&) {
    fail(ErrorCode::FormatError, "number out of range: " + tok);
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::vector<double>> read_csv(const fs::path& path,
                                          const std::string& header,
                                          size_t columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::FormatError, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line))
    fail(ErrorCode::FormatError, "empty file: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header)
    fail(ErrorCode::FormatError,
         "expected header '" + header + "' in " + path.string());
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto toks = split(line, ',');
    if (toks.size() != columns)
      fail(ErrorCode::FormatError, "bad column count in line: " + line);
    std::vector<double> row(columns);
    for (size_t i = 0; i < columns; ++i) row[i] = parse_number(toks[i]);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

TomogramCsv read_tomogram_csv(const fs::path& path) {
  TomogramCsv out;
  for (const auto& row : read_csv(path, "X,w", 2)) {
    out.X.push_back(row[0]);
    out.w.push_back(row[1]);
  }
  return out;
}

AxisGrid axis_from_points(const std::vector<double>& xs) {
  if (xs.size() < 8) fail(ErrorCode::FormatError, "axis needs >= 8 points");
  double step = (xs.back() - xs.front()) / double(xs.size() - 1);
  if (step <= 0.0) fail(ErrorCode::FormatError, "axis is not increasing");
  // absolute values round-trip through 9 significant digits, so tolerate
  // per-point jitter proportional to the largest magnitude on the axis
  double tol = 1e-7 * std::max({1.0, std::abs(xs.front()), std::abs(xs.back())});
  for (size_t i = 1; i < xs.size(); ++i)
    if (std::abs(xs[i] - xs[i - 1] - step) > tol)
      fail(ErrorCode::FormatError, "axis is not uniform");
  AxisGrid axis;
  axis.count = static_cast<int>(xs.size());
  axis.step = step;
  axis.center = xs[axis.count / 2];
  return axis;
}

std::string grid_csv_text(const AxisGrid& q_axis, const AxisGrid& p_axis,
                          const Eigen::MatrixXd& values) {
  std::string out = "q,p,value\n";
  for (int i = 0; i < q_axis.count; ++i)
    for (int j = 0; j < p_axis.count; ++j) {
      out += format_double(q_axis.point(i));
      out += ',';
      out += format_double(p_axis.point(j));
      out += ',';
      out += format_double(values(i, j));
      out += '\n';
    }
  return out;
}

void write_grid_csv(const fs::path& path, const AxisGrid& q_axis,
                    const AxisGrid& p_axis, const Eigen::MatrixXd& values) {
  write_text_atomic(path, grid_csv_text(q_axis, p_axis, values));
}

GridCsv read_grid_csv(const fs::path& path) {
  GridCsv out;
  for (const auto& row : read_csv(path, "q,p,value", 3)) {
    out.q.push_back(row[0]);
    out.p.push_back(row[1]);
    out.value.push_back(row[2]);
  }
  return out;
}

json matrix_to_json(const OperatorMatrix& m) {
  json entries = json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      entries.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
  return json{{"dim", m.rows()}, {"entries", std::move(entries)}};
}

OperatorMatrix matrix_from_json(const json& j) {
  try {
    int dim = j.at("dim").get<int>();
    const auto& entries = j.at("entries");
    if (dim < 1 || entries.size() != static_cast<size_t>(dim) * dim)
      fail(ErrorCode::FormatError, "matrix entry count does not match dim");
    OperatorMatrix m(dim, dim);
    size_t k = 0;
    for (int i = 0; i < dim; ++i)
      for (int c = 0; c < dim; ++c, ++k)
        m(i, c) = Complex(entries[k].at(0).get<double>(),
                          entries[k].at(1).get<double>());
    return m;
  } catch (const json::exception& e) {
    fail(ErrorCode::FormatError, std::string("bad matrix JSON: ") + e.what());
  }
}

void write_matrix_json(const fs::path& path, const OperatorMatrix& m) {
  write_json(path, matrix_to_json(m));
}

OperatorMatrix read_matrix_json(const fs::path& path) {
  return matrix_from_json(read_json(path));
}

void write_json(const fs::path& path, const json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::FormatError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::FormatError,
         "bad JSON in " + path.string() + ": " + e.what());
  }
}

namespace {

std::vector<double> parse_number_list(const std::string& text, size_t want,
                                      const std::string& context) {
  auto toks = split(text, ',');
  if (toks.size() != want)
    fail(ErrorCode::ParseError,
         context + " needs " + std::to_string(want) + " numbers, got '" +
             text + "'");
  std::vector<double> out;
  for (const auto& t : toks) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(t, &pos));
      if (pos != t.size()) throw std::invalid_argument(t);
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "bad number '" + t + "' in " + context);
    }
  }
  return out;
}

ParsedSpec parse_simple_spec(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    fail(ErrorCode::ParseError, "state spec missing ':' in '" + text + "'");
  std::string kind = text.substr(0, colon);
  std::string args = text.substr(colon + 1);
  ParsedSpec out;
  if (kind == "fock") {
    double n = parse_number_list(args, 1, "fock")[0];
    if (n < 0 || n != std::floor(n))
      fail(ErrorCode::ParseError, "fock level must be a nonnegative integer: '" +
                                      args + "'");
    out.state = FockSpec{static_cast<int>(n)};
  } else if (kind == "coherent") {
    auto v = parse_number_list(args, 2, "coherent");
    out.state = CoherentSpec{Complex(v[0], v[1])};
  } else if (kind == "thermal") {
    double nbar = parse_number_list(args, 1, "thermal")[0];
    if (nbar < 0)
      fail(ErrorCode::ParseError, "thermal nbar must be >= 0: '" + args + "'");
    out.state = ThermalSpec{nbar};
  } else if (kind == "cgauss") {
    auto v = parse_number_list(args, 5, "cgauss");
    GaussianForm g{v[0], v[1], v[2], v[3], v[4]};
    g.validate();
    out.classical = true;
    out.distribution = ClassicalDistribution{g, Convention::Plain};
  } else if (kind == "cpoint") {
    auto v = parse_number_list(args, 2, "cpoint");
    out.classical = true;
    out.distribution =
        ClassicalDistribution{PointForm{v[0], v[1]}, Convention::Plain};
  } else {
    fail(ErrorCode::ParseError, "unknown state kind '" + kind + "'");
  }
  return out;
}

}  // namespace

ParsedSpec parse_state_spec(const std::string& text) {
  if (text.rfind("mix:", 0) != 0) return parse_simple_spec(text);
  std::string body = text.substr(4);
  MixtureSpec mix;
  for (const auto& part : split(body, '+')) {
    auto star = part.find('*');
    if (star == std::string::npos)
      fail(ErrorCode::ParseError,
           "mixture component needs weight*spec, got '" + part + "'");
    double weight;
    try {
      size_t pos = 0;
      weight = std::stod(part.substr(0, star), &pos);
      if (pos != star) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError,
           "bad mixture weight '" + part.substr(0, star) + "'");
    }
    ParsedSpec component = parse_simple_spec(part.substr(star + 1));
    if (component.classical)
      fail(ErrorCode::ParseError,
           "mixture components must be quantum states: '" +
               part.substr(star + 1) + "'");
    mix.components.emplace_back(weight, component.state);
  }
  ParsedSpec out;
  out.state = std::move(mix);
  return out;
}

}  // namespace symplectomo
