#include "run_config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mmlab/errors.hpp"

namespace mmlab::cli {

namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& key, int line) {
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigError, "bad numeric value for '" + key + "'", line);
  }
}

int parse_int(const std::string& v, const std::string& key, int line) {
  double x = parse_double(v, key, line);
  int i = static_cast<int>(x);
  if (static_cast<double>(i) != x)
    throw Error(ErrorCode::ConfigError, "expected integer for '" + key + "'", line);
  return i;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

void RunConfig::apply_override(const std::string& key, const std::string& value, int line) {
  if (key == "space.generator") {
    if (value != "euclidean_grid" && value != "radial_density" && value != "hattori" &&
        value != "file")
      throw Error(ErrorCode::ConfigError, "unknown generator '" + value + "'", line);
    generator = value;
  } else if (key == "space.dim")
    dim = parse_int(value, key, line);
  else if (key == "space.extent")
    extent = parse_double(value, key, line);
  else if (key == "space.spacing")
    spacing = parse_double(value, key, line);
  else if (key == "space.eta")
    eta = parse_double(value, key, line);
  else if (key == "space.alpha")
    alpha = parse_double(value, key, line);
  else if (key == "space.quad_tol")
    quad_tol = parse_double(value, key, line);
  else if (key == "space.stencil") {
    if (value != "euclidean" && value != "axis")
      throw Error(ErrorCode::ConfigError, "unknown stencil '" + value + "'", line);
    stencil = value;
  } else if (key == "space.file")
    space_file = value;
  else if (key == "space.N")
    dimension_bound = parse_double(value, key, line);
  else if (key == "exponents.p")
    p = parse_double(value, key, line);
  else if (key == "exponents.q")
    q = parse_double(value, key, line);
  else if (key == "growth.window_lo")
    window_lo = parse_double(value, key, line);
  else if (key == "growth.window_hi")
    window_hi = parse_double(value, key, line);
  else if (key == "growth.samples")
    growth_samples = parse_int(value, key, line);
  else if (key == "growth.doubling_samples")
    doubling_samples = parse_int(value, key, line);
  else if (key == "growth.reverse_pairs")
    reverse_pairs = parse_int(value, key, line);
  else if (key == "covering.kappa")
    kappa = value;
  else if (key == "covering.levels")
    kappa_levels = parse_int(value, key, line);
  else if (key == "family.kind") {
    if (value != "radial_bumps" && value != "random_smooth" && value != "indicator_smoothings")
      throw Error(ErrorCode::ConfigError, "unknown family kind '" + value + "'", line);
    family_kind = value;
  } else if (key == "family.count")
    family_count = parse_int(value, key, line);
  else if (key == "family.support")
    family_support = parse_double(value, key, line);
  else if (key == "heat.weight") {
    if (value != "uniform" && value != "sobolev_p2")
      throw Error(ErrorCode::ConfigError, "unknown heat weight '" + value + "'", line);
    heat_weight = value;
  } else if (key == "heat.centers")
    heat_centers = parse_int(value, key, line);
  else if (key == "heat.times")
    heat_times = parse_int(value, key, line);
  else if (key == "seed")
    seed = static_cast<std::uint64_t>(parse_double(value, key, line));
  else if (key == "output_dir")
    output_dir = value;
  else
    throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'", line);
}

RunConfig RunConfig::from_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    auto eq = body.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ConfigError, "expected 'key = value'", line_no);
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key.empty() || value.empty())
      throw Error(ErrorCode::ConfigError, "empty key or value", line_no);
    cfg.apply_override(key, value, line_no);
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

std::string RunConfig::canonical_text() const {
  std::ostringstream out;
  out << "covering.kappa = " << kappa << '\n';
  out << "covering.levels = " << kappa_levels << '\n';
  out << "exponents.p = " << fmt(p) << '\n';
  if (q) out << "exponents.q = " << fmt(*q) << '\n';
  out << "family.count = " << family_count << '\n';
  out << "family.kind = " << family_kind << '\n';
  if (family_support) out << "family.support = " << fmt(*family_support) << '\n';
  out << "growth.doubling_samples = " << doubling_samples << '\n';
  out << "growth.reverse_pairs = " << reverse_pairs << '\n';
  out << "growth.samples = " << growth_samples << '\n';
  if (window_lo) out << "growth.window_lo = " << fmt(*window_lo) << '\n';
  if (window_hi) out << "growth.window_hi = " << fmt(*window_hi) << '\n';
  out << "heat.centers = " << heat_centers << '\n';
  out << "heat.times = " << heat_times << '\n';
  out << "heat.weight = " << heat_weight << '\n';
  out << "seed = " << seed << '\n';
  out << "space.alpha = " << fmt(alpha) << '\n';
  out << "space.dim = " << dim << '\n';
  out << "space.extent = " << fmt(extent) << '\n';
  out << "space.eta = " << fmt(eta) << '\n';
  if (space_file.size()) out << "space.file = " << space_file << '\n';
  out << "space.generator = " << generator << '\n';
  if (dimension_bound) out << "space.N = " << fmt(*dimension_bound) << '\n';
  out << "space.quad_tol = " << fmt(quad_tol) << '\n';
  out << "space.spacing = " << fmt(spacing) << '\n';
  out << "space.stencil = " << stencil << '\n';
  return out.str();
}

SpaceSpec RunConfig::space_spec() const {
  SpaceSpec spec;
  if (generator == "euclidean_grid")
    spec = euclidean_grid(dim, extent, spacing, eta);
  else if (generator == "radial_density")
    spec = radial_density(dim, extent, spacing, eta);
  else if (generator == "hattori")
    spec = hattori_space(alpha, extent, spacing);
  else if (generator == "file") {
    spec.generator = SpaceSpec::Generator::file;
    spec.path = space_file;
  }
  if (generator != "file") {
    spec.quad_tol = quad_tol;
    spec.stencil =
        stencil == "axis" ? SpaceSpec::Stencil::axis : SpaceSpec::Stencil::euclidean;
    if (dimension_bound) spec.dimension_bound = *dimension_bound;
  }
  return spec;
}

}  // namespace mmlab::cli
