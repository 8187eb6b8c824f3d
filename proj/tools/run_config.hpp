#pragma once

#include <map>
#include <optional>
#include <string>

#include "mmlab/models.hpp"

namespace mmlab::cli {

/// Deterministic parse of a line-oriented `key = value` config. Unknown
/// keys are rejected with the offending line number.
struct RunConfig {
  // space
  std::string generator = "euclidean_grid";  // or radial_density, hattori, file
  int dim = 2;
  double extent = 32.0;
  double spacing = 0.25;
  double eta = 2.0;
  double alpha = 2.0;
  double quad_tol = 1e-8;
  std::string stencil = "euclidean";  // or axis
  std::string space_file;
  std::optional<double> dimension_bound;

  // exponents
  double p = 1.0;
  std::optional<double> q;  // default: p* from the weight

  // growth window
  std::optional<double> window_lo, window_hi;
  int growth_samples = 16;
  int doubling_samples = 16;
  int reverse_pairs = 200;

  // covering
  std::string kappa = "auto";  // or a number
  int kappa_levels = 4;

  // family
  std::string family_kind = "random_smooth";
  int family_count = 40;
  std::optional<double> family_support;

  // heat
  std::string heat_weight = "uniform";  // or sobolev_p2
  int heat_centers = 3;
  int heat_times = 8;

  std::uint64_t seed = 1;
  std::string output_dir = "out";

  std::string canonical_text() const;

  static RunConfig from_file(const std::string& path);
  static RunConfig from_text(const std::string& text);
  void apply_override(const std::string& key, const std::string& value, int line = -1);

  SpaceSpec space_spec() const;
};

}  // namespace mmlab::cli
