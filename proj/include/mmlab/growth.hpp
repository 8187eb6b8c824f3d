#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mmlab/space.hpp"

namespace mmlab {

struct RadiusWindow {
  double lo = 0.0;
  double hi = 0.0;
};

struct AhlforsEstimate {
  double c_o = 1.0;
  double r_o = 0.0;
};

/// Volume-growth summary around the base point: fitted exponent, window
/// min/max of V(o,r)/r^eta, reverse-doubling constant and the sampled
/// doubling ratio.
struct GrowthReport {
  double eta = 0.0;
  double theta_inf = 0.0;
  double theta_sup = 0.0;
  double c_rd = 0.0;  // always theta_inf / (4 theta_sup)
  double threshold_a = 0.0;
  double c_d_hat = 0.0;
  RadiusWindow window;
  int samples = 0;
  std::optional<AhlforsEstimate> ahlfors;
  std::vector<std::pair<double, double>> volume_curve;  // (r, V(o,r))

  void validate(double dimension_bound) const;
};

/// Fits eta by least squares on log V(o,r) against log r over `samples`
/// geometric radii in `window`; measures theta_inf/theta_sup as the window
/// extremes of V/r^eta and the doubling ratio over sampled (x, r) pairs.
GrowthReport volume_growth(const DiscreteSpace& space, RadiusWindow window, int samples,
                           int doubling_samples = 16, std::uint64_t seed = 20240913);

struct ReverseDoublingRow {
  double r = 0.0, big_r = 0.0;
  double lhs = 0.0, rhs = 0.0, margin = 0.0;
  bool ok = false;
  bool valid_input = true;
};

struct ReverseDoublingCheck {
  std::vector<ReverseDoublingRow> rows;
  int violations = 0;
  int invalid_inputs = 0;
};

/// Samples `pairs` radius pairs A < r <= R inside the report window and
/// checks V(o,R)/V(o,r) >= C_RD (R/r)^eta. Violations are data, not errors.
ReverseDoublingCheck check_reverse_doubling(const DiscreteSpace& space, const GrowthReport& report,
                                            int pairs, std::uint64_t seed = 7);

/// Weighted measure mu = w_o m with the radial weight
/// w_o = V(o, d)^(p/(N-p)) d^(-Np/(N-p)); the 0/0 limit at the base point
/// is filled with the nearest-neighbor value.
struct WeightedMeasure {
  std::vector<double> mu;
  std::vector<double> weight;
  double p = 0.0;
  double p_star = 0.0;
  int base_point = 0;
  std::string base_point_rule;
};

WeightedMeasure weight_field(const DiscreteSpace& space, double p);

/// Trivial weight w == 1 (mu = m); stands in where no weight applies.
WeightedMeasure uniform_weight(const DiscreteSpace& space);

/// Shell averages of the weight as a function of radius: rows (r_mid, w_bar).
std::vector<std::pair<double, double>> radial_weight_profile(const DiscreteSpace& space,
                                                             const WeightedMeasure& w,
                                                             int shells = 24);

/// Local Ahlfors regularity scan: C_o = max over sampled vertices and radii
/// r < r_o of max(V(x,r)/r^N, r^N/V(x,r)).
AhlforsEstimate estimate_ahlfors(const DiscreteSpace& space, double r_o, int samples = 32,
                                 std::uint64_t seed = 11);

}  // namespace mmlab
