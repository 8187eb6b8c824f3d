#include "mmlab/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace mmlab {

void GrowthReport::validate(double dimension_bound) const {
  if (!(theta_inf > 0.0) || !(theta_inf <= theta_sup) || !std::isfinite(theta_sup))
    throw Error(ErrorCode::Precondition, "theta estimates out of order");
  // fitted exponent may overshoot the dimension bound by sampling noise;
  // allow 5% slack before declaring the report inconsistent.
  if (!(eta > 1.0) || eta > 1.05 * dimension_bound)
    throw Error(ErrorCode::Precondition, "eta outside (1, N]");
  double expected = theta_inf / (4.0 * theta_sup);
  if (std::abs(c_rd - expected) > 1e-15 * std::max(1.0, expected))
    throw Error(ErrorCode::Precondition, "reverse-doubling constant inconsistent");
}

GrowthReport volume_growth(const DiscreteSpace& space, RadiusWindow window, int samples,
                           int doubling_samples, std::uint64_t seed) {
  if (samples < 8) throw Error(ErrorCode::WindowTooSmall, "need at least 8 radii", samples);
  if (!(window.lo > 0.0) || !(window.hi > window.lo))
    throw Error(ErrorCode::WindowTooSmall, "empty radius window");
  const double lo_allowed = 10.0 * space.min_edge_length();
  const double hi_allowed = 0.5 * space.diameter_estimate();
  if (window.lo < lo_allowed || window.hi > hi_allowed)
    throw Error(ErrorCode::WindowTooSmall,
                "window must sit inside [10 min_edge, diameter/2] = [" +
                    std::to_string(lo_allowed) + ", " + std::to_string(hi_allowed) + "]");

  const auto& dist = space.base_distances();

  GrowthReport rep;
  rep.window = window;
  rep.samples = samples;
  rep.threshold_a = 10.0 * space.min_edge_length();

  // Geometric radii; V(o,r) from the cached base-point distances.
  std::vector<double> radii(static_cast<std::size_t>(samples));
  const double ratio = std::pow(window.hi / window.lo, 1.0 / (samples - 1));
  for (int i = 0; i < samples; ++i)
    radii[static_cast<std::size_t>(i)] = window.lo * std::pow(ratio, i);

  std::vector<std::pair<double, int>> order;  // (distance, vertex)
  order.reserve(static_cast<std::size_t>(space.vertex_count()));
  for (int v = 0; v < space.vertex_count(); ++v)
    order.emplace_back(dist[static_cast<std::size_t>(v)], v);
  std::sort(order.begin(), order.end());
  std::vector<double> cum(order.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    acc += space.measure(order[i].second);
    cum[i] = acc;
  }
  auto volume_at = [&](double r) {
    // measure of the open ball {d < r}
    auto it = std::lower_bound(order.begin(), order.end(), std::make_pair(r, -1));
    std::size_t k = static_cast<std::size_t>(it - order.begin());
    return k == 0 ? 0.0 : cum[k - 1];
  };

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  rep.volume_curve.reserve(radii.size());
  for (double r : radii) {
    double v = volume_at(r);
    if (!(v > 0.0))
      throw Error(ErrorCode::WindowTooSmall, "empty ball at radius " + std::to_string(r));
    rep.volume_curve.emplace_back(r, v);
    double lx = std::log(r), ly = std::log(v);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(samples);
  rep.eta = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  rep.theta_inf = std::numeric_limits<double>::infinity();
  rep.theta_sup = 0.0;
  for (const auto& [r, v] : rep.volume_curve) {
    double t = v / std::pow(r, rep.eta);
    rep.theta_inf = std::min(rep.theta_inf, t);
    rep.theta_sup = std::max(rep.theta_sup, t);
  }
  rep.c_rd = rep.theta_inf / (4.0 * rep.theta_sup);

  // Doubling ratio over sampled (x, r): interior vertices only, so the
  // truncation boundary does not contaminate the estimate.
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_vertex(0, space.vertex_count() - 1);
  std::uniform_real_distribution<double> pick_radius(rep.threshold_a / 2.0, window.hi / 4.0);
  rep.c_d_hat = 0.0;
  int accepted = 0;
  for (int tries = 0; accepted < doubling_samples && tries < 50 * doubling_samples; ++tries) {
    int x = pick_vertex(rng);
    double r = pick_radius(rng);
    if (dist[static_cast<std::size_t>(x)] + 2.0 * r > hi_allowed * 2.0) continue;
    auto d = space.distances_from(x, 2.0 * r);
    double v1 = 0.0, v2 = 0.0;
    for (int w = 0; w < space.vertex_count(); ++w) {
      double dw = d[static_cast<std::size_t>(w)];
      if (dw < r) v1 += space.measure(w);
      if (dw < 2.0 * r) v2 += space.measure(w);
    }
    if (v1 <= 0.0) continue;
    rep.c_d_hat = std::max(rep.c_d_hat, v2 / v1);
    ++accepted;
  }
  return rep;
}

ReverseDoublingCheck check_reverse_doubling(const DiscreteSpace& space, const GrowthReport& report,
                                            int pairs, std::uint64_t seed) {
  report.validate(space.dimension_bound());
  ReverseDoublingCheck out;
  out.rows.reserve(static_cast<std::size_t>(pairs));

  std::mt19937_64 rng(seed);
  const double lo = std::max(report.threshold_a, report.window.lo);
  std::uniform_real_distribution<double> pick(std::log(lo), std::log(report.window.hi));

  for (int k = 0; k < pairs; ++k) {
    double r = std::exp(pick(rng));
    double big = std::exp(pick(rng));
    ReverseDoublingRow row;
    row.r = r;
    row.big_r = big;
    if (big < r) {
      row.valid_input = false;
      ++out.invalid_inputs;
      out.rows.push_back(row);
      continue;
    }
    double vr = ball_measure(space, space.base_point(), r);
    double vR = ball_measure(space, space.base_point(), big);
    row.lhs = vR / vr;
    row.rhs = report.c_rd * std::pow(big / r, report.eta);
    row.margin = row.lhs - row.rhs;
    row.ok = row.lhs >= row.rhs;
    if (!row.ok) ++out.violations;
    out.rows.push_back(row);
  }
  return out;
}

WeightedMeasure weight_field(const DiscreteSpace& space, double p) {
  const double n_bound = space.dimension_bound();
  if (!(p >= 1.0)) throw Error(ErrorCode::BadExponent, "p must be at least 1");
  if (!(p < n_bound)) throw Error(ErrorCode::BadExponent, "p must be below the dimension bound");

  WeightedMeasure w;
  w.p = p;
  w.p_star = n_bound * p / (n_bound - p);
  w.base_point = space.base_point();
  w.base_point_rule = "nearest-neighbor extension";
  w.weight.assign(static_cast<std::size_t>(space.vertex_count()), 0.0);
  w.mu.assign(static_cast<std::size_t>(space.vertex_count()), 0.0);

  const auto& dist = space.base_distances();
  const double e1 = p / (n_bound - p);
  const double e2 = n_bound * p / (n_bound - p);

  // Sort once so V(o, d(v)) comes from a prefix sum, not per-vertex balls.
  std::vector<std::pair<double, int>> order;
  order.reserve(static_cast<std::size_t>(space.vertex_count()));
  for (int v = 0; v < space.vertex_count(); ++v)
    order.emplace_back(dist[static_cast<std::size_t>(v)], v);
  std::sort(order.begin(), order.end());

  double acc = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    // vertices sharing a distance all see the same open-ball measure
    std::size_t j = i;
    while (j < order.size() && order[j].first == order[i].first) ++j;
    double v_open = acc;  // measure of {d < d(v)}
    for (std::size_t k = i; k < j; ++k) {
      int v = order[k].second;
      double d = order[k].first;
      if (v == space.base_point() || d == 0.0 || v_open <= 0.0) continue;
      w.weight[static_cast<std::size_t>(v)] = std::pow(v_open, e1) * std::pow(d, -e2);
    }
    for (std::size_t k = i; k < j; ++k) acc += space.measure(order[k].second);
    i = j;
  }

  // Base point (and any coincident-distance stragglers): nearest neighbor.
  int o = space.base_point();
  const auto nbrs = space.neighbors(o);
  if (!nbrs.empty()) {
    int nearest = nbrs[0].to;
    double best = nbrs[0].length;
    for (const auto& nb : nbrs)
      if (nb.length < best) {
        best = nb.length;
        nearest = nb.to;
      }
    w.weight[static_cast<std::size_t>(o)] = w.weight[static_cast<std::size_t>(nearest)];
  } else {
    w.weight[static_cast<std::size_t>(o)] = 1.0;
  }
  for (int v = 0; v < space.vertex_count(); ++v)
    if (!(w.weight[static_cast<std::size_t>(v)] > 0.0))
      w.weight[static_cast<std::size_t>(v)] = w.weight[static_cast<std::size_t>(o)];

  for (int v = 0; v < space.vertex_count(); ++v) {
    w.mu[static_cast<std::size_t>(v)] = w.weight[static_cast<std::size_t>(v)] * space.measure(v);
    if (!(w.mu[static_cast<std::size_t>(v)] > 0.0) ||
        !std::isfinite(w.mu[static_cast<std::size_t>(v)]))
      throw Error(ErrorCode::NonPositiveMeasure, "weighted mass at vertex " + std::to_string(v),
                  v);
  }
  return w;
}

WeightedMeasure uniform_weight(const DiscreteSpace& space) {
  WeightedMeasure w;
  w.p = 0.0;
  w.p_star = 0.0;
  w.base_point = space.base_point();
  w.base_point_rule = "uniform";
  w.weight.assign(static_cast<std::size_t>(space.vertex_count()), 1.0);
  w.mu = space.measures();
  return w;
}

std::vector<std::pair<double, double>> radial_weight_profile(const DiscreteSpace& space,
                                                             const WeightedMeasure& w,
                                                             int shells) {
  const auto& dist = space.base_distances();
  double d_max = 0.0;
  for (double d : dist) d_max = std::max(d_max, d);
  std::vector<double> mass(static_cast<std::size_t>(shells), 0.0);
  std::vector<double> wsum(static_cast<std::size_t>(shells), 0.0);
  for (int v = 0; v < space.vertex_count(); ++v) {
    double d = dist[static_cast<std::size_t>(v)];
    int s = std::min(shells - 1, static_cast<int>(d / d_max * shells));
    mass[static_cast<std::size_t>(s)] += space.measure(v);
    wsum[static_cast<std::size_t>(s)] += space.measure(v) * w.weight[static_cast<std::size_t>(v)];
  }
  std::vector<std::pair<double, double>> rows;
  for (int s = 0; s < shells; ++s) {
    if (mass[static_cast<std::size_t>(s)] <= 0.0) continue;
    double mid = (s + 0.5) * d_max / shells;
    rows.emplace_back(mid, wsum[static_cast<std::size_t>(s)] / mass[static_cast<std::size_t>(s)]);
  }
  return rows;
}

AhlforsEstimate estimate_ahlfors(const DiscreteSpace& space, double r_o, int samples,
                                 std::uint64_t seed) {
  const double n_bound = space.dimension_bound();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_vertex(0, space.vertex_count() - 1);
  AhlforsEstimate est;
  est.r_o = r_o;
  est.c_o = 1.0;
  // V(x, r)/r^N is piecewise r^-N between realized distances, so its
  // extremes over r < r_o sit at those distances: the closed ball from the
  // right, the open ball from the left. Scan them exactly per center.
  for (int k = 0; k < samples; ++k) {
    int x = k == 0 ? space.base_point() : pick_vertex(rng);
    auto dist = space.distances_from(x, r_o);
    double open_mass = 0.0;
    std::size_t i = 0;
    std::vector<std::pair<double, double>> by_dist;  // (d, mass at d)
    for (int v = 0; v < space.vertex_count(); ++v) {
      double d = dist[static_cast<std::size_t>(v)];
      if (std::isfinite(d) && d < r_o) by_dist.emplace_back(d, space.measure(v));
    }
    std::sort(by_dist.begin(), by_dist.end());
    while (i < by_dist.size()) {
      std::size_t j = i;
      double shell = 0.0;
      while (j < by_dist.size() && by_dist[j].first == by_dist[i].first) shell += by_dist[j++].second;
      double d = by_dist[i].first;
      if (d > 0.0) {
        double closed = open_mass + shell;
        double hi = closed / std::pow(d, n_bound);
        est.c_o = std::max(est.c_o, hi);
        if (open_mass > 0.0) {
          double lo = open_mass / std::pow(d, n_bound);
          if (lo > 0.0) est.c_o = std::max(est.c_o, 1.0 / lo);
        }
      }
      open_mass += shell;
      i = j;
    }
  }
  return est;
}

}  // namespace mmlab
