#include "mmlab/space.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

namespace mmlab {

bool all_finite(const ScalarField& f) {
  for (double x : f)
    if (!std::isfinite(x)) return false;
  return true;
}

VertexSubset::VertexSubset(std::vector<int> sorted_unique) : ids_(std::move(sorted_unique)) {
  for (std::size_t i = 1; i < ids_.size(); ++i)
    if (ids_[i - 1] >= ids_[i])
      throw Error(ErrorCode::Precondition, "VertexSubset indices must be sorted and distinct");
}

VertexSubset VertexSubset::from_unsorted(std::vector<int> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  VertexSubset s;
  s.ids_ = std::move(ids);
  return s;
}

bool VertexSubset::contains(int v) const {
  return std::binary_search(ids_.begin(), ids_.end(), v);
}

VertexSubset VertexSubset::set_union(const VertexSubset& other) const {
  std::vector<int> out;
  out.reserve(ids_.size() + other.ids_.size());
  std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                 std::back_inserter(out));
  VertexSubset s;
  s.ids_ = std::move(out);
  return s;
}

VertexSubset VertexSubset::set_difference(const VertexSubset& other) const {
  std::vector<int> out;
  std::set_difference(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                      std::back_inserter(out));
  VertexSubset s;
  s.ids_ = std::move(out);
  return s;
}

bool VertexSubset::intersects(const VertexSubset& other) const {
  auto a = ids_.begin();
  auto b = other.ids_.begin();
  while (a != ids_.end() && b != other.ids_.end()) {
    if (*a == *b) return true;
    if (*a < *b)
      ++a;
    else
      ++b;
  }
  return false;
}

bool VertexSubset::is_subset_of(const VertexSubset& other) const {
  return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
}

int DiscreteSpace::Builder::add_vertex(std::vector<double> coords, double measure) {
  coords_.push_back(std::move(coords));
  measures_.push_back(measure);
  return static_cast<int>(measures_.size()) - 1;
}

void DiscreteSpace::Builder::add_edge(int u, int v, double length) {
  edges_.push_back({u, v, length});
}

DiscreteSpace DiscreteSpace::Builder::build() && {
  DiscreteSpace s;
  const int n = static_cast<int>(measures_.size());
  if (n == 0) throw Error(ErrorCode::Precondition, "space needs at least one vertex");

  for (int i = 0; i < n; ++i) {
    double m = measures_[static_cast<std::size_t>(i)];
    if (!(m > 0.0) || !std::isfinite(m))
      throw Error(ErrorCode::NonPositiveMeasure, "vertex " + std::to_string(i), i);
  }
  s.coord_dim_ = coords_.empty() || coords_[0].empty() ? 0 : static_cast<int>(coords_[0].size());
  for (const auto& c : coords_)
    if (static_cast<int>(c.size()) != s.coord_dim_)
      throw Error(ErrorCode::Precondition, "inconsistent coordinate dimension");

  // Deduplicate undirected edges, reject self-loops and bad endpoints.
  std::vector<SpaceEdge> cleaned;
  cleaned.reserve(edges_.size());
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    SpaceEdge e = edges_[k];
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw Error(ErrorCode::Precondition, "edge endpoint out of range", static_cast<long>(k));
    if (e.u == e.v)
      throw Error(ErrorCode::Precondition, "self-loop at vertex " + std::to_string(e.u), e.u);
    if (!(e.length > 0.0) || !std::isfinite(e.length))
      throw Error(ErrorCode::NonPositiveLength,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")", e.u);
    if (e.u > e.v) std::swap(e.u, e.v);
    cleaned.push_back(e);
  }
  std::sort(cleaned.begin(), cleaned.end(), [](const SpaceEdge& a, const SpaceEdge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  cleaned.erase(std::unique(cleaned.begin(), cleaned.end(),
                            [](const SpaceEdge& a, const SpaceEdge& b) {
                              return a.u == b.u && a.v == b.v;
                            }),
                cleaned.end());

  if (base_point_ < 0 || base_point_ >= n)
    throw Error(ErrorCode::Precondition, "base point out of range", base_point_);
  if (!(dimension_bound_ > 1.0))
    throw Error(ErrorCode::Precondition, "dimension bound must exceed 1");

  s.coords_store_ = std::move(coords_);
  s.measures_ = std::move(measures_);
  s.edges_ = std::move(cleaned);
  s.base_point_ = base_point_;
  s.dimension_bound_ = dimension_bound_;
  s.total_measure_ = 0.0;
  for (double m : s.measures_) s.total_measure_ += m;

  // CSR adjacency.
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  for (const auto& e : s.edges_) {
    ++degree[static_cast<std::size_t>(e.u)];
    ++degree[static_cast<std::size_t>(e.v)];
  }
  s.adjacency_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i)
    s.adjacency_offsets_[static_cast<std::size_t>(i) + 1] =
        s.adjacency_offsets_[static_cast<std::size_t>(i)] + degree[static_cast<std::size_t>(i)];
  s.adjacency_.resize(s.edges_.size() * 2);
  std::vector<int> fill(s.adjacency_offsets_.begin(), s.adjacency_offsets_.end() - 1);
  for (std::size_t k = 0; k < s.edges_.size(); ++k) {
    const auto& e = s.edges_[k];
    s.adjacency_[static_cast<std::size_t>(fill[static_cast<std::size_t>(e.u)]++)] = {
        e.v, e.length, static_cast<int>(k)};
    s.adjacency_[static_cast<std::size_t>(fill[static_cast<std::size_t>(e.v)]++)] = {
        e.u, e.length, static_cast<int>(k)};
  }

  s.min_edge_length_ = s.edges_.empty() ? 0.0 : s.edges_.front().length;
  s.max_edge_length_ = 0.0;
  for (const auto& e : s.edges_) {
    s.min_edge_length_ = std::min(s.min_edge_length_, e.length);
    s.max_edge_length_ = std::max(s.max_edge_length_, e.length);
  }
  s.max_incident_.assign(static_cast<std::size_t>(n), 0.0);
  for (const auto& e : s.edges_) {
    auto& mu = s.max_incident_[static_cast<std::size_t>(e.u)];
    auto& mv = s.max_incident_[static_cast<std::size_t>(e.v)];
    mu = std::max(mu, e.length);
    mv = std::max(mv, e.length);
  }

  // Connectivity from the base point; names the first unreached vertex.
  s.base_distances_ = s.distances_from(s.base_point_);
  for (int i = 0; i < n; ++i)
    if (!std::isfinite(s.base_distances_[static_cast<std::size_t>(i)]))
      throw Error(ErrorCode::Disconnected, "vertex " + std::to_string(i) + " unreachable", i);

  return s;
}

std::span<const double> DiscreteSpace::coords(int v) const {
  const auto& c = coords_store_[static_cast<std::size_t>(v)];
  return {c.data(), c.size()};
}

std::span<const DiscreteSpace::Neighbor> DiscreteSpace::neighbors(int v) const {
  std::size_t begin = static_cast<std::size_t>(adjacency_offsets_[static_cast<std::size_t>(v)]);
  std::size_t end = static_cast<std::size_t>(adjacency_offsets_[static_cast<std::size_t>(v) + 1]);
  return {adjacency_.data() + begin, end - begin};
}

void DiscreteSpace::check_vertex(int v, const char* what) const {
  if (v < 0 || v >= vertex_count())
    throw Error(ErrorCode::Precondition, std::string(what) + ": vertex out of range", v);
}

std::vector<double> DiscreteSpace::distances_from(int source, double cutoff) const {
  check_vertex(source, "distances_from");
  const int n = vertex_count();
  std::vector<double> dist(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[static_cast<std::size_t>(source)] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[static_cast<std::size_t>(v)]) continue;
    if (d > cutoff) break;
    for (const auto& nb : neighbors(v)) {
      double nd = d + nb.length;
      if (nd < dist[static_cast<std::size_t>(nb.to)]) {
        dist[static_cast<std::size_t>(nb.to)] = nd;
        if (nd <= cutoff) heap.emplace(nd, nb.to);
      }
    }
  }
  return dist;
}

const std::vector<double>& DiscreteSpace::base_distances() const { return base_distances_; }

double DiscreteSpace::diameter_estimate() const {
  if (diameter_estimate_ >= 0.0) return diameter_estimate_;
  auto far_point = [&](const std::vector<double>& d) {
    int best = 0;
    for (int i = 1; i < vertex_count(); ++i)
      if (d[static_cast<std::size_t>(i)] > d[static_cast<std::size_t>(best)]) best = i;
    return best;
  };
  int a = far_point(base_distances());
  auto da = distances_from(a);
  int b = far_point(da);
  diameter_estimate_ = da[static_cast<std::size_t>(b)];
  return diameter_estimate_;
}

Ball ball(const DiscreteSpace& space, int center, double r) {
  if (r < 0.0) throw Error(ErrorCode::NegativeRadius, "radius " + std::to_string(r));
  space.check_vertex(center, "ball");
  auto dist = space.distances_from(center, r);
  std::vector<int> ids;
  double total = 0.0;
  for (int i = 0; i < space.vertex_count(); ++i) {
    if (dist[static_cast<std::size_t>(i)] < r) {
      ids.push_back(i);
      total += space.measure(i);
    }
  }
  return {VertexSubset(std::move(ids)), total};
}

double ball_measure(const DiscreteSpace& space, int center, double r) {
  if (r < 0.0) throw Error(ErrorCode::NegativeRadius, "radius " + std::to_string(r));
  space.check_vertex(center, "ball_measure");
  auto dist = space.distances_from(center, r);
  double total = 0.0;
  for (int i = 0; i < space.vertex_count(); ++i)
    if (dist[static_cast<std::size_t>(i)] < r) total += space.measure(i);
  return total;
}

VertexSubset sphere_shell(const DiscreteSpace& space, int center, double r) {
  if (r < 0.0) throw Error(ErrorCode::NegativeRadius, "radius " + std::to_string(r));
  space.check_vertex(center, "sphere_shell");
  auto dist = space.distances_from(center, r + space.max_edge_length());
  std::vector<int> ids;
  for (int i = 0; i < space.vertex_count(); ++i) {
    double d = dist[static_cast<std::size_t>(i)];
    if (d >= r && d < r + space.max_incident_edge(i)) ids.push_back(i);
  }
  return VertexSubset(std::move(ids));
}

std::vector<VertexSubset> connected_components(const DiscreteSpace& space,
                                               const VertexSubset& subset) {
  std::vector<VertexSubset> out;
  if (subset.empty()) return out;

  // Union-find over the member list; edges restricted to the subset.
  const auto& ids = subset.ids();
  std::vector<int> local(static_cast<std::size_t>(space.vertex_count()), -1);
  for (std::size_t i = 0; i < ids.size(); ++i)
    local[static_cast<std::size_t>(ids[i])] = static_cast<int>(i);

  std::vector<int> parent(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };

  for (int v : ids) {
    int lv = local[static_cast<std::size_t>(v)];
    for (const auto& nb : space.neighbors(v)) {
      int lw = local[static_cast<std::size_t>(nb.to)];
      if (lw < 0) continue;
      int ra = find(lv), rb = find(lw);
      if (ra != rb) parent[static_cast<std::size_t>(ra)] = rb;
    }
  }

  std::vector<int> root_to_class(ids.size(), -1);
  std::vector<std::vector<int>> classes;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    int r = find(static_cast<int>(i));
    if (root_to_class[static_cast<std::size_t>(r)] < 0) {
      root_to_class[static_cast<std::size_t>(r)] = static_cast<int>(classes.size());
      classes.emplace_back();
    }
    classes[static_cast<std::size_t>(root_to_class[static_cast<std::size_t>(r)])].push_back(
        ids[i]);
  }
  out.reserve(classes.size());
  for (auto& c : classes) out.push_back(VertexSubset(std::move(c)));
  return out;
}

ScalarField local_slope(const DiscreteSpace& space, const ScalarField& u) {
  if (static_cast<int>(u.size()) != space.vertex_count())
    throw Error(ErrorCode::Precondition, "field length mismatch");
  if (!all_finite(u)) throw Error(ErrorCode::Precondition, "field has non-finite values");
  ScalarField g(u.size(), 0.0);
  for (int v = 0; v < space.vertex_count(); ++v) {
    double best = 0.0;
    for (const auto& nb : space.neighbors(v)) {
      double s = std::abs(u[static_cast<std::size_t>(v)] - u[static_cast<std::size_t>(nb.to)]) /
                 nb.length;
      best = std::max(best, s);
    }
    g[static_cast<std::size_t>(v)] = best;
  }
  return g;
}

VertexSubset s_lattice(const DiscreteSpace& space, const VertexSubset& subset, double s) {
  if (!(s > 0.0)) throw Error(ErrorCode::Precondition, "lattice spacing must be positive");
  if (subset.empty()) return {};

  // Greedy in index order: accept a vertex unless it is within s of an
  // already accepted one. Truncated Dijkstra from each accepted point
  // marks its exclusion zone. Greedy acceptance makes the result maximal.
  std::vector<char> blocked(static_cast<std::size_t>(space.vertex_count()), 0);
  std::vector<int> chosen;
  for (int v : subset) {
    if (blocked[static_cast<std::size_t>(v)]) continue;
    chosen.push_back(v);
    auto dist = space.distances_from(v, s);
    for (int w = 0; w < space.vertex_count(); ++w)
      if (dist[static_cast<std::size_t>(w)] < s) blocked[static_cast<std::size_t>(w)] = 1;
  }
  return VertexSubset(std::move(chosen));
}

}  // namespace mmlab
