#include "mmlab/space_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mmlab {

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Precondition, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Precondition, "cannot write " + path);
  out << content;
}

}  // namespace

std::string space_to_text(const DiscreteSpace& space) {
  std::ostringstream out;
  out << "[vertices]\n";
  for (int v = 0; v < space.vertex_count(); ++v) {
    out << v;
    for (double c : space.coords(v)) out << ' ' << fmt_double(c);
    out << ' ' << fmt_double(space.measure(v)) << '\n';
  }
  out << "[edges]\n";
  for (const auto& e : space.edges())
    out << e.u << ' ' << e.v << ' ' << fmt_double(e.length) << '\n';
  out << "[metadata]\n";
  out << "base_point " << space.base_point() << '\n';
  out << "dimension_bound " << fmt_double(space.dimension_bound()) << '\n';
  out << "coord_dim " << space.coord_dim() << '\n';
  return out.str();
}

DiscreteSpace space_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  enum class Section { none, vertices, edges, metadata } section = Section::none;

  struct RawVertex {
    int id;
    std::vector<double> coords;
    double measure;
  };
  std::vector<RawVertex> raw_vertices;
  std::vector<SpaceEdge> raw_edges;
  int base_point = 0;
  double dimension_bound = 2.0;
  int coord_dim = -1;
  int line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    std::string body = line.substr(first);
    while (!body.empty() && (body.back() == '\r' || body.back() == ' ')) body.pop_back();

    if (body == "[vertices]") {
      section = Section::vertices;
      continue;
    }
    if (body == "[edges]") {
      section = Section::edges;
      continue;
    }
    if (body == "[metadata]") {
      section = Section::metadata;
      continue;
    }

    std::istringstream ls(body);
    switch (section) {
      case Section::vertices: {
        RawVertex v;
        std::vector<double> nums;
        if (!(ls >> v.id))
          throw Error(ErrorCode::ConfigError, "bad vertex line", line_no);
        double x;
        while (ls >> x) nums.push_back(x);
        if (nums.empty()) throw Error(ErrorCode::ConfigError, "vertex missing measure", line_no);
        v.measure = nums.back();
        nums.pop_back();
        v.coords = std::move(nums);
        raw_vertices.push_back(std::move(v));
        break;
      }
      case Section::edges: {
        SpaceEdge e;
        if (!(ls >> e.u >> e.v >> e.length))
          throw Error(ErrorCode::ConfigError, "bad edge line", line_no);
        raw_edges.push_back(e);
        break;
      }
      case Section::metadata: {
        std::string key;
        ls >> key;
        if (key == "base_point")
          ls >> base_point;
        else if (key == "dimension_bound")
          ls >> dimension_bound;
        else if (key == "coord_dim")
          ls >> coord_dim;
        else
          throw Error(ErrorCode::ConfigError, "unknown metadata key '" + key + "'", line_no);
        break;
      }
      case Section::none:
        throw Error(ErrorCode::ConfigError, "content before any section header", line_no);
    }
  }

  DiscreteSpace::Builder b;
  for (std::size_t i = 0; i < raw_vertices.size(); ++i) {
    auto& v = raw_vertices[i];
    if (v.id != static_cast<int>(i))
      throw Error(ErrorCode::ConfigError, "vertex ids must be 0..n-1 in order", v.id);
    if (coord_dim >= 0 && static_cast<int>(v.coords.size()) != coord_dim)
      throw Error(ErrorCode::ConfigError, "coordinate count disagrees with coord_dim", v.id);
    b.add_vertex(std::move(v.coords), v.measure);
  }
  for (const auto& e : raw_edges) b.add_edge(e.u, e.v, e.length);
  b.set_base_point(base_point);
  b.set_dimension_bound(dimension_bound);
  return std::move(b).build();
}

std::string space_to_json_string(const DiscreteSpace& space) {
  nlohmann::json j;
  auto& vs = j["vertices"] = nlohmann::json::array();
  for (int v = 0; v < space.vertex_count(); ++v) {
    nlohmann::json jv;
    jv["id"] = v;
    jv["coords"] = std::vector<double>(space.coords(v).begin(), space.coords(v).end());
    jv["measure"] = space.measure(v);
    vs.push_back(std::move(jv));
  }
  auto& es = j["edges"] = nlohmann::json::array();
  for (const auto& e : space.edges()) es.push_back({e.u, e.v, e.length});
  j["metadata"] = {{"base_point", space.base_point()},
                   {"dimension_bound", space.dimension_bound()},
                   {"coord_dim", space.coord_dim()}};
  return j.dump(2) + "\n";
}

DiscreteSpace space_from_json_string(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  DiscreteSpace::Builder b;
  int expect = 0;
  for (const auto& jv : j.at("vertices")) {
    if (jv.at("id").get<int>() != expect++)
      throw Error(ErrorCode::ConfigError, "vertex ids must be 0..n-1 in order");
    b.add_vertex(jv.at("coords").get<std::vector<double>>(), jv.at("measure").get<double>());
  }
  for (const auto& je : j.at("edges"))
    b.add_edge(je.at(0).get<int>(), je.at(1).get<int>(), je.at(2).get<double>());
  const auto& meta = j.at("metadata");
  b.set_base_point(meta.at("base_point").get<int>());
  b.set_dimension_bound(meta.at("dimension_bound").get<double>());
  return std::move(b).build();
}

void save_space_text(const DiscreteSpace& space, const std::string& path) {
  write_file(path, space_to_text(space));
}

DiscreteSpace load_space_text(const std::string& path) { return space_from_text(read_file(path)); }

void save_space_json(const DiscreteSpace& space, const std::string& path) {
  write_file(path, space_to_json_string(space));
}

DiscreteSpace load_space_json(const std::string& path) {
  return space_from_json_string(read_file(path));
}

DiscreteSpace load_space(const std::string& path) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return load_space_json(path);
  return load_space_text(path);
}

}  // namespace mmlab
