#include "mmlab/report_json.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>

namespace mmlab {

namespace {

nlohmann::json subset_json(const VertexSubset& s) { return nlohmann::json(s.ids()); }

}  // namespace

nlohmann::json to_json(const GrowthReport& rep) {
  nlohmann::json j;
  j["eta"] = rep.eta;
  j["theta_inf"] = rep.theta_inf;
  j["theta_sup"] = rep.theta_sup;
  j["C_RD"] = rep.c_rd;
  j["threshold_A"] = rep.threshold_a;
  j["C_D_hat"] = rep.c_d_hat;
  j["window"] = {{"lo", rep.window.lo}, {"hi", rep.window.hi}};
  j["samples"] = rep.samples;
  if (rep.ahlfors) j["ahlfors"] = {{"C_o", rep.ahlfors->c_o}, {"r_o", rep.ahlfors->r_o}};
  auto& curve = j["volume_curve"] = nlohmann::json::array();
  for (const auto& [r, v] : rep.volume_curve) curve.push_back({r, v});
  return j;
}

nlohmann::json to_json(const ReverseDoublingCheck& chk) {
  nlohmann::json j;
  j["violations"] = chk.violations;
  j["invalid_inputs"] = chk.invalid_inputs;
  j["pairs"] = chk.rows.size();
  auto& rows = j["rows"] = nlohmann::json::array();
  for (const auto& r : chk.rows)
    rows.push_back({{"r", r.r},
                    {"R", r.big_r},
                    {"lhs", r.lhs},
                    {"rhs", r.rhs},
                    {"margin", r.margin},
                    {"ok", r.ok},
                    {"valid_input", r.valid_input}});
  return j;
}

nlohmann::json to_json(const GoodCovering& cov) {
  nlohmann::json j;
  j["kappa"] = cov.kappa;
  j["kappa0"] = cov.kappa0;
  j["base_radius"] = cov.base_radius;
  j["min_level"] = cov.min_level;
  j["max_level"] = cov.max_level;
  j["Q1"] = cov.q1;
  j["Q2"] = cov.q2;
  j["exceptional_measure_m1"] = cov.exceptional_measure_m1;
  j["exceptional_measure_m2"] = cov.exceptional_measure_m2;
  j["components_per_level"] = cov.components_per_level;
  auto& pieces = j["pieces"] = nlohmann::json::array();
  for (const auto& piece : cov.pieces) {
    nlohmann::json jp;
    jp["level"] = piece.level;
    jp["index"] = piece.index;
    jp["boundary_level"] = piece.boundary_level;
    jp["U"] = subset_json(piece.U);
    jp["U_star"] = subset_json(piece.U_star);
    jp["U_sharp"] = subset_json(piece.U_sharp);
    if (piece.glued_from)
      jp["glued_from"] = {{"level", piece.glued_from->first}, {"index", piece.glued_from->second}};
    pieces.push_back(std::move(jp));
  }
  auto& glue = j["gluing_log"] = nlohmann::json::array();
  for (const auto& ev : cov.gluing_log)
    glue.push_back({{"from_level", ev.from_level},
                    {"from_index", ev.from_index},
                    {"into_level", ev.into_level},
                    {"into_index", ev.into_index},
                    {"candidates", ev.candidate_count}});
  return j;
}

GoodCovering covering_from_json(const nlohmann::json& j) {
  GoodCovering cov;
  cov.kappa = j.at("kappa").get<double>();
  cov.kappa0 = j.at("kappa0").get<double>();
  cov.base_radius = j.at("base_radius").get<double>();
  cov.min_level = j.at("min_level").get<int>();
  cov.max_level = j.at("max_level").get<int>();
  cov.q1 = j.at("Q1").get<int>();
  cov.q2 = j.at("Q2").get<double>();
  cov.exceptional_measure_m1 = j.at("exceptional_measure_m1").get<double>();
  cov.exceptional_measure_m2 = j.at("exceptional_measure_m2").get<double>();
  cov.components_per_level = j.at("components_per_level").get<std::vector<int>>();
  std::vector<int> covered;
  for (const auto& jp : j.at("pieces")) {
    CoveringPiece piece;
    piece.level = jp.at("level").get<int>();
    piece.index = jp.at("index").get<int>();
    piece.boundary_level = jp.at("boundary_level").get<bool>();
    piece.U = VertexSubset(jp.at("U").get<std::vector<int>>());
    piece.U_star = VertexSubset(jp.at("U_star").get<std::vector<int>>());
    piece.U_sharp = VertexSubset(jp.at("U_sharp").get<std::vector<int>>());
    if (jp.contains("glued_from"))
      piece.glued_from = std::make_pair(jp.at("glued_from").at("level").get<int>(),
                                        jp.at("glued_from").at("index").get<int>());
    covered.insert(covered.end(), piece.U.ids().begin(), piece.U.ids().end());
    cov.pieces.push_back(std::move(piece));
  }
  cov.covered_region = VertexSubset::from_unsorted(std::move(covered));
  for (const auto& je : j.at("gluing_log")) {
    GluingEvent ev;
    ev.from_level = je.at("from_level").get<int>();
    ev.from_index = je.at("from_index").get<int>();
    ev.into_level = je.at("into_level").get<int>();
    ev.into_index = je.at("into_index").get<int>();
    ev.candidate_count = je.at("candidates").get<int>();
    cov.gluing_log.push_back(ev);
  }
  return cov;
}

nlohmann::json to_json(const CoveringValidation& val) {
  nlohmann::json j;
  j["nesting_ok"] = val.nesting_ok;
  j["coverage_ok"] = val.coverage_ok;
  j["measures_ok"] = val.measures_ok;
  j["embracing_ok"] = val.embracing_ok;
  j["Q1"] = val.q1;
  j["Q2"] = val.q2;
  j["exceptional_m1"] = val.exceptional_m1;
  j["exceptional_m2"] = val.exceptional_m2;
  j["touching_pairs"] = val.touching_pairs;
  j["all_ok"] = val.all_ok();
  auto& viols = j["embracing_violations"] = nlohmann::json::array();
  for (const auto& [a, b] : val.embracing_violations) viols.push_back({a, b});
  return j;
}

nlohmann::json to_json(const CoveringGraph& graph) {
  nlohmann::json j;
  j["vertex_weights"] = graph.nu;
  j["levels"] = graph.level;
  std::vector<int> boundary;
  for (int i = 0; i < graph.size(); ++i)
    if (graph.boundary[static_cast<std::size_t>(i)]) boundary.push_back(i);
  j["boundary"] = boundary;
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const auto& e : graph.edges) edges.push_back({e.a, e.b, e.weight});
  return j;
}

nlohmann::json to_json(const PoincareResult& res) {
  nlohmann::json j;
  j["S_d"] = res.s_d;
  j["q"] = res.q;
  j["lambda"] = res.lambda;
  j["lower_bound_only"] = res.lower_bound_only;
  switch (res.method) {
    case PoincareMethod::eigen: j["method"] = "eigen"; break;
    case PoincareMethod::ratio_maximization: j["method"] = "ratio_maximization"; break;
    case PoincareMethod::brute_force: j["method"] = "brute_force"; break;
  }
  j["witness"] = res.witness;
  return j;
}

nlohmann::json to_json(const IsoperimetricResult& res) {
  return {{"constant", res.constant}, {"witness", res.witness}, {"evaluated", res.evaluated}};
}

nlohmann::json to_json(const StructureReport& rep) {
  return {{"h_bound", rep.h_bound},     {"degree_bound", rep.degree_bound},
          {"max_degree", rep.max_degree}, {"degree_ok", rep.degree_ok},
          {"ratio_bound", rep.ratio_bound}, {"ratio_max", rep.ratio_max},
          {"ratio_ok", rep.ratio_ok}};
}

nlohmann::json to_json(const LocalNeumannConstants& rep) {
  nlohmann::json j;
  j["S_c"] = rep.s_c;
  j["p"] = rep.p;
  j["q"] = rep.q;
  j["skipped_pieces"] = rep.skipped_pieces;
  j["level_cancellation"] = rep.level_cancellation;
  auto& rows = j["rows"] = nlohmann::json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"piece", r.piece},
                    {"ratio_inner", r.ratio_inner},
                    {"ratio_outer", r.ratio_outer},
                    {"skipped", r.skipped}});
  return j;
}

nlohmann::json to_json(const VerificationReport& rep) {
  nlohmann::json j;
  j["inequality"] = rep.inequality;
  j["constant_used"] = rep.constant_used;
  j["max_ratio"] = rep.max_ratio;
  j["pass"] = rep.pass;
  j["constants"] = rep.constants;
  j["notes"] = rep.notes;
  auto& rows = j["rows"] = nlohmann::json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"lhs", r.lhs}, {"rhs", r.rhs}, {"ratio", r.ratio}, {"pass", r.pass}});
  auto& curve = j["scale_curve"] = nlohmann::json::array();
  for (const auto& [s, r] : rep.scale_curve) curve.push_back({s, r});
  return j;
}

nlohmann::json to_json(const HeatDecayCurve& curve) {
  nlohmann::json j;
  j["times"] = curve.times;
  j["sup_diag"] = curve.sup_diag;
  j["fitted_C"] = curve.fitted_c;
  j["fitted_exponent"] = curve.fitted_exponent;
  j["monotone_ok"] = curve.monotone_ok;
  j["psi_ok"] = curve.psi_ok;
  j["C_Na_used"] = curve.c_na_used;
  auto& rows = j["psi_rows"] = nlohmann::json::array();
  for (const auto& r : curve.psi_rows)
    rows.push_back(
        {{"t", r.t}, {"phi", r.phi}, {"psi", r.psi}, {"bound", r.bound}, {"ok", r.ok}});
  auto& traj = j["nash_trajectory"] = nlohmann::json::array();
  for (const auto& [s, r] : curve.nash_trajectory) traj.push_back({s, r});
  return j;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, hash);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Precondition, "cannot write " + path);
  out << content;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

void write_csv_file(const std::string& path, const std::string& header,
                    const std::vector<std::vector<double>>& rows) {
  std::string body = header + "\n";
  char buf[40];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
      body += buf;
      if (i + 1 < row.size()) body += ',';
    }
    body += '\n';
  }
  write_text_file(path, body);
}

}  // namespace mmlab
