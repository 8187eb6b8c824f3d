#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* env = std::getenv("MMLAB_CLI");
  REQUIRE(env != nullptr);
  return env;
}

int run(const std::string& args) {
  std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_config(const fs::path& p, const std::string& body) {
  std::ofstream out(p);
  out << body;
}

const std::string kSmallPlane =
    "space.generator = euclidean_grid\n"
    "space.dim = 2\n"
    "space.extent = 12\n"
    "space.spacing = 0.25\n"
    "growth.window_lo = 3\n"
    "growth.window_hi = 8\n"
    "family.count = 8\n"
    "seed = 5\n";

}  // namespace

TEST_CASE("growth subcommand produces a report with the fitted exponent") {
  fs::path dir = fs::temp_directory_path() / "mmlab_cli_growth";
  fs::remove_all(dir);
  write_config(dir.string() + ".cfg", kSmallPlane);
  REQUIRE(run("growth --config " + dir.string() + ".cfg --out " + dir.string()) == 0);
  auto report = nlohmann::json::parse(slurp(dir / "growth_report.json"));
  CHECK(report.at("eta").get<double>() == doctest::Approx(2.0).epsilon(0.05));
  CHECK(report.at("C_RD").get<double>() > 0.0);
  CHECK(report.at("config_hash").is_string());
  CHECK(fs::exists(dir / "volume_curve.csv"));
  CHECK(fs::exists(dir / "summary.json"));
}

TEST_CASE("malformed config key names the line and exits with config status") {
  fs::path cfg = fs::temp_directory_path() / "mmlab_bad.cfg";
  write_config(cfg, "space.generator = euclidean_grid\nspace.extnt = 3\n");
  CHECK(run("growth --config " + cfg.string()) == 2);
}

TEST_CASE("bad inline override is rejected") {
  CHECK(run("growth --set nonsense.key=1") == 2);
}

TEST_CASE("full pipeline exits zero and reports every stage") {
  fs::path dir = fs::temp_directory_path() / "mmlab_cli_pipe";
  fs::remove_all(dir);
  write_config(dir.string() + ".cfg", kSmallPlane);
  REQUIRE(run("full-pipeline --config " + dir.string() + ".cfg --out " + dir.string()) == 0);
  for (const char* name :
       {"growth_report.json", "covering.json", "poincare.json", "patching_report.json",
        "patching_neumann_report.json", "sobolev_report.json", "nash_report.json",
        "heat_report.json", "summary.json"})
    CHECK(fs::exists(dir / name));
  auto summary = slurp(dir / "summary.json");
  CHECK(summary.find("\"all_pass\": true") != std::string::npos);
}

TEST_CASE("identical config and seed give byte-identical reports") {
  fs::path cfg = fs::temp_directory_path() / "mmlab_repro.cfg";
  write_config(cfg, kSmallPlane);
  fs::path a = fs::temp_directory_path() / "mmlab_repro_a";
  fs::path b = fs::temp_directory_path() / "mmlab_repro_b";
  fs::remove_all(a);
  fs::remove_all(b);
  REQUIRE(run("full-pipeline --config " + cfg.string() + " --out " + a.string()) == 0);
  REQUIRE(run("full-pipeline --config " + cfg.string() + " --out " + b.string()) == 0);
  for (const auto& entry : fs::directory_iterator(a)) {
    auto other = b / entry.path().filename();
    REQUIRE(fs::exists(other));
    CHECK(slurp(entry.path()) == slurp(other));
  }
}

TEST_CASE("build-space round trips through both file forms") {
  fs::path dir = fs::temp_directory_path() / "mmlab_cli_space";
  fs::remove_all(dir);
  REQUIRE(run("build-space --set space.extent=2 --set space.spacing=1 --out " + dir.string()) ==
          0);
  CHECK(fs::exists(dir / "space.txt"));
  CHECK(fs::exists(dir / "space.json"));

  fs::path dir2 = fs::temp_directory_path() / "mmlab_cli_space2";
  fs::remove_all(dir2);
  REQUIRE(run("build-space --set space.generator=file --set space.file=" +
              (dir / "space.txt").string() + " --out " + dir2.string()) == 0);
  CHECK(slurp(dir / "space.txt") == slurp(dir2 / "space.txt"));
}

TEST_CASE("radial growth-exponent model runs the whole pipeline") {
  fs::path dir = fs::temp_directory_path() / "mmlab_cli_radial";
  fs::remove_all(dir);
  write_config(dir.string() + ".cfg",
               "space.generator = radial_density\n"
               "space.dim = 2\n"
               "space.extent = 48\n"
               "space.spacing = 1\n"
               "space.eta = 1.5\n"
               "family.count = 8\n"
               "seed = 3\n");
  REQUIRE(run("full-pipeline --config " + dir.string() + ".cfg --out " + dir.string()) == 0);
  auto nash = nlohmann::json::parse(slurp(dir / "nash_report.json"));
  CHECK(nash.at("applicable").get<bool>() == false);  // eta below 2 here
  CHECK(nash.at("pass").get<bool>());
  auto growth = nlohmann::json::parse(slurp(dir / "growth_report.json"));
  CHECK(growth.at("eta").get<double>() == doctest::Approx(1.5).epsilon(0.1));
  auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary.at("all_pass").get<bool>());
}
