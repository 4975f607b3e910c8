#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code;
  std::string output;
};

CliResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd =
      env + (env.empty() ? "" : " ") + SPINENT_CLI_PATH + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe)) {
    output.append(buf, got);
  }
  const int status = pclose(pipe);
  return CliResult{WEXITSTATUS(status), output};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("sweep emits the documented CSV schema") {
  const auto res = run_cli("sweep --model heisenberg -n 8 --t 0.1:4:40 --format csv");
  CHECK(res.exit_code == 0);
  const auto lines = lines_of(res.output);
  REQUIRE(lines.size() == 41);  // header + one row per grid point
  CHECK(lines[0] ==
        "T,U,U_per_site,fired_R2,fired_C2,fired_C3,fired_R3,"
        "margin_R2,margin_C2,margin_C3,margin_R3");
  const auto first = fields_of(lines[1]);
  REQUIRE(first.size() == 11);
  CHECK(first[0] == "0.1");
  CHECK(first[6] == "1");  // fired_R3 at T = 0.1 for the 8-ring
}

TEST_CASE("identical invocations produce byte-identical files") {
  TempDir dir("spinent_cli_det");
  const std::string base = "sweep --model xy -n 6 --t 0:2:21 --format csv --output ";
  const auto a = run_cli(base + (dir.path / "a.csv").string());
  const auto b = run_cli(base + (dir.path / "b.csv").string());
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  CHECK(slurp(dir.path / "a.csv") == slurp(dir.path / "b.csv"));
}

TEST_CASE("sweep JSON carries config, rows and provenance") {
  const auto res = run_cli("sweep --model heisenberg -n 6 --t 0:1:3 --format json");
  CHECK(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.output);
  CHECK(j.contains("config"));
  CHECK(j.contains("provenance"));
  CHECK(j["rows"].size() == 3);
  CHECK(j["provenance"].contains("version"));
  CHECK(j["provenance"].contains("seed"));
  CHECK(j["rows"][0].contains("fired_R3"));
}

TEST_CASE("log-spaced grids are supported") {
  const auto res = run_cli("sweep --model heisenberg -n 4 --t 0.01:10:4:log");
  CHECK(res.exit_code == 0);
  const auto lines = lines_of(res.output);
  REQUIRE(lines.size() == 5);
  CHECK(fields_of(lines[1])[0] == "0.01");
  CHECK(fields_of(lines[4])[0] == "10");
}

TEST_CASE("thresholds table") {
  SUBCASE("finite ring ordering and anchors at N = 10") {
    const auto res = run_cli("thresholds --model heisenberg -n 10");
    CHECK(res.exit_code == 0);
    const auto lines = lines_of(res.output);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "class,temperature,bracket_lo,bracket_hi,residual");
    const double t_r2 = std::stod(fields_of(lines[1])[1]);
    const double t_c2 = std::stod(fields_of(lines[2])[1]);
    const double t_c3 = std::stod(fields_of(lines[3])[1]);
    const double t_r3 = std::stod(fields_of(lines[4])[1]);
    CHECK(t_r2 == t_c2);
    CHECK(t_c2 > t_c3);
    CHECK(t_c3 > t_r3);
    CHECK(std::abs(t_c3 - 1.61) <= 0.25);
    CHECK(std::abs(t_r3 - 1.23) <= 0.25);
  }
  SUBCASE("XY thermodynamic limit") {
    const auto res = run_cli("thresholds --model xy --limit");
    CHECK(res.exit_code == 0);
    const auto lines = lines_of(res.output);
    REQUIRE(lines.size() == 3);
    CHECK(std::abs(std::stod(fields_of(lines[1])[1]) - 0.977) <= 0.005);
    CHECK(std::abs(std::stod(fields_of(lines[2])[1]) - 0.668) <= 0.005);
  }
  SUBCASE("--limit requires the XY model") {
    CHECK(run_cli("thresholds --model heisenberg --limit").exit_code == 2);
  }
}

TEST_CASE("classify verdicts") {
  SUBCASE("the thermodynamic ground energy fires everything") {
    const auto res = run_cli("classify --model heisenberg -n 10 --energy -17.73");
    CHECK(res.exit_code == 0);
    for (const auto& line : lines_of(res.output)) {
      if (line.rfind("R", 0) == 0 || line.rfind("C", 0) == 0) {
        CHECK(fields_of(line)[2] == "1");
      }
    }
  }
  SUBCASE("saturating energies sit exactly on the strict boundary") {
    const auto res = run_cli("classify --model heisenberg -n 4 --energy -6");
    CHECK(res.exit_code == 0);
    for (const auto& line : lines_of(res.output)) {
      const auto fields = fields_of(line);
      if (fields[0] == "C3") CHECK(fields[2] == "0");
      if (fields[0] == "C2") CHECK(fields[2] == "1");
    }
  }
  SUBCASE("XY boundary case at N = 8") {
    const auto res = run_cli("classify --model xy -n 8 --energy -9");
    CHECK(res.exit_code == 0);
    for (const auto& line : lines_of(res.output)) {
      const auto fields = fields_of(line);
      if (fields[0] == "C3") CHECK(fields[2] == "0");
      if (fields[0] == "C2") CHECK(fields[2] == "1");
    }
  }
}

TEST_CASE("exit code contract") {
  CHECK(run_cli("classify --model heisenberg -n 4").exit_code == 2);  // no energy
  CHECK(run_cli("sweep --model bogus -n 4").exit_code == 2);
  CHECK(run_cli("sweep --model heisenberg -n 16").exit_code == 3);
  CHECK(run_cli("thresholds --model heisenberg -n 16").exit_code == 3);
  CHECK(run_cli("sweep --model heisenberg -n 5").exit_code == 2);  // odd ring
  CHECK(run_cli("sweep --model heisenberg -n 8 --t 2:1:5").exit_code == 2);
  CHECK(run_cli("nonsense").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("output directory override") {
  TempDir dir("spinent_cli_envdir");
  SUBCASE("via $SPINENT_OUTPUT_DIR") {
    const auto res = run_cli("sweep --model heisenberg -n 4 --t 0:1:2 --output rel.csv",
                             "SPINENT_OUTPUT_DIR=" + dir.path.string());
    CHECK(res.exit_code == 0);
    CHECK(fs::exists(dir.path / "rel.csv"));
  }
  SUBCASE("--output-dir wins over the environment") {
    const auto res = run_cli("sweep --model heisenberg -n 4 --t 0:1:2 "
                             "--output rel.csv --output-dir " + dir.path.string(),
                             "SPINENT_OUTPUT_DIR=/nonexistent_spinent");
    CHECK(res.exit_code == 0);
    CHECK(fs::exists(dir.path / "rel.csv"));
  }
}

TEST_CASE("plot script emission") {
  TempDir dir("spinent_cli_plot");
  const auto res = run_cli("sweep --model heisenberg -n 4 --t 0:1:2 --output " +
                           (dir.path / "data.csv").string() + " --plot-script " +
                           (dir.path / "plot.gp").string());
  CHECK(res.exit_code == 0);
  CHECK(fs::exists(dir.path / "plot.gp"));
  CHECK(slurp(dir.path / "plot.gp").find("plot '") != std::string::npos);
}

TEST_CASE("verify runs the certification") {
  SUBCASE("small clean run exits zero") {
    const auto res = run_cli("verify --samples 150 --restarts 40 --seed 4");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("0 failed") != std::string::npos);
    CHECK(res.output.find("[FAIL]") == std::string::npos);
  }
  SUBCASE("seed independence of the verdicts") {
    const auto a = run_cli("verify --samples 120 --restarts 36 --seed 42");
    const auto b = run_cli("verify --samples 120 --restarts 36 --seed 7");
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
  }
  SUBCASE("fault injection exits one and serializes a counterexample") {
    TempDir dir("spinent_cli_fault");
    const auto res = run_cli("verify --samples 100 --restarts 24 --inject-fault "
                             "--output-dir " + dir.path.string());
    CHECK(res.exit_code == 1);
    CHECK(res.output.find("[FAIL]") != std::string::npos);
    bool found = false;
    for (const auto& entry : fs::directory_iterator(dir.path)) {
      if (entry.path().filename().string().rfind("counterexample_", 0) == 0) {
        found = true;
      }
    }
    CHECK(found);
  }
}
