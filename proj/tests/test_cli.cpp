#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qmeas");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = qmeas::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "qmeas_cli_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

std::map<std::string, double> read_results(const fs::path& dir) {
  std::ifstream f(dir / "results.csv");
  std::string line;
  std::getline(f, line);
  REQUIRE(line == "quantity,value");
  std::map<std::string, double> rows;
  while (std::getline(f, line)) {
    const auto comma = line.find(',');
    rows[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
  }
  return rows;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream f(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(f, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("run three-box with defaults") {
  const fs::path dir = scratch("three_box");
  const Outcome o = run_cli({"run", "three-box", "--out", dir.string()});
  REQUIRE(o.code == 0);
  const auto rows = read_results(dir);
  CHECK(std::abs(rows.at("ABL_A") - 1.0) < 1e-12);
  CHECK(std::abs(rows.at("ABL_C") - 0.2) < 1e-12);
  CHECK(std::abs(rows.at("weak_C") + 1.0) < 1e-12);
  CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("run lgi --search") {
  const fs::path dir = scratch("lgi");
  REQUIRE(run_cli({"run", "lgi", "--search", "--out", dir.string()}).code == 0);
  CHECK(std::abs(read_results(dir).at("max_B") - 13.0 / 12.0) < 1e-6);
}

TEST_CASE("run lindblad without dephasing is unitary") {
  const fs::path dir = scratch("lindblad");
  const fs::path cfg = write_config(dir, R"({"parameters": {"eta": 0.0, "omega": 1.3, "theta": 0.7}})");
  REQUIRE(run_cli({"run", "lindblad", "--config", cfg.string(), "--out", dir.string()}).code == 0);
  CHECK(read_results(dir).at("unitary_max_diff") < 1e-8);
}

TEST_CASE("identical config and seed give byte-identical output") {
  const fs::path a = scratch("det_a"), b = scratch("det_b"), c = scratch("det_c");
  const std::vector<std::string> common{"run", "amplify", "--set", "samples=300", "--set", "grid=40", "--seed", "99"};
  auto with_out = [&](const fs::path& d) {
    auto args = common;
    args.push_back("--out");
    args.push_back(d.string());
    return args;
  };
  REQUIRE(run_cli(with_out(a)).code == 0);
  REQUIRE(run_cli(with_out(b)).code == 0);
  CHECK(slurp(a / "results.csv") == slurp(b / "results.csv"));
  CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));
  REQUIRE(run_cli({"run", "amplify", "--set", "samples=300", "--set", "grid=40", "--seed", "100", "--out", c.string()}).code == 0);
  CHECK(read_results(a).at("random_max_fq") != read_results(c).at("random_max_fq"));
}

TEST_CASE("wavefn detail table is reproducible from the seed") {
  const fs::path a = scratch("wf_a"), b = scratch("wf_b");
  const fs::path cfg = write_config(a, R"({"parameters": {"dim": 6}, "seed": 5})");
  REQUIRE(run_cli({"run", "wavefn", "--config", cfg.string(), "--out", a.string()}).code == 0);
  REQUIRE(run_cli({"run", "wavefn", "--config", cfg.string(), "--out", b.string()}).code == 0);
  CHECK(slurp(a / "detail.csv") == slurp(b / "detail.csv"));
  CHECK(read_csv(a / "detail.csv").size() == 7);
}

TEST_CASE("manifest echoes the inputs") {
  const fs::path dir = scratch("manifest");
  REQUIRE(run_cli({"run", "zeno", "--set", "n=64", "--seed", "12", "--out", dir.string()}).code == 0);
  const std::string m = slurp(dir / "manifest.json");
  CHECK(m.find("\"scenario\": \"zeno\"") != std::string::npos);
  CHECK(m.find("\"n\": 64") != std::string::npos);
  CHECK(m.find("\"seed\": 12") != std::string::npos);
  CHECK(m.find("\"version\"") != std::string::npos);
  CHECK(m.find("\"min_probability\"") != std::string::npos);
}

TEST_CASE("strict configuration") {
  const fs::path dir = scratch("strict");
  const std::vector<std::string> bad{
      R"({"parameters": {"thetta": 1.0}})",
      R"({"paramters": {}})",
      R"({"parameters": {"g": "0.1"}})",
      R"({"numerics": {"trace_tol": 1e-9}})",
      R"({"seed": -1})",
      R"({"parameters": {"g": 0.1,}})",
      R"([1, 2])",
  };
  for (const auto& text : bad) {
    const fs::path cfg = write_config(dir, text);
    const Outcome o = run_cli({"run", "three-box", "--config", cfg.string(), "--out", dir.string()});
    INFO(text);
    CHECK(o.code == 2);
  }
  const fs::path cfg = write_config(dir, R"({"parameters": {"points": 64.5}})");
  CHECK(run_cli({"run", "von-neumann", "--config", cfg.string(), "--out", dir.string()}).code == 2);
  CHECK(run_cli({"run", "three-box", "--config", (dir / "missing.json").string(), "--out", dir.string()}).code == 2);
  CHECK(run_cli({"run", "three-box", "--set", "gg=1", "--out", dir.string()}).code == 2);
  CHECK(run_cli({"run", "three-box", "--set", "g", "--out", dir.string()}).code == 2);
  CHECK(run_cli({"run", "three-box", "--search", "--out", dir.string()}).code == 2);
  CHECK(run_cli({"run", "no-such-scenario", "--out", dir.string()}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
}

TEST_CASE("validation and contract exit codes") {
  const fs::path dir = scratch("codes");
  CHECK(run_cli({"run", "amplify", "--set", "alpha2=1", "--out", dir.string()}).code == 2);
  CHECK(run_cli({"run", "luders", "--set", "theta=0", "--set", "outcome=-1", "--out", dir.string()}).code == 2);
  CHECK(run_cli({"run", "lindblad", "--set", "dt=0.5", "--set", "eta=1", "--out", dir.string()}).code == 2);
  const fs::path cfg = write_config(dir, R"({"numerics": {"completeness": 0.0}})");
  const Outcome o = run_cli({"run", "ancilla", "--config", cfg.string(), "--out", dir.string()});
  CHECK(o.code == 3);
  CHECK(o.err.find("contract") != std::string::npos);
}

TEST_CASE("sweep weak-sweep over g") {
  const fs::path dir = scratch("sweep_weak");
  const Outcome o = run_cli({"sweep", "weak-sweep", "--vary", "g", "--values", "1e-1,1e-2,1e-3", "--out", dir.string()});
  REQUIRE(o.code == 0);
  const auto rows = read_csv(dir / "results.csv");
  REQUIRE(rows.size() == 4);
  CHECK(rows[0][0] == "g");
  CHECK(rows[0][1] == "exact");
  CHECK(rows[0][2] == "formula");
  CHECK(rows[0][3] == "abs_delta");
  CHECK(std::stod(rows[1][0]) == 1e-1);
  CHECK(std::stod(rows[3][0]) == 1e-3);
  CHECK(std::stod(rows[3][3]) < std::stod(rows[1][3]));
}

TEST_CASE("sweep zeno over n") {
  const fs::path dir = scratch("sweep_zeno");
  REQUIRE(run_cli({"sweep", "zeno", "--vary", "n", "--values", "1,2,4,8,16,32,64,128,256,512,1024", "--out", dir.string()}).code == 0);
  const auto rows = read_csv(dir / "results.csv");
  REQUIRE(rows.size() == 12);
  REQUIRE(rows[0][1] == "disturbance");
  for (std::size_t k = 2; k < rows.size(); ++k) CHECK(std::stod(rows[k][1]) < std::stod(rows[k - 1][1]));
  CHECK(std::stod(rows.back()[1]) < 1e-3);
}

TEST_CASE("sweep three-box over theta") {
  const fs::path dir = scratch("sweep_box");
  REQUIRE(run_cli({"sweep", "three-box", "--vary", "theta", "--values", "0.2,0.5,0.785398163397448,1.2,2.0", "--out", dir.string()}).code == 0);
  const auto rows = read_csv(dir / "results.csv");
  REQUIRE(rows.size() == 6);
  std::size_t col = 0;
  for (std::size_t j = 0; j < rows[0].size(); ++j) {
    if (rows[0][j] == "weak_C") col = j;
  }
  REQUIRE(col > 0);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double theta = std::stod(rows[k][0]);
    CHECK(std::abs(std::stod(rows[k][col]) - 1.0 / (std::sqrt(2.0) * std::tan(theta) + 1.0)) < 1e-10);
  }
}

TEST_CASE("sweep rejects unknown keys and bad values") {
  const fs::path dir = scratch("sweep_bad");
  CHECK(run_cli({"sweep", "zeno", "--vary", "m", "--values", "1,2", "--out", dir.string()}).code == 2);
  CHECK(run_cli({"sweep", "zeno", "--vary", "n", "--values", "1,2.5", "--out", dir.string()}).code == 2);
  CHECK(run_cli({"sweep", "zeno", "--vary", "n", "--values", "1,,2", "--out", dir.string()}).code == 2);
}

TEST_CASE("every scenario runs with its defaults") {
  for (const auto& s : qmeas::cli::scenarios()) {
    const fs::path dir = scratch("all_" + s.name);
    std::vector<std::string> args{"run", s.name, "--out", dir.string()};
    if (s.name == "amplify") {
      args.insert(args.end(), {"--set", "samples=200", "--set", "grid=40"});
    }
    INFO(s.name);
    CHECK(run_cli(args).code == 0);
    CHECK(fs::exists(dir / "results.csv"));
  }
}

TEST_CASE("numbers are written with full precision") {
  CHECK(qmeas::cli::format_number(0.1) == "0.10000000000000001");
  CHECK(qmeas::cli::format_number(0.0) == "0");
  CHECK(std::stod(qmeas::cli::format_number(1.0 / 3.0)) == 1.0 / 3.0);
}
