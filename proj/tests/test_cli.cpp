#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "wkg/io.hpp"

namespace fs = std::filesystem;
using namespace wkg;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result cli(const std::string& args) {
  const std::string cmd = std::string(WKG_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("wkg_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& extra, const std::string& amplitude = "0.05") {
  const fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "grid.n = 48\ngrid.half_width = 12\ngrid.cfl = 0.25\n"
                        "evolution.horizon = 3\nevolution.snapshot_stride = 4\n"
                        "evolution.n1 = 1, 0.5, 0, 0\nevolution.n2 = 0, 0, 0.5, 0\n"
                        "diagnostics.evf_cap = 2\n"
                     << "data.amplitude = " << amplitude << "\noutput.dir = " << (dir / "out").string() << "\n"
                     << extra;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("run with zero amplitude") {
  const fs::path dir = temp_dir("zero");
  const fs::path cfg = write_config(dir, "data.weights = 1, 0, 1, 0\ndiagnostics.bootstrap = true\n", "0");
  const Result r = cli("run " + cfg.string());
  CHECK(r.code == 0);
  const CsvTable e = read_csv(dir / "out" / "energy.csv");
  REQUIRE(e.rows.size() > 1);
  for (std::size_t k = 0; k < e.rows.size(); ++k)
    for (const auto& col : e.header)
      if (col != "time") CHECK(e.number(k, col) == 0.0);
  const auto meta = read_json(dir / "out" / "metadata.json");
  CHECK(meta["schema_version"] == kSchemaVersion);
  CHECK(meta["status"] == "horizon");
  const CsvTable reg = read_csv(dir / "out" / "regions.csv");
  CHECK(reg.header == region_columns());
  for (const char* f : {"regions.csv", "bootstrap.csv", "fit.json", "hyperboloids.csv"})
    CHECK(fs::exists(dir / "out" / f));
}

TEST_CASE("configuration errors exit with status 1") {
  const fs::path dir = temp_dir("bad");
  const fs::path cfg = write_config(dir, "");
  std::string text = slurp(cfg);
  text.replace(text.find("grid.cfl = 0.25"), 15, "grid.cfl = 0.95");
  std::ofstream(cfg) << text;
  CHECK(cli("run " + cfg.string()).code == 1);
  CHECK(cli("run " + (dir / "missing.cfg").string()).code == 1);
  CHECK(cli("").code == 1);
  CHECK(cli("frobnicate").code == 1);
  CHECK(cli("sweep " + write_config(temp_dir("noeps"), "").string()).code == 1);
}

TEST_CASE("verify") {
  const Result r = cli("verify");
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "identity,samples,zero_residual");
  int rows = 0;
  while (std::getline(in, line) && line.rfind('#', 0) != 0) {
    ++rows;
    CHECK(line.substr(line.rfind(',') + 1) == "yes");
  }
  CHECK(rows == 21);
}

TEST_CASE("verify with the corrupted catalog") {
  const Result r = cli("verify --corrupted-catalog");
  CHECK(r.code == 2);
  for (const char* id : {"Omega01 Q12", "Omega02 Q12", "Omega01 Q02", "Omega02 Q01", "Omega12 Q01", "Omega12 Q02"})
    CHECK(r.out.find(std::string("FAILED ") + id) != std::string::npos);
  CHECK(r.out.find("FAILED Omega12 Q0\n") == std::string::npos);
}

TEST_CASE("runs are deterministic") {
  const fs::path a = temp_dir("det_a"), b = temp_dir("det_b");
  REQUIRE(cli("run " + write_config(a, "diagnostics.bootstrap = true\n").string()).code == 0);
  REQUIRE(cli("run " + write_config(b, "diagnostics.bootstrap = true\n").string()).code == 0);
  for (const char* f : {"energy.csv", "regions.csv", "bootstrap.csv"})
    CHECK(slurp(a / "out" / f) == slurp(b / "out" / f));
}

TEST_CASE("sweeps are independent of order") {
  const fs::path one = temp_dir("sweep_one"), two = temp_dir("sweep_two");
  REQUIRE(cli("sweep " + write_config(one, "sweep.eps = 0.1\n").string()).code == 0);
  REQUIRE(cli("sweep " + write_config(two, "sweep.eps = 0.2, 0.1\n").string()).code == 0);
  const CsvTable s1 = read_csv(one / "out" / "summary.csv");
  const CsvTable s2 = read_csv(two / "out" / "summary.csv");
  CHECK(s1.header == summary_columns());
  REQUIRE(s1.rows.size() == 1);
  REQUIRE(s2.rows.size() == 2);
  CHECK(s2.number(0, "eps") == 0.2);
  CHECK(s2.rows[1] == s1.rows[0]);
  CHECK(slurp(one / "out" / "run_0" / "energy.csv") == slurp(two / "out" / "run_1" / "energy.csv"));
}

TEST_CASE("fit recomputes from a run directory") {
  const fs::path dir = temp_dir("fit");
  REQUIRE(cli("run " + write_config(dir, "").string()).code == 0);
  const Result r = cli("fit " + (dir / "out").string());
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto stored = read_json(dir / "out" / "fit.json");
  CHECK(j == stored);
  CHECK(j.contains("decay"));
  CHECK(cli("fit " + (dir / "nowhere").string()).code == 1);
}
