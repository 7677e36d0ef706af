#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "ocs_cli_test";

int run(const std::string& args) {
  const std::string cmd = std::string(OCS_CLI_PATH) + " " + args + " > " +
                          (kWork / "stdout.txt").string() + " 2> " +
                          (kWork / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Workdir {
  Workdir() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
  ~Workdir() { fs::remove_all(kWork); }
};

}  // namespace

TEST_CASE("usage errors exit with 2") {
  Workdir w;
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("solve --method m3") == 2);
  CHECK(run("solve --seed notanumber") == 2);
  CHECK(run("restarts --method proportional --n 2") == 2);
  CHECK(run("compare --seeds 0") == 2);
  CHECK(run("--help") == 0);
  CHECK(slurp(kWork / "stdout.txt").find("solve") != std::string::npos);
}

TEST_CASE("validate checks inputs without solving") {
  Workdir w;
  CHECK(run("validate --scenario tl2") == 0);
  CHECK(slurp(kWork / "stdout.txt").find("12 steps") != std::string::npos);
  CHECK(run("validate --scenario " + test::data_path("scenarios/tl3.json").string() +
            " --catalog " + test::data_path("catalog/rtac_fixture.json").string()) == 0);

  auto doc = nlohmann::json::parse(slurp(test::data_path("scenarios/tl1.json")));
  doc["q_occ_w"].erase(0);
  std::ofstream(kWork / "bad.json") << doc.dump();
  CHECK(run("validate --scenario " + (kWork / "bad.json").string()) == 2);
  CHECK(slurp(kWork / "stderr.txt").find("q_occ_w") != std::string::npos);

  std::ofstream(kWork / "broken.json") << "{";
  CHECK(run("validate --catalog " + (kWork / "broken.json").string()) == 2);
  CHECK(run("validate --scenario missing_file.json") == 2);
}

TEST_CASE("solve writes trajectory, summary and history") {
  Workdir w;
  const auto out = kWork / "out";
  CHECK(run("solve --method proportional --scenario tl1 --out " + out.string()) == 0);
  CHECK(fs::exists(out / "proportional_trajectory.csv"));
  CHECK(fs::exists(out / "proportional_history.csv"));
  const auto summary = nlohmann::json::parse(slurp(out / "proportional_summary.json"));
  CHECK(summary["nc"] == 3);

  std::ofstream(kWork / "quick.json") << R"({"spsa": {"j_max": 30}})";
  CHECK(run("solve --method m2 --scenario tl3 --seed 4 --config " +
            (kWork / "quick.json").string() + " --out " + out.string()) == 0);
  const auto m2 = nlohmann::json::parse(slurp(out / "m2_summary.json"));
  CHECK(m2["seed"] == 4);
  CHECK(m2["config"]["spsa"]["j_max"] == 30);
  CHECK(m2["iterations"].get<int>() <= 30);

  std::ofstream(kWork / "bad_cfg.json") << R"({"spsa": {"alpha": 3}})";
  CHECK(run("solve --config " + (kWork / "bad_cfg.json").string()) == 2);
}

TEST_CASE("compare and restarts") {
  Workdir w;
  std::ofstream(kWork / "quick.json") << R"({"spsa": {"j_max": 25}})";
  const std::string cfg = " --config " + (kWork / "quick.json").string();
  const auto out = kWork / "out";
  CHECK(run("compare --scenario tl1 --seeds 2" + cfg + " --out " + out.string()) == 0);
  const auto table = nlohmann::json::parse(slurp(out / "comparison.json"));
  CHECK(table["rows"].size() == 3);
  CHECK(table["reference"] == "m1");
  CHECK(fs::exists(out / "comparison.txt"));

  CHECK(run("restarts --method m1 --n 3" + cfg + " --out " + out.string()) == 0);
  const auto r = nlohmann::json::parse(slurp(out / "restarts.json"));
  CHECK(r["runs"].size() == 3);
  CHECK(slurp(kWork / "stdout.txt").find("median=") != std::string::npos);
}

TEST_CASE("export-fixtures reproduces the shipped data") {
  Workdir w;
  const auto out = kWork / "data";
  CHECK(run("export-fixtures --out " + out.string()) == 0);
  for (const auto* rel : {"catalog/rtac_fixture.json", "scenarios/tl1.json", "scenarios/tl2.json",
                          "scenarios/tl3.json", "config/default.json"}) {
    CAPTURE(rel);
    CHECK(slurp(out / rel) == slurp(test::data_path(rel)));
  }
}

TEST_CASE("OCS_CATALOG selects the catalog file") {
  Workdir w;
  std::ofstream(kWork / "broken.json") << "[";
  ::setenv("OCS_CATALOG", (kWork / "broken.json").c_str(), 1);
  CHECK(run("validate") == 2);
  ::setenv("OCS_CATALOG", test::data_path("catalog/rtac_fixture.json").c_str(), 1);
  CHECK(run("validate") == 0);
  ::unsetenv("OCS_CATALOG");
}
