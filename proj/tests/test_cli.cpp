// End-to-end checks of the fairdiv binary: exit codes, JSON payloads, CSV
// output, and byte-determinism. The binary path comes from the build system.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

RunResult run(const std::string& args, const std::string& env = "") {
  const std::string command = env + (env.empty() ? "" : " ") + FAIRDIV_BIN " " + args +
                              " 2>/dev/null";
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buffer;
  std::size_t got;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string stderr_of(const std::string& args) {
  const std::string command = std::string(FAIRDIV_BIN) + " " + args + " 2>&1 >/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  std::array<char, 4096> buffer;
  std::size_t got;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    output.append(buffer.data(), got);
  }
  pclose(pipe);
  return output;
}

class Fixture {
 public:
  Fixture() {
    dir_ = fs::temp_directory_path() / ("fairdiv_cli_test_" + std::to_string(getpid()));
    fs::create_directories(dir_);
    write("table1a.json", R"({"values": [[104,273,186,437],[162,250,240,348]]})");
    write("table2a.json", R"({"values": [[999,1],[998,2]]})");
    write("table3b.json", R"({"values": [[3,2,2,2],[6,1,1,1]]})");
    write("bad.json", R"({"values": [[999,1],[500,2]]})");
  }
  ~Fixture() { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name);
    out << content;
  }
  fs::path dir_;
};

}  // namespace

TEST_CASE("allocate emits bundles, utilities, and ranks") {
  Fixture fx;

  const RunResult mnw = run("allocate --algo mnw " + fx.path("table1a.json"));
  CHECK(mnw.exit_code == 0);
  const json doc = json::parse(mnw.output);
  CHECK(doc["bundles"] == json::parse("[[1,3],[0,2]]"));
  CHECK(doc["utilities"] == json::parse("[710,402]"));

  const RunResult rl = run("allocate --algo rank-leximin " + fx.path("table2a.json"));
  CHECK(rl.exit_code == 0);
  CHECK(json::parse(rl.output)["bundles"] == json::parse("[[0],[1]]"));

  const RunResult draft = run("allocate --algo draft " + fx.path("table2a.json"));
  CHECK(draft.exit_code == 0);
  CHECK(json::parse(draft.output)["bundles"] == json::parse("[[0],[1]]"));
}

TEST_CASE("allocate output is byte-deterministic") {
  Fixture fx;
  const RunResult first = run("allocate --algo leximin " + fx.path("table1a.json"));
  const RunResult second = run("allocate --algo leximin " + fx.path("table1a.json"));
  CHECK(first.output == second.output);
}

TEST_CASE("check maps verdicts to exit codes") {
  Fixture fx;

  const RunResult ok = run("check --props pmms,po " + fx.path("table2a.json") + " '[[0],[1]]'");
  CHECK(ok.exit_code == 0);

  const RunResult ef1 = run("check --props ef1 " + fx.path("table1a.json") + " '[[1,3],[0,2]]'");
  CHECK(ef1.exit_code == 0);

  const RunResult po = run("check --props beta-po --beta 3 " + fx.path("table3b.json") +
                           " '[[0,3],[1,2]]'");
  CHECK(po.exit_code == 1);
  const json doc = json::parse(po.output);
  REQUIRE(doc["verdicts"].size() == 1);
  CHECK(doc["verdicts"][0]["holds"] == false);
  CHECK(doc["verdicts"][0]["witness"]["allocation"] == json::parse("[[1,2,3],[0]]"));
  CHECK(doc["verdicts"][0]["witness"]["factor"]["num"] == 3);
  CHECK(doc["verdicts"][0]["witness"]["factor"]["den"] == 1);
}

TEST_CASE("audit reports the stability ratios") {
  Fixture fx;

  const RunResult leximin =
      run("audit --algo leximin --agent 0 --alpha 4 " + fx.path("table2a.json"));
  CHECK(leximin.exit_code == 0);
  const json doc = json::parse(leximin.output);
  CHECK(doc["epsilon"]["num"] == 999);
  CHECK(doc["epsilon"]["den"] == 1);
  CHECK(doc["worst_low_ratio"]["num"] == 1);
  CHECK(doc["worst_low_ratio"]["den"] == 999);
  CHECK(doc["neighbor_count"] == 3);

  for (const std::string algo : {"rank-leximin", "modified:leximin"}) {
    const RunResult stable =
        run("audit --algo " + algo + " --agent 0 --alpha 4 " + fx.path("table2a.json"));
    CHECK(stable.exit_code == 0);
    const json stable_doc = json::parse(stable.output);
    CHECK(stable_doc["epsilon"]["num"] == 1);
    CHECK(stable_doc["epsilon"]["den"] == 1);
    CHECK(stable_doc["exact_stable"] == true);
  }
}

TEST_CASE("audit writes per-neighbor CSV rows") {
  Fixture fx;
  const std::string csv = fx.path("ratios.csv");
  const RunResult result = run("audit --algo leximin --agent 0 --alpha 4 --csv " + csv +
                               " " + fx.path("table2a.json"));
  CHECK(result.exit_code == 0);

  std::ifstream in(csv);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "v0,v1,true_utility,ratio_num,ratio_den,ratio");
  std::string line;
  int rows = 0;
  bool saw_low = false;
  while (std::getline(in, line)) {
    ++rows;
    if (line.find("997,3,1,1,999,") == 0) saw_low = true;
  }
  CHECK(rows == 3);
  CHECK(saw_low);
}

TEST_CASE("paper tables reproduce and exit zero") {
  for (int which : {1, 2, 3}) {
    const RunResult result = run("paper-tables " + std::to_string(which));
    CHECK(result.exit_code == 0);
    const json doc = json::parse(result.output);
    CHECK(doc["all_assertions_hold"] == true);
  }
}

TEST_CASE("invalid inputs exit 2 with a named rule") {
  Fixture fx;
  const RunResult bad = run("allocate --algo mnw " + fx.path("bad.json"));
  CHECK(bad.exit_code == 2);
  CHECK(stderr_of("allocate --algo mnw " + fx.path("bad.json")).find("row-sum") !=
        std::string::npos);

  const RunResult unknown = run("allocate --algo nash " + fx.path("table2a.json"));
  CHECK(unknown.exit_code == 2);
  CHECK(stderr_of("allocate --algo nash " + fx.path("table2a.json")).find("rank-leximin") !=
        std::string::npos);

  Fixture fx2;
  const RunResult props = run("check --props shiny " + fx2.path("table2a.json") + " '[[0],[1]]'");
  CHECK(props.exit_code == 2);

  const RunResult missing = run("allocate --algo mnw /nonexistent.json");
  CHECK(missing.exit_code == 2);
}

TEST_CASE("budget refusals exit 3") {
  Fixture fx;
  const RunResult result =
      run("allocate --algo leximin " + fx.path("table1a.json"), "FAIRDIV_BUDGET=10");
  CHECK(result.exit_code == 3);
}

TEST_CASE("bench runs the requested algorithms") {
  const RunResult result = run("bench --family uniform --sizes 2x4 --seed 3 --algos draft,mnw");
  CHECK(result.exit_code == 0);
  const json doc = json::parse(result.output);
  REQUIRE(doc["runs"].size() == 2);
  CHECK(doc["runs"][0]["algo"] == "draft");
  CHECK(doc["runs"][1]["algo"] == "mnw");
}
