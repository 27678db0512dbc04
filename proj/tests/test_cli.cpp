#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"

using namespace masep;
using namespace masep::cli;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("masep_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path file(const std::string& name, const std::string& content) const {
    auto p = path_ / name;
    std::ofstream(p) << content;
    return p;
  }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
  static inline int counter_ = 0;
};

int run_cli(const std::string& args) {
  std::string cmd = std::string(MASEP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ResultRecord run_line(const std::string& command, const std::string& line, GlobalOptions g = {}) {
  return run_command(command, config_from_json(json::parse(line)), g);
}

const char* green_line =
    R"({"query":{"initial":{"positions":[0,1],"species":[2,1]},"final":{"positions":[1,2],"species":[1,2]},"t":1.0}})";

}  // namespace

TEST(Records, RoundTrip) {
  ResultRecord r;
  r.command = "green";
  r.input = json{{"t", 1.0}, {"a", {1, 2}}};
  r.value = 0.1;
  r.error = 2.5e-13;
  r.method = "quadrature";
  r.wall_clock = 0.25;
  r.extra = json{{"nodes", 64}};
  EXPECT_EQ(parse_record_line(record_line(r)), r);
}

TEST(Records, KeysSortedAndDoublesMarked) {
  ResultRecord r;
  r.command = "wall";
  r.value = 1.0;
  r.error = std::nan("");
  auto line = record_line(r);
  EXPECT_NE(line.find("\"error\":null"), std::string::npos);
  EXPECT_NE(line.find("\"value\":1.0"), std::string::npos);
  EXPECT_LT(line.find("\"command\""), line.find("\"value\""));
  EXPECT_EQ(line.find('\n'), std::string::npos);
}

TEST(Records, CanonicalLineIgnoresWallClock) {
  ResultRecord a, b;
  a.wall_clock = 1.0;
  b.wall_clock = 2.0;
  EXPECT_NE(record_line(a), record_line(b));
  EXPECT_EQ(canonical_line(a), canonical_line(b));
}

TEST(Configs, CommentsAndBlankLinesSkipped) {
  std::istringstream in("# header\n\n  {\"command\":\"green\",\"seed\":3}\n");
  auto cs = read_configs(in);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].command, "green");
  EXPECT_EQ(cs[0].seed, 3u);
  EXPECT_EQ(config_from_json(to_json(cs[0])).seed, 3u);
}

TEST(Configs, ParseErrorNamesLine) {
  std::istringstream in("{}\n{oops\n");
  try {
    read_configs(in);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Csv, Escaping) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_header(), "row,command,method,value,error,input");
}

TEST(Commands, GreenRecord) {
  auto r = run_line("green", green_line);
  EXPECT_NEAR(r.value, 0.067667641618306337, 1e-10);
  EXPECT_EQ(r.command, "green");
  EXPECT_EQ(r.version, std::string(masep::version));
  EXPECT_EQ(r.input.at("query").at("t"), 1.0);
}

TEST(Commands, SeedFlagOverridesConfig) {
  const std::string line =
      R"({"seed":1,"query":{"mode":"wall","n":2,"m":1,"rho":0.5,"s1":-3,"s2":2,"t":2.0,"samples":20000}})";
  GlobalOptions g;
  g.seed = 42;
  auto a = run_line("simulate", line, g);
  auto b = run_line("simulate", line, g);
  auto c = run_line("simulate", line);
  EXPECT_EQ(canonical_line(a), canonical_line(b));
  EXPECT_NE(a.value, c.value);
}

TEST(Commands, ThreadCountDoesNotChangeResults) {
  const std::string line =
      R"({"seed":7,"query":{"mode":"estimate","initial":{"positions":[0,1],"species":[2,1]},"target":{"positions":[1,2],"species":[1,2]},"q":0.5,"t":1.0,"samples":50000}})";
  std::string first;
  for (int threads : {1, 3, 8}) {
    GlobalOptions g;
    g.threads = threads;
    auto line_out = canonical_line(run_line("simulate", line, g));
    if (first.empty()) first = line_out;
    EXPECT_EQ(line_out, first) << threads << " threads";
  }
}

TEST(Commands, ErrorsMapToExitCodes) {
  EXPECT_EQ(exit_code_for(ValidationError("x")), validation);
  EXPECT_EQ(exit_code_for(ConfigurationError("x")), validation);
  EXPECT_EQ(exit_code_for(AccuracyError("x")), accuracy);
  EXPECT_EQ(exit_code_for(ResourceLimitError("x")), resource);
  EXPECT_THROW(run_line("green", R"({"query":{"t":1.0}})"), ValidationError);
  EXPECT_THROW(run_line("nonsense", "{}"), ValidationError);
}

TEST(Golden, RecordsReproduce) {
  for (std::string cmd : {"green", "crossing", "wall", "simulate"}) {
    auto configs = read_config_file(std::string(MASEP_GOLDEN_DIR) + "/" + cmd + ".config.jsonl");
    std::ifstream in(std::string(MASEP_GOLDEN_DIR) + "/" + cmd + ".records.jsonl");
    ASSERT_TRUE(in) << cmd;
    auto expected = read_records(in);
    ASSERT_EQ(configs.size(), expected.size()) << cmd;
    for (std::size_t i = 0; i < configs.size(); ++i) {
      auto got = run_command(cmd, configs[i], {});
      auto want = expected[i];
      EXPECT_NEAR(got.value, want.value, 1e-12 * std::max(1.0, std::abs(want.value))) << cmd << " line " << i + 1;
      EXPECT_EQ(got.method, want.method) << cmd << " line " << i + 1;
      EXPECT_EQ(got.input, want.input) << cmd << " line " << i + 1;
    }
  }
}

TEST(Binary, GreenWritesRecords) {
  TempDir d;
  auto cfg = d.file("g.jsonl", std::string(green_line) + "\n");
  auto out = d / "out.jsonl";
  auto csv = d / "out.csv";
  ASSERT_EQ(run_cli("green --config " + cfg.string() + " --out " + out.string() + " --csv " + csv.string()), 0);
  ASSERT_EQ(run_cli("green --config " + cfg.string() + " --out " + out.string()), 0);
  std::ifstream in(out);
  auto rs = read_records(in);
  ASSERT_EQ(rs.size(), 2u);
  EXPECT_NEAR(rs[0].value, 0.067667641618306337, 1e-10);
  auto table = slurp(csv);
  EXPECT_EQ(table.rfind(csv_header(), 0), 0u);
  EXPECT_NE(table.find("\n0,green,"), std::string::npos);
}

TEST(Binary, ValidationFailuresExitTwo) {
  TempDir d;
  EXPECT_EQ(run_cli("green --config " + (d / "missing.jsonl").string()), 2);
  EXPECT_EQ(run_cli("green --config " + d.file("empty.jsonl", "# nothing\n").string()), 2);
  EXPECT_EQ(run_cli("green --config " + d.file("bad.jsonl", "{not json\n").string()), 2);
  EXPECT_EQ(run_cli("green"), 2);
  EXPECT_EQ(run_cli("frobnicate --config x"), 2);
  auto wall = d.file("w.jsonl", R"({"query":{"form":"one_wall","n":2,"m":1,"rho":0.5,"s1":0,"s2":2,"t":1.0}})"
                                "\n");
  EXPECT_EQ(run_cli("wall --config " + wall.string()), 2);
  auto verify = d.file("v.jsonl", R"({"query":{"suites":[]}})"
                                  "\n");
  EXPECT_EQ(run_cli("verify --config " + verify.string()), 2);
}

TEST(Binary, BudgetExceededExitsFour) {
  TempDir d;
  auto cfg = d.file("s.jsonl", R"({"query":{"mode":"wall","n":2,"m":1,"rho":0.5,"s1":-3,"s2":2,"t":2.0,"samples":100000}})"
                               "\n");
  EXPECT_EQ(run_cli("simulate --config " + cfg.string() + " --budget 1000"), 4);
}

TEST(Binary, AccuracyFailureExitsThree) {
  TempDir d;
  auto cfg = d.file("q.jsonl", std::string(green_line) + "\n");
  EXPECT_EQ(run_cli("green --config " + cfg.string() + " --tol 1e-300 --budget 100000"), 3);
}

TEST(Binary, VerifyDetectsPerturbedWeights) {
  TempDir d;
  auto good = d.file("good.jsonl", R"({"query":{"suites":["identities"]}})"
                                   "\n");
  auto bad = d.file("bad.jsonl", R"({"query":{"suites":["vertex"],"perturb":true}})"
                                 "\n");
  EXPECT_EQ(run_cli("verify --config " + good.string()), 0);
  EXPECT_EQ(run_cli("verify --config " + bad.string()), 1);
}

TEST(Binary, VersionFlag) { EXPECT_EQ(run_cli("--version"), 0); }
