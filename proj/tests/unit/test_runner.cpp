#include "wk/error.hpp"
#include "wk/runner.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace wk;
using nlohmann::json;

namespace {

const json kBase = json::parse(R"J({
  "families": {"schwartz": {"kind": "polynomial", "k": 1, "indices": [0, 1, 2, 3, 4]}},
  "grids": {"line": {"dim": 1, "lo": -10, "hi": 10, "points": 401}},
  "functions": {"gauss": {"grid": "line", "expression": "exp(-x^2)"}},
  "checks": []
})J");

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("wk_runner_" + name);
  std::filesystem::remove_all(p);
  return p;
}

RunResult run_json(Command c, const json& doc, const std::filesystem::path& out, std::string* text = nullptr) {
  RunOptions o;
  o.out_dir = out;
  std::ostringstream os;
  RunResult r = run(c, parse_config(doc), o, os);
  if (text) *text = os.str();
  return r;
}

json with_checks(json checks) {
  json doc = kBase;
  doc["checks"] = std::move(checks);
  return doc;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Runner, CommandNames) {
  EXPECT_EQ(command_from_string("kernel-decompose"), Command::KernelDecompose);
  EXPECT_THROW(command_from_string("frobnicate"), Error);
  EXPECT_TRUE(command_selects(Command::CheckFamily, "condition-II"));
  EXPECT_FALSE(command_selects(Command::Seminorm, "condition-II"));
  EXPECT_TRUE(command_selects(Command::ReportAll, "kernel-diff"));
}

TEST(Runner, EmptyCheckListIsUsageError) {
  const RunResult r = run_json(Command::ReportAll, kBase, scratch("empty"));
  EXPECT_EQ(r.exit_code, 2);
}

TEST(Runner, MissingIndexIsNamed) {
  const auto doc = with_checks(json::parse(
      R"J([{"type": "seminorm", "function": "gauss", "family": "schwartz", "gamma": 7}])J"));
  const RunResult r = run_json(Command::Seminorm, doc, scratch("missing"));
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.error.find("no index 7"), std::string::npos) << r.error;
}

TEST(Runner, ConfigErrorsExitTwo) {
  const char* bad[] = {
      R"J([{"type": "no-such-check"}])J",
      R"J([{"type": "seminorm", "function": "gauss", "family": "nope", "gamma": 0}])J",
      R"J([{"type": "seminorm", "function": "nope", "family": "schwartz", "gamma": 0}])J",
      R"J([{"type": "condition-c", "family": "schwartz", "grid": "line", "tol": -1}])J",
      R"J([{"name": "a", "type": "condition-c", "family": "schwartz", "grid": "line"},
          {"name": "a", "type": "condition-c", "family": "schwartz", "grid": "line"}])J",
      R"J([{"type": "seminorm", "function": "gauss", "family": "schwartz", "gamma": 0, "m": "two"}])J",
  };
  for (const char* checks : bad) {
    EXPECT_EQ(run_json(Command::ReportAll, with_checks(json::parse(checks)), scratch("bad")).exit_code, 2) << checks;
  }
}

TEST(Runner, MissingInputFileExitsTwo) {
  json doc = with_checks(json::parse(R"J([{"type": "seminorm", "function": "f", "family": "schwartz", "gamma": 0}])J"));
  doc["functions"]["f"] = {{"file", "/nonexistent/values.bin"}};
  EXPECT_EQ(run_json(Command::Seminorm, doc, scratch("nofile")).exit_code, 2);
  EXPECT_THROW(load_config("/nonexistent/config.json"), Error);
}

TEST(Runner, MixedVerdictsExitOneAndIndexMarksEach) {
  const auto doc = with_checks(json::parse(R"J([
    {"name": "good", "type": "condition-a", "family": "schwartz", "grid": "line",
     "gamma1": 1, "gamma2": 2, "gamma": 2, "C": 0.5},
    {"name": "bad", "type": "condition-a", "family": "schwartz", "grid": "line",
     "gamma1": 1, "gamma2": 2, "gamma": 2, "C": 0.75}])J"));
  const auto out = scratch("mixed");
  std::string text;
  const RunResult r = run_json(Command::CheckFamily, doc, out, &text);
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(text.find("PASS good"), std::string::npos);
  EXPECT_NE(text.find("FAIL bad"), std::string::npos);
  const json index = json::parse(slurp(out / "index.json"));
  EXPECT_EQ(index["checks"][0]["pass"], true);
  EXPECT_EQ(index["checks"][1]["pass"], false);
  EXPECT_EQ(index["pass"], false);
  EXPECT_EQ(index["artifacts"].size(), 2u);
}

TEST(Runner, CommandFiltersChecks) {
  const auto doc = with_checks(json::parse(R"J([
    {"name": "c", "type": "condition-c", "family": "schwartz", "grid": "line"},
    {"name": "s", "type": "seminorm", "function": "gauss", "family": "schwartz", "gamma": 0,
     "expected": 1, "expected_tol": 1e-10}])J"));
  const RunResult r = run_json(Command::Seminorm, doc, scratch("filter"));
  EXPECT_EQ(r.exit_code, 0);
  ASSERT_EQ(r.outcomes.size(), 1u);
  EXPECT_EQ(r.outcomes[0].name, "s");
}

TEST(Runner, ToleranceOverrideApplies) {
  // A loose override turns the C = 0.75 failure (worst ratio 1.5 at x = 0) into a pass.
  const auto doc = with_checks(json::parse(R"J([{"type": "condition-a", "family": "schwartz", "grid": "line",
     "gamma1": 1, "gamma2": 2, "gamma": 2, "C": 0.75}])J"));
  RunOptions o;
  o.out_dir = scratch("tol");
  o.tol = 0.6;
  std::ostringstream os;
  EXPECT_EQ(run(Command::CheckFamily, parse_config(doc), o, os).exit_code, 0);
  o.tol = -1.0;
  EXPECT_EQ(run(Command::CheckFamily, parse_config(doc), o, os).exit_code, 2);
}

TEST(Runner, ShippedConfigsAreDeterministic) {
  const RunConfig c = load_config(std::filesystem::path(WK_CONFIG_DIR) / "schwartz.json");
  const auto a = scratch("det_a"), b = scratch("det_b");
  RunOptions o;
  o.quiet = true;
  o.out_dir = a;
  std::ostringstream os;
  ASSERT_EQ(run(Command::ReportAll, c, o, os).exit_code, 0);
  o.out_dir = b;
  ASSERT_EQ(run(Command::ReportAll, c, o, os).exit_code, 0);
  EXPECT_TRUE(os.str().empty());
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(a)) {
    ++files;
    EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path();
  }
  EXPECT_GT(files, 1u);
}
