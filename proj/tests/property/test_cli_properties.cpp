#include "property.hpp"

#include "wk/error.hpp"
#include "wk/runner.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace wk;
using nlohmann::json;
using wk::test::for_all;
using wk::test::Gen;

namespace {

json base_config() {
  return json::parse(R"J({
    "families": {"p": {"kind": "polynomial", "k": 1, "indices": [0, 1, 2]}},
    "grids": {"g": {"dim": 1, "lo": -5, "hi": 5, "points": 101}},
    "functions": {"f": {"grid": "g", "expression": "exp(-x^2)"}},
    "kernels": {"k": {"x_grid": "g", "y_grid": "g", "expression": "exp(-(x - y)^2)"}},
    "checks": [
      {"name": "a", "type": "condition-a", "family": "p", "grid": "g", "gamma1": 1, "gamma2": 2, "gamma": 2, "C": 0.5},
      {"name": "s", "type": "seminorm", "function": "f", "family": "p", "gamma": 0, "m": 1},
      {"name": "d", "type": "kernel-decompose", "kernel": "k", "rank": 3, "r_max": 10}
    ]})J");
}

json random_value(Gen& gen) {
  switch (gen.integer(0, 6)) {
    case 0: return nullptr;
    case 1: return gen.uniform(-10.0, 10.0);
    case 2: return gen.integer(-3, 12);
    case 3: return "x";
    case 4: return json::array({1, "2"});
    case 5: return json::object();
    default: return gen.coin();
  }
}

/// Replaces or deletes one random leaf.
void mutate(Gen& gen, json& j) {
  if (!j.is_structured() || j.empty() || gen.integer(0, 3) == 0) {
    j = random_value(gen);
    return;
  }
  if (j.is_object()) {
    auto it = j.begin();
    std::advance(it, gen.integer(0, static_cast<int>(j.size()) - 1));
    if (gen.integer(0, 4) == 0) {
      j.erase(it.key());
      return;
    }
    mutate(gen, it.value());
  } else {
    mutate(gen, j[static_cast<std::size_t>(gen.integer(0, static_cast<int>(j.size()) - 1))]);
  }
}

}  // namespace

TEST(CliProperties, ExitCodeContractIsTotal) {
  const auto dir = std::filesystem::temp_directory_path() / "wk_cli_fuzz";
  const Command commands[] = {Command::CheckFamily, Command::Seminorm, Command::KernelDecompose, Command::ReportAll};
  for_all("exit codes", 61, [&](Gen& gen) {
    json doc = base_config();
    const int edits = gen.integer(0, 3);
    for (int e = 0; e < edits; ++e) mutate(gen, doc);
    RunOptions o;
    o.out_dir = dir;
    o.quiet = true;
    if (gen.integer(0, 5) == 0) o.tol = gen.uniform(-1.0, 1.0);
    std::ostringstream os;
    int code = -1;
    try {
      code = run(commands[gen.integer(0, 3)], parse_config(doc), o, os).exit_code;
    } catch (const Error&) {
      code = 2;  // parse_config rejects the document before a run
    }
    EXPECT_TRUE(code == 0 || code == 1 || code == 2) << doc.dump();
  });
  std::filesystem::remove_all(dir);
}

TEST(CliProperties, RunsAreByteIdentical) {
  const auto root = std::filesystem::temp_directory_path() / "wk_cli_det";
  for_all("determinism", 62, [&](Gen& gen) {
    json doc = base_config();
    doc["checks"][1]["m"] = gen.integer(0, 2);
    doc["checks"][2]["rank"] = gen.integer(1, 8);
    doc["grids"]["g"]["points"] = gen.integer(11, 81);
    std::string first;
    for (int run_no = 0; run_no < 2; ++run_no) {
      std::filesystem::remove_all(root);
      RunOptions o;
      o.out_dir = root;
      o.quiet = true;
      std::ostringstream os;
      ASSERT_NE(run(Command::ReportAll, parse_config(doc), o, os).exit_code, 2);
      std::string all;
      for (const char* f : {"a.json", "s.json", "d.json", "d.decay.csv", "index.json"}) {
        std::ifstream in(root / f, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        all += s.str();
      }
      if (run_no == 0) first = all;
      else EXPECT_EQ(first, all);
    }
  }, 100);
  std::filesystem::remove_all(root);
}
