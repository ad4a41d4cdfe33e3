#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pcnet/cli.hpp"
#include "support.hpp"

using namespace pcnet;
using pcnet::testing::fixture_path;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "pcnet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const std::string kTiny = fixture_path("tiny.pcnet.json");
const std::string kMachining = fixture_path("machining.pcnet.json");
const std::string kLeaves =
    "sensor-failure,tool-breakage,tool-chatter,tool-wear,transient-state,within-limits";

struct Golden {
  std::string name;
  std::vector<std::string> args;
};

std::vector<Golden> golden_cases() {
  std::vector<std::string> breakage{"--evidence", "current=high",    "--evidence", "AE-mag=low",
                                    "--evidence", "AE-peak=high",    "--evidence", "dyn-peak-x=high",
                                    "--evidence", "dyn-peak-y=high"};
  auto with = [](std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  return {
      {"tiny_validate", {"--input", kTiny, "validate"}},
      {"tiny_propagate", {"--input", kTiny, "propagate"}},
      {"tiny_covers", {"--input", kTiny, "covers"}},
      {"tiny_build", {"--input", kTiny, "build", "--cover", "A,B"}},
      {"tiny_solve_hi", {"--input", kTiny, "solve", "--cover", "A,B", "--evidence", "F=hi"}},
      {"tiny_solve_lo", {"--input", kTiny, "solve", "--cover", "A,B", "--evidence", "F=lo"}},
      {"tiny_refine",
       {"--input", kTiny, "refine", "--init", "R", "--kappa-table", "0", "--kappa-concept", "0",
        "--evidence", "F=lo"}},
      {"tiny_dot_net", {"--input", kTiny, "export-dot", "--target", "net"}},
      {"tiny_dot_cover", {"--input", kTiny, "export-dot", "--target", "cover", "--cover", "A,B"}},
      {"tiny_dot_model", {"--input", kTiny, "export-dot", "--target", "model", "--cover", "A,B"}},
      {"machining_validate", {"--input", kMachining, "validate"}},
      {"machining_propagate", {"--input", kMachining, "propagate"}},
      {"machining_covers", {"--input", kMachining, "covers"}},
      {"machining_build", {"--input", kMachining, "build", "--cover", "out-of-limits,within-limits"}},
      {"machining_solve_breakage",
       with({"--input", kMachining, "solve", "--cover", kLeaves}, breakage)},
      {"machining_refine",
       with({"--input", kMachining, "refine", "--init", "machine-state", "--kappa-table", "0",
             "--kappa-concept", "0"},
            breakage)},
      {"machining_dot_net", {"--input", kMachining, "export-dot", "--target", "net"}},
      {"machining_dot_chatter",
       {"--input", kMachining, "export-dot", "--target", "diagram", "--concept", "tool-chatter"}},
      {"machining_dot_model",
       {"--input", kMachining, "export-dot", "--target", "model", "--cover", kLeaves}},
  };
}

}  // namespace

TEST(Cli, ValidateExitCodes) {
  auto ok = run({"--input", kTiny, "validate"});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out, "ok\n");

  auto bad = run({"--input", fixture_path("corrupt_cpt.pcnet.json"), "validate"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("row sums to 0.97"), std::string::npos) << bad.out;

  EXPECT_EQ(run({"--input", fixture_path("missing.json"), "validate"}).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"validate"}).code, 2);
  EXPECT_EQ(run({"--input", kTiny}).code, 2);
  EXPECT_EQ(run({"--input", kTiny, "frobnicate"}).code, 2);
  EXPECT_EQ(run({"--input", kTiny, "solve"}).code, 2);
  EXPECT_EQ(run({"--input", kTiny, "solve", "--cover", "A,B", "--evidence", "F"}).code, 2);
}

TEST(Cli, ParseAndSchemaErrorsExitTwo) {
  auto dir = std::filesystem::temp_directory_path() / "pcnet_cli_test";
  std::filesystem::create_directories(dir);
  auto broken = (dir / "broken.json").string();
  std::ofstream(broken) << "{\"features\": [";
  EXPECT_EQ(run({"--input", broken, "validate"}).code, 2);
  auto schema = (dir / "schema.json").string();
  std::ofstream(schema) << "{\"features\": []}";
  EXPECT_EQ(run({"--input", schema, "validate"}).code, 2);
}

TEST(Cli, SolveTiny) {
  auto hi = run({"--input", kTiny, "solve", "--cover", "A,B", "--evidence", "F=hi"});
  EXPECT_EQ(hi.code, 0);
  EXPECT_EQ(nlohmann::json::parse(hi.out)["best_action"], "stop");
  auto lo = run({"--input", kTiny, "solve", "--cover", "B,A", "--evidence", "F=lo"});
  EXPECT_EQ(nlohmann::json::parse(lo.out)["best_action"], "continue");
}

TEST(Cli, DomainErrorsExitOne) {
  EXPECT_EQ(run({"--input", kTiny, "solve", "--cover", "A,B,B1"}).code, 1);
  EXPECT_EQ(run({"--input", kTiny, "solve", "--cover", "A,B", "--evidence", "F=mid"}).code, 1);
  EXPECT_EQ(run({"--input", kTiny, "solve", "--cover", "A,B", "--evidence", "G=hi"}).code, 1);
  EXPECT_EQ(run({"--input", kTiny, "export-dot", "--target", "blueprint"}).code, 1);
  EXPECT_EQ(run({"--input", kTiny, "export-dot", "--target", "model", "--cover", "Q"}).code, 1);
  EXPECT_EQ(run({"--input", kTiny, "export-dot", "--target", "diagram", "--concept", "Q"}).code, 1);
  EXPECT_EQ(run({"--input", kTiny, "refine", "--init", "A", "--kappa-table", "0",
                 "--kappa-concept", "0"})
                .code,
            1);
  auto bad = run({"--input", fixture_path("corrupt_cpt.pcnet.json"), "solve", "--cover", "R"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("row sums"), std::string::npos);
}

TEST(Cli, ImpossibleEvidenceExitsOne) {
  auto doc = nlohmann::json::parse(read_text_file(kTiny));
  for (auto& d : doc["diagrams"]) d["cpt"]["F"][0]["p"] = {{"hi", 1.0}, {"lo", 0.0}};
  auto path = (std::filesystem::temp_directory_path() / "pcnet_certain.json").string();
  std::ofstream(path) << doc.dump();
  auto r = run({"--input", path, "solve", "--cover", "A,B", "--evidence", "F=lo"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("EvidenceImpossible"), std::string::npos) << r.err;
}

TEST(Cli, OutputFile) {
  auto path = (std::filesystem::temp_directory_path() / "pcnet_covers.txt").string();
  auto r = run({"--input", kTiny, "--output", path, "covers"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(read_text_file(path), "R\nA,B\nA,B1,B2\n");
}

TEST(Cli, PropagateRoundTrips) {
  auto path = (std::filesystem::temp_directory_path() / "pcnet_propagated.json").string();
  ASSERT_EQ(run({"--input", kMachining, "--output", path, "propagate"}).code, 0);
  auto again = run({"--input", path, "propagate"});
  EXPECT_EQ(again.code, 0);
  EXPECT_EQ(again.out, read_text_file(path));
}

TEST(Cli, GoldenFiles) {
  const bool update = std::getenv("PCNET_UPDATE_GOLDEN") != nullptr;
  for (const auto& g : golden_cases()) {
    auto r = run(g.args);
    ASSERT_EQ(r.code, 0) << g.name << ": " << r.err;
    auto path = std::string(PCNET_GOLDEN_DIR) + "/" + g.name + ".out";
    if (update) {
      std::ofstream(path, std::ios::binary) << r.out;
      continue;
    }
    ASSERT_TRUE(std::filesystem::exists(path)) << path;
    EXPECT_EQ(r.out, read_text_file(path)) << g.name;
  }
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  for (const auto& g : golden_cases()) {
    EXPECT_EQ(run(g.args).out, run(g.args).out) << g.name;
  }
}
