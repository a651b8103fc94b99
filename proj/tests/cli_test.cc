// Copyright 2026 The Unseen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "unseen/cli.h"
#include "unseen/json_io.h"

namespace unseen {
namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "unseen");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string Tmp(const std::string& name) {
  std::filesystem::create_directories(UNSEEN_TEST_TMP);
  return std::string(UNSEEN_TEST_TMP) + "/cli_" + name;
}

TEST(Sha256Test, KnownVectors) {
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(Sha256Hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(CliTest, PredictExample) {
  const auto r = Cli({"predict", "--method", "gt", "--phi", R"({"1":2,"2":1})",
                      "--r", "1", "--t", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["point"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(j["variance_proxy"].get<double>(), 4.0);
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(Cli({"predict", "--bogus"}).code, 1);
  EXPECT_EQ(Cli({}).code, 1);
  EXPECT_EQ(Cli({"predict", "--method", "gt", "--r", "1"}).code, 1);
  EXPECT_EQ(Cli({"predict", "--method", "gt", "--phi", "{", "--r", "1"}).code, 2);
  const auto pade = Cli({"predict", "--method", "pade", "--phi", R"({"2":1,"4":1})",
                         "--r", "1", "--t", "6"});
  EXPECT_EQ(pade.code, 3);
  EXPECT_NE(pade.err.find("Pade degenerate"), std::string::npos);
  const auto help = Cli({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("predict"), std::string::npos);
  const auto v = Cli({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find(VersionString()), std::string::npos);
}

TEST(CliTest, FitHStarWritesWeightsAndManifest) {
  const auto out = Tmp("w.json");
  const auto r = Cli({"fit-hstar", "--r", "5", "--t", "50", "--depth", "20", "--grid",
                      "1000", "--budget", "200", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = ReadJsonFile(out);
  EXPECT_EQ(j["weights"].size(), 20u);
  EXPECT_TRUE(j["certificate"].contains("tilde_g"));
  EXPECT_LT(j["certificate"]["evaluation"]["g_h"].get<double>(),
            j["certificate"]["g_sgt"].get<double>());
  const auto m = ReadJsonFile(out + ".manifest.json");
  EXPECT_EQ(m["subcommand"], "fit-hstar");
  EXPECT_EQ(m["output"]["sha256"], Sha256File(out));
  EXPECT_EQ(m["options"]["cert_grid"], 10000);
  EXPECT_EQ(m["version"].get<std::string>().empty(), false);

  // Reproducible from the manifest alone: replay argv[1:].
  std::vector<std::string> replay;
  for (std::size_t i = 1; i < m["argv"].size(); ++i) replay.push_back(m["argv"][i]);
  const auto before = Sha256File(out);
  ASSERT_EQ(Cli(replay).code, 0);
  EXPECT_EQ(Sha256File(out), before);

  // Weights feed back into predict.
  const auto p = Cli({"predict", "--method", "hstar", "--weights", out, "--phi",
                      R"({"1":10,"2":4,"3":1})", "--r", "5", "--t", "50"});
  ASSERT_EQ(p.code, 0) << p.err;
}

TEST(CliTest, ConfigFilesWithFlagPrecedence) {
  const auto toml = Tmp("c.toml");
  WriteTextFile(toml, "[predict]\nmethod = \"gt\"\nr = 1.0\nt = 10.0\nphi = '{\"1\":2,\"2\":1}'\n");
  auto r = Cli({"--config", toml, "predict"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_DOUBLE_EQ(nlohmann::json::parse(r.out)["point"].get<double>(), 1.0);
  r = Cli({"--config", toml, "predict", "--r", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_DOUBLE_EQ(nlohmann::json::parse(r.out)["point"].get<double>(), 0.75);

  const auto json = Tmp("c.json");
  WriteTextFile(json, R"({"predict": {"method": "null", "r": 2, "phi": "{\"1\":3}"}})");
  r = Cli({"--config", json, "predict"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_DOUBLE_EQ(nlohmann::json::parse(r.out)["point"].get<double>(), 0.0);
  r = Cli({"--config", json, "predict", "--method", "gt"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_DOUBLE_EQ(nlohmann::json::parse(r.out)["point"].get<double>(), 6.0);
}

TEST(CliTest, IngestDiagnoseBench) {
  const auto text = Tmp("sets.txt");
  std::string body;
  for (int k = 0; k < 60; ++k) {
    body += "s" + std::to_string(k % 23) + " s" + std::to_string((k * 7) % 31) + "\n";
  }
  WriteTextFile(text, body);
  const auto bin = Tmp("sets.bin");
  auto r = Cli({"--threads", "1", "ingest", "--kind", "sets", "--input", text, "--out", bin});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(bin + ".manifest.json"));
  r = Cli({"diagnose", "--input", bin, "--r", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(nlohmann::json::parse(r.out).contains("epsilon_hat"));
  const auto csv = Tmp("table.csv");
  r = Cli({"bench", "--input", bin, "--methods", "gt,null", "--fracs", "0.2..0.5x4",
           "--out", csv});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(csv);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 1 + 4 * 2);
  r = Cli({"bench", "--input", bin, "--methods", "gt", "--fracs", "0.3,0.4",
           "--perms", "5", "--seed", "2", "--out", Tmp("table.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(ReadJsonFile(Tmp("table.json"))["order_mode"], "perm_average");
  EXPECT_EQ(Cli({"ingest", "--kind", "sets", "--input", Tmp("none.txt"), "--out", bin}).code,
            2);
}

TEST(CliTest, SimulateChecks) {
  const auto model = Tmp("model.json");
  WriteTextFile(model, R"({"uniform": {"k": 100, "total": 1}})");
  auto r = Cli({"simulate", "--model", model, "--t", "50", "--r", "1", "--check", "mse",
                "--reps", "50", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_GT(nlohmann::json::parse(r.out)["mse"]["mean"].get<double>(), 0.0);
  r = Cli({"simulate", "--model", model, "--t", "50", "--check", "laplace"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& row : nlohmann::json::parse(r.out)["rows"]) {
    EXPECT_LT(row["relerr"].get<double>(), 1e-6);
  }
  r = Cli({"simulate", "--model", model, "--t", "50", "--r", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(nlohmann::json::parse(r.out).contains("s_tT_true"));
  EXPECT_EQ(Cli({"simulate", "--model", model, "--check", "mse"}).code, 1);
  WriteTextFile(model, R"({"nothing": 1})");
  EXPECT_EQ(Cli({"simulate", "--model", model, "--t", "5", "--r", "1"}).code, 2);
}

}  // namespace
}  // namespace unseen
