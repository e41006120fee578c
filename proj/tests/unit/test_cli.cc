// Copyright 2026 The OpenIME Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string output;  // stdout and stderr
};

Result Invoke(const std::string& args, const char* binary = OPENIME_CLI) {
  const std::string cmd = std::string(binary) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) r.output.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::size_t LineCount(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) n += !line.empty();
  return n;
}

std::string ReadAll(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / "openime_cli_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string Fixture(const char* name) {
    return std::string(OPENIME_FIXTURE_DIR) + "/" + name;
  }
  static std::string Text() {
    return "--syllables " + Fixture("syllables.txt") + " --dict " + Fixture("char_pinyin.tsv");
  }
  static std::string Path(const char* name) { return (dir_ / name).string(); }

  static Result Prepare() {
    return Invoke("prepare " + Text() + " --lexicon " + Fixture("lexicon.txt") + " --corpus " +
               Fixture("general.txt") + " --out-parallel " + Path("p.tsv") + " --out-vocab " +
               Path("v.tsv"));
  }

  static inline fs::path dir_;
};

TEST_F(Cli, HelpListsFlagsForEverySubcommand) {
  for (const char* sub : {"prepare", "train", "eval", "interlace", "bench", "sweep-filter",
                          "serve", "repl"}) {
    const Result r = Invoke(std::string(sub) + " --help");
    EXPECT_EQ(r.code, 0) << sub;
    EXPECT_NE(r.output.find("--config"), std::string::npos) << sub;
    EXPECT_NE(r.output.find("--seed"), std::string::npos) << sub;
  }
  const Result train = Invoke("train --help");
  for (const char* flag : {"--layers", "--hidden", "--ed", "--lr", "--lr-halve-after",
                           "--dropout", "--filter-ratio", "--epochs", "--batch"})
    EXPECT_NE(train.output.find(flag), std::string::npos) << flag;
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(Invoke("").code, 2);
  EXPECT_EQ(Invoke("frobnicate").code, 2);
  EXPECT_EQ(Invoke("eval --test x --no-such-flag").code, 2);
  EXPECT_EQ(Invoke("eval --test x --profile huge " + Text()).code, 2);
}

TEST_F(Cli, ConfigFileKeysAreChecked) {
  std::ofstream(Path("bad.json")) << R"({"epochs": 1, "not_a_key": 3})";
  Result r = Invoke("train " + Text() + " --train x --out y --config " + Path("bad.json"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("not_a_key"), std::string::npos) << r.output;
  std::ofstream(Path("type.json")) << R"({"epochs": "many"})";
  EXPECT_EQ(Invoke("train " + Text() + " --train x --out y --config " + Path("type.json")).code, 2);
}

TEST_F(Cli, MissingFilesAreDataErrors) {
  const Result r = Invoke("eval " + Text() + " --checkpoint " + Path("absent.oime") + " --test x");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.output.find("absent.oime"), std::string::npos) << r.output;
  EXPECT_EQ(Invoke("prepare --syllables /nonexistent --dict x --lexicon y --corpus z "
                "--out-parallel a --out-vocab b").code, 3);
}

TEST_F(Cli, PrepareCountsMatchItsSummary) {
  const Result r = Prepare();
  ASSERT_EQ(r.code, 0) << r.output;
  std::smatch m;
  ASSERT_TRUE(std::regex_search(r.output, m,
                                std::regex(R"((\d+) sentences -> .*, (\d+) vocabulary entries)")))
      << r.output;
  EXPECT_EQ(LineCount(Path("p.tsv")), std::stoul(m[1]));
  EXPECT_EQ(LineCount(Path("v.tsv")), std::stoul(m[2]));
}

// Flags beat the config file, which beats the profile.
TEST_F(Cli, SettingPrecedence) {
  ASSERT_EQ(Prepare().code, 0);
  std::ofstream(Path("cfg.json")) << R"({"hidden": 12, "epochs": 1, "char_hidden": 6})";
  const std::string base = "train " + Text() + " --vocab " + Path("v.tsv") + " --train " +
                           Path("p.tsv") + " --profile desk --config " + Path("cfg.json");
  ASSERT_EQ(Invoke(base + " --hidden 10 --out " + Path("prec.oime"), OPENIME_CLI64).code, 0);
  // The checkpoint meta carries the resolved model config.
  const std::string bytes = ReadAll(Path("prec.oime"));
  EXPECT_NE(bytes.find("\"hidden\":10"), std::string::npos);
  EXPECT_NE(bytes.find("\"char_hidden\":6"), std::string::npos);
  EXPECT_NE(bytes.find("\"embed\":64"), std::string::npos);
}

TEST_F(Cli, TrainTwiceGivesIdenticalCheckpoints) {
  ASSERT_EQ(Prepare().code, 0);
  const std::string base = "train " + Text() + " --vocab " + Path("v.tsv") + " --train " +
                           Path("p.tsv") + " --profile desk --seed 7 --epochs 2 --out ";
  ASSERT_EQ(Invoke(base + Path("a.oime"), OPENIME_CLI64).code, 0);
  ASSERT_EQ(Invoke(base + Path("b.oime"), OPENIME_CLI64).code, 0);
  const std::string a = ReadAll(Path("a.oime")), b = ReadAll(Path("b.oime"));
  ASSERT_FALSE(a.empty());
  EXPECT_TRUE(a == b);
  ASSERT_EQ(Invoke("train " + Text() + " --vocab " + Path("v.tsv") + " --train " + Path("p.tsv") +
                " --profile desk --seed 8 --epochs 2 --out " + Path("c.oime"), OPENIME_CLI64).code,
            0);
  EXPECT_FALSE(a == ReadAll(Path("c.oime")));
}

TEST_F(Cli, EvalPrintsMetricTable) {
  ASSERT_EQ(Prepare().code, 0);
  ASSERT_EQ(Invoke("train " + Text() + " --vocab " + Path("v.tsv") + " --train " + Path("p.tsv") +
                " --profile desk --epochs 1 --out " + Path("e.oime")).code, 0);
  const Result r = Invoke("eval " + Text() + " --profile desk --checkpoint " + Path("e.oime") +
                       " --test " + Fixture("general.txt") + " --out " + Path("m.csv"));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_TRUE(std::regex_search(r.output, std::regex(R"(top1\s+top5\s+top10\s+kyss)")));
  const std::string csv = ReadAll(Path("m.csv"));
  EXPECT_EQ(csv.rfind("metric,config,value\n", 0), 0u);
  for (const char* k : {"\ntop1,", "\ntop5,", "\ntop10,", "\nkyss,"})
    EXPECT_NE(csv.find(k), std::string::npos) << k;
}

}  // namespace
