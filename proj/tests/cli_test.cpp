// Copyright 2026 The bagorder Authors.
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

#include "bagorder/cli.hpp"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace bagorder {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome Invoke(const std::vector<std::string>& args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out;
  std::ostringstream err;
  const int status = run(args, in, out, err);
  return {status, out.str(), err.str()};
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("bagorder_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    corpus_ = (dir_ / "corpus.txt").string();
    std::ofstream(corpus_) << "the cat sat\nthe dog ran\na cat ran\nthe cat ran\n";
    tables_ = (dir_ / "tables").string();
  }
  void TearDown() override { fs::remove_all(dir_); }

  void Train(int order = 3) {
    const Outcome o = Invoke({"train", "--corpus", corpus_, "--order",
                           std::to_string(order), "--out", tables_});
    ASSERT_EQ(o.status, 0) << o.err;
  }

  fs::path dir_;
  std::string corpus_;
  std::string tables_;
};

TEST_F(CliTest, TrainWritesTablesAndHeader) {
  const Outcome o = Invoke({"train", "--corpus", corpus_, "--out", tables_});
  ASSERT_EQ(o.status, 0) << o.err;
  EXPECT_TRUE(fs::exists(fs::path(tables_) / "vocab.tsv"));
  EXPECT_TRUE(fs::exists(fs::path(tables_) / "pairs.tsv"));
  EXPECT_TRUE(fs::exists(fs::path(tables_) / "ngrams.tsv"));
  EXPECT_EQ(o.out.rfind("# bagorder 1.0.0\n# command: train", 0), 0u);
  EXPECT_NE(o.out.find("# tables: "), std::string::npos);
  EXPECT_NE(o.out.find("sentences\t4\n"), std::string::npos);
}

TEST_F(CliTest, ReRunsAreByteIdentical) {
  Train();
  const std::string first = ReadFile(fs::path(tables_) / "pairs.tsv");
  const Outcome a = Invoke({"generate", "--tables", tables_, "--model", "AM3"},
                        "cat the sat\nran dog the\n");
  Train();
  EXPECT_EQ(ReadFile(fs::path(tables_) / "pairs.tsv"), first);
  const Outcome b = Invoke({"generate", "--tables", tables_, "--model", "AM3"},
                        "cat the sat\nran dog the\n");
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, GenerateIgnoresBagOrder) {
  Train();
  const Outcome a = Invoke({"generate", "--tables", tables_, "--model", "AMn",
                         "--bag", "sat cat the"});
  const Outcome b = Invoke({"generate", "--tables", tables_, "--model", "AMn",
                         "--bag", "the sat cat"});
  ASSERT_EQ(a.status, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("\nthe cat sat\t"), std::string::npos);
}

TEST_F(CliTest, GenerateLabelsUnsafeAndBeamRuns) {
  Train();
  const Outcome o = Invoke({"generate", "--tables", tables_, "--model", "AM3",
                         "--no-condition4", "--beam", "3", "--bag", "the cat ran"});
  ASSERT_EQ(o.status, 0) << o.err;
  EXPECT_NE(o.out.find("(unsafe)"), std::string::npos);
  EXPECT_NE(o.out.find("(approximate search)"), std::string::npos);
}

TEST_F(CliTest, OracleAndSearchAgree) {
  Train();
  const std::string bags = "ran the cat\ndog the ran\nsat cat the\n";
  const Outcome dp = Invoke({"generate", "--tables", tables_, "--model", "M3"}, bags);
  const Outcome bf =
      Invoke({"generate", "--tables", tables_, "--model", "M3", "--oracle"}, bags);
  ASSERT_EQ(dp.status, 0);
  ASSERT_EQ(bf.status, 0);
  const auto body = [](const std::string& s) {
    std::istringstream in(s);
    std::string line;
    std::vector<std::string> words;
    while (std::getline(in, line)) {
      if (line.starts_with("#")) continue;
      words.push_back(line.substr(0, line.find('\t')));
    }
    return words;
  };
  EXPECT_EQ(body(dp.out), body(bf.out));
}

TEST_F(CliTest, ScorePrintsOneLinePerSentence) {
  Train(2);
  const Outcome o = Invoke({"score", "--tables", tables_, "--model", "exact",
                         "--order", "2"},
                        "the cat sat\nsat the cat\n");
  ASSERT_EQ(o.status, 0) << o.err;
  EXPECT_NE(o.out.find("\nthe cat sat\t-"), std::string::npos);
  EXPECT_NE(o.out.find("\nsat the cat\t-inf\n"), std::string::npos);
}

TEST_F(CliTest, EvalClosedWritesTsv) {
  Train();
  const std::string tsv = (dir_ / "report.tsv").string();
  const Outcome o = Invoke({"eval", "--tables", tables_, "--test", corpus_,
                         "--models", "M2,AM2", "--tsv", tsv, "--threads", "2"});
  ASSERT_EQ(o.status, 0) << o.err;
  EXPECT_NE(o.out.find("mode=closed"), std::string::npos);
  const std::string text = ReadFile(tsv);
  EXPECT_EQ(text.rfind("length\ttotal\tM2\tAM2\tdead:M2\tdead:AM2\n", 0), 0u);
  EXPECT_NE(text.find("\ntotal\t4\t"), std::string::npos);
}

TEST_F(CliTest, EvalOpenNeedsNoTables) {
  const Outcome o = Invoke({"eval", "--open", "--test", corpus_, "--models", "AM2"});
  ASSERT_EQ(o.status, 0) << o.err;
  EXPECT_NE(o.out.find("mode=open"), std::string::npos);
}

TEST_F(CliTest, ParamsListsEveryModel) {
  Train();
  const Outcome o = Invoke({"params", "--tables", tables_, "--models", "M2,M3,AM2,AMn"});
  ASSERT_EQ(o.status, 0) << o.err;
  for (const char* l : {"\nM2\t", "\nM3\t", "\nAM2\t", "\nAMn\t"}) {
    EXPECT_NE(o.out.find(l), std::string::npos) << l;
  }
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Invoke({}).status, 2);
  EXPECT_EQ(Invoke({"frobnicate"}).status, 2);
  EXPECT_EQ(Invoke({"train", "--corpus", corpus_}).status, 2);
  EXPECT_EQ(Invoke({"train", "--corpus", corpus_, "--out", tables_, "--order", "1"}).status, 2);
  EXPECT_EQ(Invoke({"--version"}).status, 0);
}

TEST_F(CliTest, RuntimeErrorsExitOne) {
  EXPECT_EQ(Invoke({"params", "--tables", (dir_ / "missing").string()}).status, 1);
  Train();
  EXPECT_EQ(Invoke({"params", "--tables", tables_, "--models", "M9"}).status, 1);
  EXPECT_EQ(Invoke({"generate", "--tables", tables_, "--bag", "the * cat"}).status, 1);
  const Outcome dead =
      Invoke({"generate", "--tables", tables_, "--model", "M2", "--bag", "dog sat"});
  EXPECT_EQ(dead.status, 1);
  EXPECT_NE(dead.err.find("no arrangement"), std::string::npos) << dead.err;
}

}  // namespace
}  // namespace bagorder
