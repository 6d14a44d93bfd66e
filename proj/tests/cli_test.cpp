// Copyright 2026 The unitlang Authors.
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

#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace unitlang::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("unitlang_cli_" + std::string(::testing::UnitTest::GetInstance()
                                              ->current_test_info()
                                              ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "unitlang");
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }

  static std::size_t lines(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, CountThenSegmentIsLineAligned) {
  write("units.txt", "1 2 3 1 2 3 5 2 7 2 8\n\n1 2 3\n");
  ASSERT_EQ(run_cli({"count", "--in", path("units.txt"), "--max-span", "4", "--out",
                     path("m.unitlm")}),
            kOk);
  EXPECT_EQ(read("m.unitlm").rfind("UNITLM v1 max_span=4 token_total=14\n", 0), 0u);
  ASSERT_EQ(run_cli({"segment", "--model", path("m.unitlm"), "--order", "2", "--k", "2",
                     "--in", path("units.txt"), "--out", path("ul.txt")}),
            kOk);
  const std::string ul = read("ul.txt");
  EXPECT_EQ(lines(ul), 3u);
  EXPECT_EQ(ul.substr(ul.rfind('\n', ul.size() - 2) + 1), "1 2_3\n");
  EXPECT_FALSE(fs::exists(path("ul.txt.tmp")));
}

TEST_F(CliTest, SegmentEnforcesMaxSpanConstraint) {
  write("units.txt", "1 2 3 1 2 3\n");
  ASSERT_EQ(run_cli({"count", "--in", path("units.txt"), "--max-span", "4", "--out",
                     path("m.unitlm")}),
            kOk);
  EXPECT_EQ(run_cli({"segment", "--model", path("m.unitlm"), "--order", "2", "--k", "3",
                     "--in", path("units.txt"), "--out", path("ul.txt")}),
            kContract);
  EXPECT_NE(err_.str().find("2K"), std::string::npos);
  EXPECT_EQ(lines(err_.str()), 1u);
  EXPECT_FALSE(fs::exists(path("ul.txt")));
}

TEST_F(CliTest, OracleCheckReportsZeroMismatches) {
  write("units.txt", "1 2 3 1 2 3 5 2 7 2 8\n3 2 1 1 2\n");
  ASSERT_EQ(run_cli({"count", "--in", path("units.txt"), "--max-span", "4", "--out",
                     path("m.unitlm")}),
            kOk);
  ASSERT_EQ(run_cli({"oracle-check", "--model", path("m.unitlm"), "--order", "2", "--k", "2",
                     "--max-len", "12", "--samples", "200"}),
            kOk);
  EXPECT_NE(out_.str().find("mismatches=0 "), std::string::npos) << out_.str();
  EXPECT_EQ(run_cli({"oracle-check", "--model", path("m.unitlm"), "--order", "2", "--k", "2",
                     "--max-len", "40"}),
            kContract);
}

TEST_F(CliTest, PruneDedupAndBpe) {
  write("units.txt", "1 1 2 1 1 2\n5 5 5 7\n");
  ASSERT_EQ(run_cli({"dedup", "--in", path("units.txt"), "--out", path("d.txt")}), kOk);
  EXPECT_EQ(read("d.txt"), "1 2 1 2\n5 7\n");

  ASSERT_EQ(run_cli({"count", "--in", path("units.txt"), "--max-span", "2", "--dedup",
                     "--out", path("m.unitlm")}),
            kOk);
  ASSERT_EQ(run_cli({"prune", "--model", path("m.unitlm"), "--min-count", "2", "--out",
                     path("p.unitlm")}),
            kOk);
  EXPECT_EQ(read("p.unitlm"), "UNITLM v1 max_span=2 token_total=6\n1\t2\n2\t2\n5\t1\n7\t1\n1_2\t2\n");

  ASSERT_EQ(run_cli({"bpe-train", "--in", path("units.txt"), "--merges", "2", "--out",
                     path("merges.txt")}),
            kOk);
  EXPECT_EQ(read("merges.txt"), "1 1\n1_1 2\n");
  ASSERT_EQ(run_cli({"bpe-apply", "--merges", path("merges.txt"), "--in", path("units.txt"),
                     "--out", path("bpe.txt")}),
            kOk);
  EXPECT_EQ(read("bpe.txt"), "1_1_2 1_1_2\n5 5 5 7\n");
}

TEST_F(CliTest, VocabAndEncode) {
  write("ul.txt", "1_2 3\n2_1\n\n1_2 1_2\n");
  ASSERT_EQ(run_cli({"vocab", "--in", path("ul.txt"), "--size-cap", "4", "--out",
                     path("v.tsv")}),
            kOk);
  // 1 and 2 never stand alone, so they rank last with count 0.
  EXPECT_EQ(read("v.tsv"), "1_2\t0\n3\t1\n1\t2\n2\t3\n");
  ASSERT_EQ(run_cli({"encode", "--vocab", path("v.tsv"), "--in", path("ul.txt"), "--out",
                     path("ids.txt")}),
            kOk);
  EXPECT_EQ(read("ids.txt"), "0 1\n3 2\n\n0 0\n");
  EXPECT_EQ(run_cli({"vocab", "--in", path("ul.txt"), "--size-cap", "2", "--out",
                     path("v2.tsv")}),
            kContract);
}

TEST_F(CliTest, AnalysisCommands) {
  write("a.txt", "1 2 3 4\n1 2 3 4 5 6\n");
  write("b.txt", "1_2 3_4\n1 2_3 4_5_6\n");
  ASSERT_EQ(run_cli({"stats", "--in", "unit=" + path("a.txt"), "--in", "ul=" + path("b.txt"),
                     "--ratio", "ul/unit"}),
            kOk);
  EXPECT_EQ(out_.str(), "unit\t5\nul\t2.5\nul/unit\t0.5\n");

  write("reps.txt", "# layer 0\n0.5 0.0005 -2.0 0.0\n# layer 1\n0 0\n");
  ASSERT_EQ(run_cli({"sparseness", "--in", path("reps.txt")}), kOk);
  EXPECT_EQ(out_.str(), "layer 0\t0.5\nlayer 1\t1\n");

  write("att.txt", "2 2\n0.5 0.5\n0 1\n");
  ASSERT_EQ(run_cli({"localness", "--in", path("att.txt"), "--window", "0", "--out",
                     path("loc.txt")}),
            kOk);
  EXPECT_EQ(read("loc.txt"), "0\t0.75\nmean\t0.75\n");
}

TEST_F(CliTest, ErrorCodes) {
  EXPECT_EQ(run_cli({}), kUsage);
  EXPECT_EQ(run_cli({"frobnicate"}), kUsage);
  EXPECT_EQ(run_cli({"count", "--in", "x", "--out", "y", "--bogus"}), kUsage);
  EXPECT_EQ(run_cli({"segment", "--model", "m", "--in", "x", "--out", "y", "--variant", "fast"}),
            kUsage);
  EXPECT_EQ(run_cli({"count", "--in", path("missing.txt"), "--out", path("m")}), kIo);
  write("bad.txt", "1 2\n3 x\n");
  EXPECT_EQ(run_cli({"count", "--in", path("bad.txt"), "--out", path("m")}), kFormat);
  EXPECT_NE(err_.str().find("line 2, column 3"), std::string::npos) << err_.str();
  write("v2.unitlm", "UNITLM v2 max_span=2 token_total=1\n1\t1\n");
  write("u.txt", "1\n");
  EXPECT_EQ(run_cli({"segment", "--model", path("v2.unitlm"), "--in", path("u.txt"), "--out",
                     path("o")}),
            kFormat);
  EXPECT_EQ(run_cli({"count", "--in", path("u.txt"), "--out", path("no/such/dir/m")}), kIo);
  EXPECT_EQ(run_cli({"--help"}), kOk);
}

}  // namespace
}  // namespace unitlang::cli
