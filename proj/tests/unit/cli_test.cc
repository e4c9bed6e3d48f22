// Copyright 2026 The sll Authors.
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

#include "sll/cli.h"

#include <sstream>

#include "doctest.h"
#include "sll/text_io.h"
#include "test_support.h"

namespace sll::cli {
namespace {

using testing::ReadText;
using testing::TempDir;
using testing::WriteText;

struct Outcome {
  int status = 0;
  std::string out;
  std::string err;
};

Outcome Call(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = Run(args, out, err);
  return {status, out.str(), err.str()};
}

std::map<std::string, std::string> ReadConfig(const std::filesystem::path& p) {
  std::map<std::string, std::string> kv;
  for (const auto& [k, v] : text::ReadKeyValueFile(p)) kv[k] = v;
  return kv;
}

void WriteToy(const TempDir& dir) {
  WriteText(dir / "x.tsv", "0\t0\n0.1\t0\n5\t5\n");
  WriteText(dir / "s.txt", "1,2\n1\n2\n");
  WriteText(dir / "y.txt", "1\n1\n2\n");
}

TEST_CASE("fit on a three-example toy dataset") {
  TempDir dir("fit");
  WriteToy(dir);
  const std::string inputs = ReadText(dir / "x.tsv") + ReadText(dir / "s.txt");
  const Outcome r = Call({"fit", "--features", (dir / "x.tsv").string(),
                          "--candidates", (dir / "s.txt").string(), "--truth",
                          (dir / "y.txt").string(), "--K", "1", "--out",
                          (dir / "model").string(), "--dump-graph"});
  REQUIRE(r.status == kExitOk);
  const auto labels = text::ReadLines(dir / "model" / "labels.csv");
  CHECK(labels.size() == 4);
  CHECK(labels[0] == "index,label");
  CHECK(labels[1] == "1,1");
  const auto trace = text::ReadLines(dir / "model" / "trace.csv");
  CHECK(trace.size() >= 2);
  CHECK(std::filesystem::exists(dir / "model" / "onehot.tsv"));
  CHECK(std::filesystem::exists(dir / "model" / "f_star.tsv"));
  CHECK(std::filesystem::exists(dir / "model" / "graph_edges.tsv"));
  CHECK(ReadConfig(dir / "model" / "effective_config.txt")["K"] == "1");
  CHECK(r.out.find("train_acc=1") != std::string::npos);
  // Inputs are untouched.
  CHECK(ReadText(dir / "x.tsv") + ReadText(dir / "s.txt") == inputs);

  const Outcome p = Call({"predict", "--model", (dir / "model").string(),
                          "--features", (dir / "x.tsv").string(), "--out",
                          (dir / "pred.csv").string()});
  REQUIRE(p.status == kExitOk);
  const auto rows = text::ReadLines(dir / "pred.csv");
  CHECK(rows.size() == 4);
  CHECK(rows[0] == "index,predicted_label,score_1,score_2");
  CHECK(rows[3].rfind("3,2,", 0) == 0);
}

TEST_CASE("config file supplies defaults that flags override") {
  TempDir dir("config");
  WriteToy(dir);
  WriteText(dir / "run.cfg",
            "# shared settings\nfeatures=" + (dir / "x.tsv").string() +
                "\ncandidates=" + (dir / "s.txt").string() +
                "\nalpha=50\nbeta=0.2\nK=2\nloop-max=3\n");
  const Outcome r = Call({"fit", "--config", (dir / "run.cfg").string(),
                          "--beta", "0.05", "--out", (dir / "m").string()});
  REQUIRE(r.status == kExitOk);
  auto cfg = ReadConfig(dir / "m" / "effective_config.txt");
  CHECK(cfg["alpha"] == "50");
  CHECK(cfg["beta"] == "0.05");
  CHECK(cfg["K"] == "2");
  CHECK(cfg["loop-max"] == "3");

  // The echoed config is itself a valid config file.
  const Outcome again = Call({"fit", "--config",
                              (dir / "m" / "effective_config.txt").string(),
                              "--out", (dir / "m2").string()});
  REQUIRE(again.status == kExitOk);
  CHECK(ReadText(dir / "m" / "labels.csv") == ReadText(dir / "m2" / "labels.csv"));
}

TEST_CASE("synth then cv twice gives byte-identical CSVs") {
  TempDir dir("cv");
  REQUIRE(Call({"synth", "--n", "60", "--seed", "3", "--out",
                (dir / "data").string()})
              .status == kExitOk);
  const std::string manifest = (dir / "data" / "manifest.txt").string();
  for (const char* run : {"a", "b"}) {
    REQUIRE(Call({"cv", "--manifest", manifest, "--seed", "11",
                  "--deterministic", "--loop-max", "10", "--out",
                  (dir / run).string()})
                .status == kExitOk);
  }
  CHECK(ReadText(dir / "a" / "results.csv") == ReadText(dir / "b" / "results.csv"));
  CHECK(ReadText(dir / "a" / "summary.csv") == ReadText(dir / "b" / "summary.csv"));
  CHECK(text::ReadLines(dir / "a" / "results.csv").size() == 6);
}

TEST_CASE("sweep writes one row per grid point") {
  TempDir dir("sweep");
  REQUIRE(Call({"synth", "--n", "50", "--out", (dir / "data").string()}).status ==
          kExitOk);
  WriteText(dir / "grid.txt", "alpha=10,1000\nbeta=0.01\nK=3,5\n");
  const Outcome r =
      Call({"sweep", "--manifest", (dir / "data" / "manifest.txt").string(),
            "--grid", (dir / "grid.txt").string(), "--loop-max", "5", "--out",
            (dir / "out").string()});
  REQUIRE(r.status == kExitOk);
  const auto rows = text::ReadLines(dir / "out" / "sweep.csv");
  CHECK(rows.size() == 5);
  CHECK(rows[0] == "alpha,beta,K,mean_train,std_train,mean_test,std_test");
}

TEST_CASE("friedman on the hand-ranked table") {
  TempDir dir("friedman");
  WriteText(dir / "t.txt",
            "a 0.90 0.80 0.85 0.70\nb 0.80 0.70 0.60 0.65\n"
            "c 0.70 0.75 0.65 0.60\n");
  const Outcome r = Call({"friedman", "--table", (dir / "t.txt").string(),
                          "--confidence", "0.90"});
  REQUIRE(r.status == kExitOk);
  const auto pos = r.out.find("statistic=");
  REQUIRE(pos != std::string::npos);
  const double stat = std::stod(r.out.substr(pos + 10));
  CHECK(std::abs(stat - 6.0) <= 1e-10);
  CHECK(r.out.find("reject=1") != std::string::npos);
}

TEST_CASE("errors are one machine-parsable line with distinct statuses") {
  TempDir dir("errors");
  WriteToy(dir);

  Outcome r = Call({"fit", "--bogus"});
  CHECK(r.status == kExitUsage);
  CHECK(r.err.rfind("error: kind=usage message=", 0) == 0);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);

  r = Call({});
  CHECK(r.status == kExitUsage);

  r = Call({"fit", "--features", (dir / "nope.tsv").string(), "--candidates",
            (dir / "s.txt").string(), "--out", (dir / "m").string()});
  CHECK(r.status == kExitIo);
  CHECK(r.err.rfind("error: kind=io message=", 0) == 0);

  WriteText(dir / "bad.tsv", "0\t0\nx\t1\n1\t1\n");
  r = Call({"fit", "--features", (dir / "bad.tsv").string(), "--candidates",
            (dir / "s.txt").string(), "--out", (dir / "m").string()});
  CHECK(r.status == kExitData);
  CHECK(r.err.rfind("error: kind=format message=", 0) == 0);

  r = Call({"fit", "--features", (dir / "x.tsv").string(), "--candidates",
            (dir / "s.txt").string(), "--truth", (dir / "s.txt").string(),
            "--out", (dir / "m").string()});
  CHECK(r.status == kExitData);

  r = Call({"fit", "--features", (dir / "x.tsv").string(), "--candidates",
            (dir / "s.txt").string(), "--K", "7", "--out", (dir / "m").string()});
  CHECK(r.status == kExitUsage);

  r = Call({"fit", "--config", (dir / "missing.cfg").string()});
  CHECK(r.status == kExitIo);
}

TEST_CASE("normalize flag is remembered by the model") {
  TempDir dir("normalize");
  WriteText(dir / "x.tsv", "3\t4\n6\t8\n0\t1\n0\t2\n");
  WriteText(dir / "s.txt", "1\n1\n2\n2\n");
  REQUIRE(Call({"fit", "--features", (dir / "x.tsv").string(), "--candidates",
                (dir / "s.txt").string(), "--normalize", "--K", "1", "--out",
                (dir / "m").string()})
              .status == kExitOk);
  WriteText(dir / "q.tsv", "30\t40\n0\t9\n");
  REQUIRE(Call({"predict", "--model", (dir / "m").string(), "--features",
                (dir / "q.tsv").string(), "--out", (dir / "p.csv").string()})
              .status == kExitOk);
  const auto rows = text::ReadLines(dir / "p.csv");
  CHECK(rows[1].rfind("1,1,1,", 0) == 0);
  CHECK(rows[2].rfind("2,2,", 0) == 0);
}

}  // namespace
}  // namespace sll::cli
