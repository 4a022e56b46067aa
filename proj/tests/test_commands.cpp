#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hdrank/commands.hpp"
#include "hdrank/dataset.hpp"
#include "hdrank/error.hpp"
#include "hdrank/metrics.hpp"
#include "hdrank/model_io.hpp"

using namespace hdrank;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "hdrank_cmd_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("the pipeline runs end to end on a small noiseless benchmark") {
  const fs::path dir = fresh_dir("pipeline");

  GenSynthOptions gen;
  gen.out_dir = (dir / "bench").string();
  gen.n_train = 60;
  gen.n_test = 120;
  gen.tasks = 3;
  gen.seed = 7;
  REQUIRE(cmd_gen_synth(gen) == 0);
  for (const char* name :
       {"train_archs.csv", "train_ranks.csv", "test_archs.csv", "test_ranks.csv",
        "manifest.json"}) {
    CHECK(fs::exists(dir / "bench" / name));
  }

  // rerunning without --force refuses, with --force reproduces bytes
  CHECK_THROWS_AS(cmd_gen_synth(gen), Error);
  const std::string before = read_bytes(dir / "bench" / "train_ranks.csv");
  gen.force = true;
  REQUIRE(cmd_gen_synth(gen) == 0);
  CHECK(read_bytes(dir / "bench" / "train_ranks.csv") == before);

  TrainOptions tr;
  tr.arch_csv = (dir / "bench" / "train_archs.csv").string();
  tr.rank_csv = (dir / "bench" / "train_ranks.csv").string();
  tr.model_out = (dir / "model.hdr").string();
  tr.dim = 4096;
  tr.seed = 11;
  tr.quiet = true;
  REQUIRE(cmd_train(tr) == 0);
  REQUIRE(fs::exists(tr.model_out));

  PredictOptions pr;
  pr.model_path = tr.model_out;
  pr.arch_csv = (dir / "bench" / "test_archs.csv").string();
  pr.pred_out = (dir / "pred.csv").string();
  pr.sims_out = (dir / "sims.csv").string();
  pr.quiet = true;
  REQUIRE(cmd_predict(pr) == 0);
  REQUIRE(fs::exists(pr.pred_out));
  REQUIRE(fs::exists(pr.sims_out));

  EvalOptions ev;
  ev.pred_csv = pr.pred_out;
  ev.truth_csv = (dir / "bench" / "test_ranks.csv").string();
  ev.report_out = (dir / "report.csv").string();
  ev.baseline_trials = 20;
  REQUIRE(cmd_eval(ev) == 0);

  // the model should beat a random ranker comfortably on a noiseless benchmark
  const RankCsv pred = load_rank_csv(pr.pred_out);
  const RankCsv truth = load_rank_csv(ev.truth_csv);
  const TauReport report = score(pred.table, truth.table);
  CHECK(report.average > 0.2);

  // self-eval sanity: truth vs truth is all ones
  EvalOptions self;
  self.pred_csv = ev.truth_csv;
  self.truth_csv = ev.truth_csv;
  REQUIRE(cmd_eval(self) == 0);
}

TEST_CASE("train and predict are byte-deterministic across reruns") {
  const fs::path dir = fresh_dir("determinism");
  GenSynthOptions gen;
  gen.out_dir = (dir / "bench").string();
  gen.n_train = 40;
  gen.n_test = 50;
  gen.tasks = 2;
  gen.seed = 21;
  REQUIRE(cmd_gen_synth(gen) == 0);

  auto run = [&](const std::string& tag) {
    TrainOptions tr;
    tr.arch_csv = (dir / "bench" / "train_archs.csv").string();
    tr.rank_csv = (dir / "bench" / "train_ranks.csv").string();
    tr.model_out = (dir / ("model_" + tag + ".hdr")).string();
    tr.dim = 2048;
    tr.seed = 5;
    tr.quiet = true;
    REQUIRE(cmd_train(tr) == 0);
    PredictOptions pr;
    pr.model_path = tr.model_out;
    pr.arch_csv = (dir / "bench" / "test_archs.csv").string();
    pr.pred_out = (dir / ("pred_" + tag + ".csv")).string();
    pr.quiet = true;
    REQUIRE(cmd_predict(pr) == 0);
  };
  run("one");
  run("two");
  CHECK(read_bytes(dir / "model_one.hdr") == read_bytes(dir / "model_two.hdr"));
  CHECK(read_bytes(dir / "pred_one.csv") == read_bytes(dir / "pred_two.csv"));
}

TEST_CASE("retrain-epochs 0 equals plain single-pass training") {
  const fs::path dir = fresh_dir("noretrain");
  GenSynthOptions gen;
  gen.out_dir = (dir / "bench").string();
  gen.n_train = 30;
  gen.n_test = 10;
  gen.tasks = 2;
  gen.seed = 31;
  REQUIRE(cmd_gen_synth(gen) == 0);

  TrainOptions base;
  base.arch_csv = (dir / "bench" / "train_archs.csv").string();
  base.rank_csv = (dir / "bench" / "train_ranks.csv").string();
  base.dim = 1024;
  base.seed = 3;
  base.quiet = true;

  TrainOptions zero = base;
  zero.model_out = (dir / "zero.hdr").string();
  zero.retrain_epochs = 0;
  REQUIRE(cmd_train(zero) == 0);

  TrainOptions flagged = base;
  flagged.model_out = (dir / "flagged.hdr").string();
  flagged.no_retrain = true;
  REQUIRE(cmd_train(flagged) == 0);

  const AssociativeMemory a = load_model(zero.model_out);
  const AssociativeMemory b = load_model(flagged.model_out);
  CHECK(a.task_hvs == b.task_hvs);

  TrainOptions retrained = base;
  retrained.model_out = (dir / "retrained.hdr").string();
  REQUIRE(cmd_train(retrained) == 0);
  CHECK(load_model(retrained.model_out).task_hvs != a.task_hvs);
}

TEST_CASE("predicting an empty architecture file yields a header-only output") {
  const fs::path dir = fresh_dir("empty-predict");
  GenSynthOptions gen;
  gen.out_dir = (dir / "bench").string();
  gen.n_train = 20;
  gen.n_test = 5;
  gen.tasks = 2;
  gen.seed = 41;
  REQUIRE(cmd_gen_synth(gen) == 0);
  TrainOptions tr;
  tr.arch_csv = (dir / "bench" / "train_archs.csv").string();
  tr.rank_csv = (dir / "bench" / "train_ranks.csv").string();
  tr.model_out = (dir / "model.hdr").string();
  tr.dim = 256;
  tr.quiet = true;
  REQUIRE(cmd_train(tr) == 0);

  const fs::path empty_archs = dir / "empty.csv";
  {
    ArchTable none;
    write_arch_csv(empty_archs, none);
  }
  PredictOptions pr;
  pr.model_path = tr.model_out;
  pr.arch_csv = empty_archs.string();
  pr.pred_out = (dir / "pred.csv").string();
  pr.quiet = true;
  REQUIRE(cmd_predict(pr) == 0);
  std::ifstream in(pr.pred_out);
  std::string line;
  CHECK(std::getline(in, line));
  CHECK(line == "arch_id,task_1,task_2");
  CHECK_FALSE(std::getline(in, line));
}

TEST_CASE("the cli surfaces machine-parsable failures") {
  const fs::path dir = fresh_dir("cli-errors");
  // gen-synth with n_train = 1 violates the N >= 2 precondition
  CHECK(run_cli({"gen-synth", "--out-dir", (dir / "x").string(), "--n-train", "1"}) == 1);
  // unknown subcommand is a usage error
  CHECK(run_cli({"frobnicate"}) == 2);
  // missing required flags
  CHECK(run_cli({"train"}) == 2);
  // mismatched ids between archs and ranks
  GenSynthOptions gen;
  gen.out_dir = (dir / "bench").string();
  gen.n_train = 10;
  gen.n_test = 4;
  gen.tasks = 1;
  gen.seed = 3;
  REQUIRE(cmd_gen_synth(gen) == 0);
  CHECK(run_cli({"train", "--archs", (dir / "bench" / "train_archs.csv").string(), "--ranks",
                 (dir / "bench" / "test_ranks.csv").string(), "--out",
                 (dir / "m.hdr").string(), "--dim", "64"}) == 1);
}

TEST_CASE("sweep emits one row per dimension through the cli") {
  const fs::path dir = fresh_dir("sweep");
  const fs::path table = dir / "sweep.csv";
  REQUIRE(run_cli({"sweep", "--dims", "64,256", "--n-train", "30", "--n-test", "40", "--tasks",
                   "2", "--seed", "9", "--retrain-epochs", "2", "--out", table.string()}) == 0);
  std::ifstream in(table);
  std::string line;
  CHECK(std::getline(in, line));
  CHECK(line == "dim,average_tau,seconds");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 2);
}
