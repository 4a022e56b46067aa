#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hdrank/dataset.hpp"
#include "hdrank/ranking.hpp"

namespace hdrank {

// Command entry points used by both the CLI binary and the test suites.
// Every command is deterministic given its options; reruns produce
// byte-identical primary outputs.

struct GenSynthOptions {
  std::string out_dir = ".";
  std::int64_t n_train = 500;
  std::int64_t n_test = 5000;
  int tasks = 8;
  std::uint64_t seed = 1;
  double noise_sigma = 0.0;
  std::string family = "additive_linear";
  bool force = false;
  bool quiet = false;
};

struct TrainOptions {
  std::string arch_csv;
  std::string rank_csv;
  std::string model_out;
  std::size_t dim = 100000;
  std::uint64_t seed = 1;
  std::string scheme = "record";
  std::string weight_mode = "semantic";
  double mu = 1.0;
  double gamma = 1.0;
  double decay = 0.8;
  int retrain_epochs = 10;
  double stop_threshold = 0.01;
  int threads = 0;
  bool no_retrain = false;
  bool quiet = false;
};

struct PredictOptions {
  std::string model_path;
  std::string arch_csv;
  std::string pred_out;
  std::string sims_out;  // empty: skip similarity dump
  int threads = 0;
  bool quiet = false;
};

struct EvalOptions {
  std::string pred_csv;
  std::string truth_csv;
  std::string report_out;  // empty: stdout only
  int baseline_trials = 0;
  std::uint64_t seed = 1;
};

struct SweepOptions {
  std::vector<std::size_t> dims;
  std::int64_t n_train = 500;
  std::int64_t n_test = 5000;
  int tasks = 8;
  std::uint64_t seed = 1;
  double noise_sigma = 0.0;
  std::string family = "additive_linear";
  std::string scheme = "record";
  std::string weight_mode = "semantic";
  double mu = 1.0;
  double gamma = 1.0;
  double decay = 0.8;
  int retrain_epochs = 10;
  double stop_threshold = 0.01;
  int threads = 0;
  std::string table_out;  // empty: stdout only
};

int cmd_gen_synth(const GenSynthOptions& opt);
int cmd_train(const TrainOptions& opt);
int cmd_predict(const PredictOptions& opt);
int cmd_eval(const EvalOptions& opt);
int cmd_sweep(const SweepOptions& opt);

// Shared helpers for the pipeline commands.
std::vector<std::string> default_task_names(int count);
TrainConfig train_config_from(double gamma, double mu, const std::string& weight_mode,
                              int retrain_epochs, double decay, double stop_threshold,
                              int threads);

int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // without argv[0]

}  // namespace hdrank
