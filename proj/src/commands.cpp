#include "hdrank/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <span>

#include <CLI11.hpp>
#include <json.hpp>

#include "hdrank/encoding.hpp"
#include "hdrank/error.hpp"
#include "hdrank/metrics.hpp"
#include "hdrank/model_io.hpp"

namespace hdrank {

namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void require_absent(const fs::path& path, bool force) {
  if (!force && fs::exists(path))
    fail(ErrorCategory::io, path.string() + " already exists (use --force to overwrite)");
}

void require_aligned_ids(const std::vector<std::string>& arch_ids,
                         const std::vector<std::string>& rank_ids, const std::string& what) {
  if (arch_ids.size() != rank_ids.size())
    fail(ErrorCategory::format, what + ": architecture and rank files list different counts (" +
                                    std::to_string(arch_ids.size()) + " vs " +
                                    std::to_string(rank_ids.size()) + ")");
  for (std::size_t i = 0; i < arch_ids.size(); ++i) {
    if (arch_ids[i] != rank_ids[i])
      fail(ErrorCategory::format, what + ": arch_id mismatch at row " + std::to_string(i + 1) +
                                      " ('" + arch_ids[i] + "' vs '" + rank_ids[i] + "')");
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_sims_csv(const fs::path& path, const std::vector<std::string>& ids,
                    const SimilarityTable& sims) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCategory::io, "cannot write " + path.string());
  out << "arch_id";
  for (const auto& name : sims.task_names) out << ',' << name;
  out << '\n';
  for (std::size_t m = 0; m < ids.size(); ++m) {
    out << ids[m];
    for (std::size_t t = 0; t < sims.n_tasks(); ++t) out << ',' << format_double(sims.sims[t][m]);
    out << '\n';
  }
  if (!out) fail(ErrorCategory::io, "write failed: " + path.string());
}

}  // namespace

std::vector<std::string> default_task_names(int count) {
  if (count < 1) fail(ErrorCategory::config, "task count must be >= 1");
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(count));
  for (int t = 1; t <= count; ++t) names.push_back("task_" + std::to_string(t));
  return names;
}

TrainConfig train_config_from(double gamma, double mu, const std::string& weight_mode,
                              int retrain_epochs, double decay, double stop_threshold,
                              int threads) {
  TrainConfig cfg;
  cfg.gamma0 = gamma;
  cfg.mu = mu;
  cfg.weight_mode = weight_mode_from_string(weight_mode);
  cfg.retrain_max_epochs = retrain_epochs;
  cfg.decay = decay;
  cfg.stop_threshold = stop_threshold;
  cfg.threads = threads;
  validate_train_config(cfg);
  return cfg;
}

int cmd_gen_synth(const GenSynthOptions& opt) {
  BenchmarkSpec spec;
  spec.n_train = opt.n_train;
  spec.n_test = opt.n_test;
  spec.task_names = default_task_names(opt.tasks);
  spec.seed = opt.seed;
  spec.noise_sigma = opt.noise_sigma;
  spec.family = scoring_family_from_string(opt.family);

  const fs::path dir(opt.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path train_archs = dir / "train_archs.csv";
  const fs::path train_ranks = dir / "train_ranks.csv";
  const fs::path test_archs = dir / "test_archs.csv";
  const fs::path test_ranks = dir / "test_ranks.csv";
  const fs::path manifest_path = dir / "manifest.json";
  for (const auto& p : {train_archs, train_ranks, test_archs, test_ranks, manifest_path})
    require_absent(p, opt.force);

  const SyntheticBenchmark bench = gen_synthetic(spec);
  write_arch_csv(train_archs, bench.train_archs);
  write_pred_csv(train_ranks, bench.train_archs.ids, bench.train_ranks);
  write_arch_csv(test_archs, bench.test_archs);
  write_pred_csv(test_ranks, bench.test_archs.ids, bench.test_ranks);

  nlohmann::ordered_json manifest;
  manifest["format"] = "hdrank-benchmark-manifest";
  manifest["version"] = 1;
  manifest["seed"] = spec.seed;
  manifest["n_train"] = spec.n_train;
  manifest["n_test"] = spec.n_test;
  manifest["tasks"] = spec.task_names;
  manifest["noise_sigma"] = spec.noise_sigma;
  manifest["scoring_family"] = to_string(spec.family);
  manifest["files"] = {{"train_archs", train_archs.filename().string()},
                       {"train_ranks", train_ranks.filename().string()},
                       {"test_archs", test_archs.filename().string()},
                       {"test_ranks", test_ranks.filename().string()}};
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) fail(ErrorCategory::io, "cannot write " + manifest_path.string());
  out << manifest.dump(2) << '\n';
  if (!out) fail(ErrorCategory::io, "write failed: " + manifest_path.string());

  if (!opt.quiet) {
    std::cout << "benchmark written to " << dir.string() << " (" << spec.n_train << " train, "
              << spec.n_test << " test, " << spec.task_names.size() << " tasks)\n";
  }
  return 0;
}

int cmd_train(const TrainOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  const TrainConfig cfg =
      train_config_from(opt.gamma, opt.mu, opt.weight_mode,
                        opt.no_retrain ? 0 : opt.retrain_epochs, opt.decay, opt.stop_threshold,
                        opt.threads);
  const Scheme scheme = scheme_from_string(opt.scheme);
  if (opt.dim == 0) fail(ErrorCategory::config, "--dim must be >= 1");

  const ArchTable archs = load_arch_csv(opt.arch_csv);
  const RankCsv ranks = load_rank_csv(opt.rank_csv, archs.size());
  require_aligned_ids(archs.ids, ranks.arch_ids, "train inputs");
  if (archs.size() == 0) fail(ErrorCategory::domain, "training set is empty");

  const ItemMemorySet mems = build_item_memories(opt.seed, opt.dim);
  const std::vector<Hypervector> encoded =
      encode_batch(archs.archs, mems, scheme, cfg.threads);
  const WeightTable weights = ranks_to_weights(ranks.table, cfg.mu, cfg.weight_mode);

  AssociativeMemory model = train(encoded, weights, cfg);
  model.scheme = scheme;
  model.master_seed = opt.seed;

  if (cfg.retrain_max_epochs > 0) {
    const RetrainTrace trace = retrain(model, encoded, weights, cfg);
    if (!opt.quiet) {
      for (std::size_t e = 0; e < trace.epochs(); ++e) {
        std::printf("epoch %zu: mean |dw| = %.6f\n", e + 1, trace.overall[e]);
      }
      std::printf("retraining applied %d update(s)\n", trace.updates_applied);
    }
  }

  save_model(opt.model_out, model);
  if (!opt.quiet) {
    std::printf("model written to %s (%zu tasks, dim %zu, scheme %s) in %.2f s\n",
                opt.model_out.c_str(), model.task_names.size(), model.dim,
                to_string(model.scheme), seconds_since(start));
  }
  return 0;
}

int cmd_predict(const PredictOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  const AssociativeMemory model = load_model(opt.model_path);
  const ArchTable archs = load_arch_csv(opt.arch_csv);
  const ItemMemorySet mems = build_item_memories(model.master_seed, model.dim);

  // predict_archs streams fixed-size chunks, so the 100K-architecture
  // case never materializes the full encoded matrix.
  std::size_t zero_norms = 0;
  SimilarityTable sims;
  try {
    sims = predict_archs(model, mems, archs.archs, opt.threads, &zero_norms);
  } catch (const Error& e) {
    fail(e.category(), opt.arch_csv + ": " + e.what());
  }
  if (zero_norms > 0)
    std::cerr << "warning: " << zero_norms << " zero-norm similarity entries reported as 0\n";

  const RankTable predicted = similarities_to_ranks(sims);
  write_pred_csv(opt.pred_out, archs.ids, predicted);
  if (!opt.sims_out.empty()) write_sims_csv(opt.sims_out, archs.ids, sims);
  if (!opt.quiet) {
    std::printf("ranked %zu architectures on %zu tasks in %.2f s -> %s\n", archs.size(),
                model.task_names.size(), seconds_since(start), opt.pred_out.c_str());
  }
  return 0;
}

int cmd_eval(const EvalOptions& opt) {
  const RankCsv pred = load_rank_csv(opt.pred_csv);
  const RankCsv truth = load_rank_csv(opt.truth_csv);
  require_aligned_ids(pred.arch_ids, truth.arch_ids, "eval inputs");
  const TauReport report = score(pred.table, truth.table);

  // average leads, per-task columns follow
  std::printf("%-24s %10s\n", "task", "tau");
  std::printf("%-24s %10.4f\n", "average", report.average);
  for (std::size_t t = 0; t < report.task_names.size(); ++t)
    std::printf("%-24s %10.4f\n", report.task_names[t].c_str(), report.per_task[t]);

  if (opt.baseline_trials > 0) {
    const BaselineSummary base = random_baseline(truth.table, opt.baseline_trials, opt.seed);
    std::printf("random baseline over %d trial(s): mean tau = %.5f", base.trials, base.mean_tau);
    if (base.std_defined)
      std::printf(", empirical std = %.5f", base.std_empirical);
    else
      std::printf(", empirical std undefined");
    std::printf(", 3-sigma band = %.5f\n", base.band3);
  }

  if (!opt.report_out.empty()) {
    std::ofstream out(opt.report_out, std::ios::binary);
    if (!out) fail(ErrorCategory::io, "cannot write " + opt.report_out);
    out << "task,tau\n";
    out << "average," << format_double(report.average) << '\n';
    for (std::size_t t = 0; t < report.task_names.size(); ++t)
      out << report.task_names[t] << ',' << format_double(report.per_task[t]) << '\n';
    if (!out) fail(ErrorCategory::io, "write failed: " + opt.report_out);
  }
  return 0;
}

int cmd_sweep(const SweepOptions& opt) {
  BenchmarkSpec spec;
  spec.n_train = opt.n_train;
  spec.n_test = opt.n_test;
  spec.task_names = default_task_names(opt.tasks);
  spec.seed = opt.seed;
  spec.noise_sigma = opt.noise_sigma;
  spec.family = scoring_family_from_string(opt.family);
  const TrainConfig cfg = train_config_from(opt.gamma, opt.mu, opt.weight_mode,
                                            opt.retrain_epochs, opt.decay, opt.stop_threshold,
                                            opt.threads);
  const Scheme scheme = scheme_from_string(opt.scheme);

  const SyntheticBenchmark bench = gen_synthetic(spec);
  const SweepResult result = dim_sweep(opt.dims, bench, scheme, cfg, opt.seed);

  std::printf("%12s %12s %12s\n", "dim", "avg_tau", "seconds");
  for (const auto& row : result.rows)
    std::printf("%12zu %12.4f %12.2f\n", row.dim, row.average_tau, row.seconds);

  if (!opt.table_out.empty()) {
    std::ofstream out(opt.table_out, std::ios::binary);
    if (!out) fail(ErrorCategory::io, "cannot write " + opt.table_out);
    out << "dim,average_tau,seconds\n";
    for (const auto& row : result.rows)
      out << row.dim << ',' << format_double(row.average_tau) << ','
          << format_double(row.seconds) << '\n';
    if (!out) fail(ErrorCategory::io, "write failed: " + opt.table_out);
  }
  return 0;
}

namespace {

void add_train_config_flags(CLI::App* cmd, std::string& weight_mode, double& mu, double& gamma,
                            double& decay, int& retrain_epochs, double& stop_threshold,
                            int& threads) {
  cmd->add_option("--weight-mode", weight_mode, "Rank-to-weight mode: semantic|paper-literal")
      ->capture_default_str();
  cmd->add_option("--mu", mu, "Weight scaling factor")->capture_default_str();
  cmd->add_option("--gamma", gamma, "Learning rate of the first epoch")->capture_default_str();
  cmd->add_option("--decay", decay, "Per-epoch learning-rate decay")->capture_default_str();
  cmd->add_option("--retrain-epochs", retrain_epochs, "Maximum retraining epochs (0 disables)")
      ->capture_default_str();
  cmd->add_option("--stop-threshold", stop_threshold, "Mean |dw| retraining cutoff")
      ->capture_default_str();
  cmd->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)")
      ->capture_default_str();
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Hyperdimensional surrogate for ranking transformer architectures"};
  app.require_subcommand(1);
  int exit_code = 0;

  GenSynthOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-synth", "Generate a synthetic benchmark");
  gen_cmd->add_option("--out-dir", gen.out_dir, "Output directory")->capture_default_str();
  gen_cmd->add_option("--n-train", gen.n_train, "Training set size")->capture_default_str();
  gen_cmd->add_option("--n-test", gen.n_test, "Test set size")->capture_default_str();
  gen_cmd->add_option("--tasks", gen.tasks, "Number of tasks")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Benchmark seed")->capture_default_str();
  gen_cmd->add_option("--noise-sigma", gen.noise_sigma, "Gaussian score noise")
      ->capture_default_str();
  gen_cmd->add_option("--family", gen.family,
                      "Scoring family: additive_linear|quadratic_interaction")
      ->capture_default_str();
  gen_cmd->add_flag("--force", gen.force, "Overwrite existing output files");
  gen_cmd->add_flag("--quiet", gen.quiet, "Suppress progress output");
  gen_cmd->callback([&] { exit_code = cmd_gen_synth(gen); });

  TrainOptions tr;
  auto* train_cmd = app.add_subcommand("train", "Train a ranking model from labeled archs");
  train_cmd->add_option("--archs", tr.arch_csv, "Architecture CSV")->required();
  train_cmd->add_option("--ranks", tr.rank_csv, "Rank CSV")->required();
  train_cmd->add_option("--out", tr.model_out, "Model output path")->required();
  train_cmd->add_option("--dim", tr.dim, "Hypervector dimension")->capture_default_str();
  train_cmd->add_option("--seed", tr.seed, "Item-memory seed")->capture_default_str();
  train_cmd->add_option("--scheme", tr.scheme, "Encoding scheme: gram|record")
      ->capture_default_str();
  add_train_config_flags(train_cmd, tr.weight_mode, tr.mu, tr.gamma, tr.decay, tr.retrain_epochs,
                         tr.stop_threshold, tr.threads);
  train_cmd->add_flag("--no-retrain", tr.no_retrain, "Skip retraining");
  train_cmd->add_flag("--quiet", tr.quiet, "Suppress progress output");
  train_cmd->callback([&] { exit_code = cmd_train(tr); });

  PredictOptions pr;
  auto* pred_cmd = app.add_subcommand("predict", "Rank architectures with a trained model");
  pred_cmd->add_option("--model", pr.model_path, "Model file")->required();
  pred_cmd->add_option("--archs", pr.arch_csv, "Architecture CSV")->required();
  pred_cmd->add_option("--out", pr.pred_out, "Predicted-rank CSV output")->required();
  pred_cmd->add_option("--emit-sims", pr.sims_out, "Also write the raw similarity table");
  pred_cmd->add_option("--threads", pr.threads, "Worker threads (0 = hardware concurrency)")
      ->capture_default_str();
  pred_cmd->add_flag("--quiet", pr.quiet, "Suppress progress output");
  pred_cmd->callback([&] { exit_code = cmd_predict(pr); });

  EvalOptions ev;
  auto* eval_cmd = app.add_subcommand("eval", "Score predicted ranks against ground truth");
  eval_cmd->add_option("--pred", ev.pred_csv, "Predicted-rank CSV")->required();
  eval_cmd->add_option("--truth", ev.truth_csv, "Ground-truth rank CSV")->required();
  eval_cmd->add_option("--out", ev.report_out, "Machine-readable report output (task,tau rows)");
  eval_cmd->add_option("--baseline-trials", ev.baseline_trials,
                       "Random-ranker trials for the significance band")
      ->capture_default_str();
  eval_cmd->add_option("--seed", ev.seed, "Baseline seed")->capture_default_str();
  eval_cmd->callback([&] { exit_code = cmd_eval(ev); });

  SweepOptions sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Dimension sweep on a synthetic benchmark");
  sweep_cmd->add_option("--dims", sw.dims, "Strictly increasing dimension list")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--n-train", sw.n_train, "Training set size")->capture_default_str();
  sweep_cmd->add_option("--n-test", sw.n_test, "Test set size")->capture_default_str();
  sweep_cmd->add_option("--tasks", sw.tasks, "Number of tasks")->capture_default_str();
  sweep_cmd->add_option("--seed", sw.seed, "Benchmark and item-memory seed")
      ->capture_default_str();
  sweep_cmd->add_option("--noise-sigma", sw.noise_sigma, "Gaussian score noise")
      ->capture_default_str();
  sweep_cmd->add_option("--family", sw.family,
                        "Scoring family: additive_linear|quadratic_interaction")
      ->capture_default_str();
  sweep_cmd->add_option("--scheme", sw.scheme, "Encoding scheme: gram|record")
      ->capture_default_str();
  add_train_config_flags(sweep_cmd, sw.weight_mode, sw.mu, sw.gamma, sw.decay, sw.retrain_epochs,
                         sw.stop_threshold, sw.threads);
  sweep_cmd->add_option("--out", sw.table_out, "Sweep table CSV output");
  sweep_cmd->callback([&] { exit_code = cmd_sweep(sw); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error:usage: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error:" << to_string(e.category()) << ": " << e.what() << "\n";
    return e.category() == ErrorCategory::usage ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error:internal: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("hdrank");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace hdrank
