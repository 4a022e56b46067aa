#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hdrank/dataset.hpp"
#include "hdrank/ranking.hpp"

namespace hdrank {

// Kendall rank correlation: (concordant - discordant) / (n(n-1)/2).
// Inputs must be equal-length permutations with n >= 2; ties never occur
// because rank tables are strict permutations.  kendall_tau runs the
// O(n log n) merge count; kendall_tau_bruteforce is the O(n^2) reference
// the tests cross-check against.
double kendall_tau(std::span<const int> a, std::span<const int> b);
double kendall_tau_bruteforce(std::span<const int> a, std::span<const int> b);

struct TauReport {
  std::vector<std::string> task_names;
  std::vector<double> per_task;
  double average = 0.0;
};

// Per-task tau plus the arithmetic mean; tables must agree on task names
// and row count.
TauReport score(const RankTable& pred, const RankTable& truth);

struct BaselineSummary {
  double mean_tau = 0.0;
  double std_empirical = 0.0;
  double std_theoretical = 0.0;  // sqrt(2(2n+5) / (9n(n-1)))
  double band3 = 0.0;            // 3 * std_theoretical
  int trials = 0;
  bool std_defined = false;      // false when trials < 2
};

// Tau of uniformly random permutations against the truth (first task
// column; the distribution does not depend on the column).
BaselineSummary random_baseline(const RankTable& truth, int trials, std::uint64_t seed);

struct SweepRow {
  std::size_t dim = 0;
  double average_tau = 0.0;
  double seconds = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

// Full train -> retrain -> predict -> score pipeline per dimension under
// one item-memory seed; wall time recorded per row.  Dimensions must be
// strictly increasing.
SweepResult dim_sweep(std::span<const std::size_t> dims, const SyntheticBenchmark& bench,
                      Scheme scheme, const TrainConfig& cfg, std::uint64_t hv_seed);

}  // namespace hdrank
