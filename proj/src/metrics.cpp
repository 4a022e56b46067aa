#include "hdrank/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "hdrank/error.hpp"
#include "hdrank/rng.hpp"

namespace hdrank {

namespace {

void require_rank_pair(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size())
    fail(ErrorCategory::domain, "kendall_tau: length mismatch (" + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()) + ")");
  if (a.size() < 2) fail(ErrorCategory::domain, "kendall_tau: need at least 2 elements");
  const std::size_t n = a.size();
  std::vector<char> seen(n);
  for (auto side : {a, b}) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int r : side) {
      if (r < 0 || static_cast<std::size_t>(r) >= n || seen[static_cast<std::size_t>(r)]++)
        fail(ErrorCategory::domain, "kendall_tau: input is not a permutation of 0..n-1");
    }
  }
}

// Inversions in seq via bottom-up merge sort.
std::uint64_t count_inversions(std::vector<int>& seq) {
  const std::size_t n = seq.size();
  std::vector<int> buf(n);
  std::uint64_t inversions = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
      const std::size_t mid = lo + width;
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (seq[i] <= seq[j]) {
          buf[k++] = seq[i++];
        } else {
          inversions += mid - i;  // seq[i..mid) all exceed seq[j]
          buf[k++] = seq[j++];
        }
      }
      while (i < mid) buf[k++] = seq[i++];
      while (j < hi) buf[k++] = seq[j++];
      std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                buf.begin() + static_cast<std::ptrdiff_t>(hi),
                seq.begin() + static_cast<std::ptrdiff_t>(lo));
    }
  }
  return inversions;
}

}  // namespace

double kendall_tau(std::span<const int> a, std::span<const int> b) {
  require_rank_pair(a, b);
  const std::size_t n = a.size();
  // Order items by rank in a, then discordant pairs are exactly the
  // inversions of the induced b sequence.
  std::vector<int> b_by_a(n);
  for (std::size_t i = 0; i < n; ++i) b_by_a[static_cast<std::size_t>(a[i])] = b[i];
  const std::uint64_t discordant = count_inversions(b_by_a);
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  return (static_cast<double>(total) - 2.0 * static_cast<double>(discordant)) /
         static_cast<double>(total);
}

double kendall_tau_bruteforce(std::span<const int> a, std::span<const int> b) {
  require_rank_pair(a, b);
  const std::size_t n = a.size();
  std::int64_t concordant = 0, discordant = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int da = a[i] - a[j];
      const int db = b[i] - b[j];
      if ((da < 0 && db < 0) || (da > 0 && db > 0))
        ++concordant;
      else
        ++discordant;
    }
  }
  const auto total = static_cast<double>(n * (n - 1) / 2);
  return (static_cast<double>(concordant) - static_cast<double>(discordant)) / total;
}

TauReport score(const RankTable& pred, const RankTable& truth) {
  if (pred.task_names != truth.task_names)
    fail(ErrorCategory::domain, "score: task names do not match");
  if (pred.n_archs() != truth.n_archs())
    fail(ErrorCategory::domain, "score: tables rank different architecture counts (" +
                                    std::to_string(pred.n_archs()) + " vs " +
                                    std::to_string(truth.n_archs()) + ")");
  TauReport report;
  report.task_names = truth.task_names;
  report.per_task.resize(truth.n_tasks());
  for (std::size_t t = 0; t < truth.n_tasks(); ++t) {
    report.per_task[t] = kendall_tau(pred.ranks[t], truth.ranks[t]);
  }
  report.average =
      std::accumulate(report.per_task.begin(), report.per_task.end(), 0.0) /
      static_cast<double>(report.per_task.size());
  return report;
}

BaselineSummary random_baseline(const RankTable& truth, int trials, std::uint64_t seed) {
  if (trials < 1) fail(ErrorCategory::config, "baseline trials must be >= 1");
  validate_rank_table(truth);
  const std::size_t n = truth.n_archs();
  if (n < 2) fail(ErrorCategory::domain, "baseline requires at least 2 architectures");
  const auto& reference = truth.ranks.front();

  DetRng rng(seed, "random-baseline");
  std::vector<int> perm(n);
  std::vector<double> taus(static_cast<std::size_t>(trials));
  for (int trial = 0; trial < trials; ++trial) {
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.next_below(i + 1));
      std::swap(perm[i], perm[j]);
    }
    taus[static_cast<std::size_t>(trial)] = kendall_tau(perm, reference);
  }

  BaselineSummary summary;
  summary.trials = trials;
  summary.mean_tau = std::accumulate(taus.begin(), taus.end(), 0.0) / taus.size();
  if (trials >= 2) {
    double ss = 0.0;
    for (double tau : taus) ss += (tau - summary.mean_tau) * (tau - summary.mean_tau);
    summary.std_empirical = std::sqrt(ss / static_cast<double>(trials - 1));
    summary.std_defined = true;
  }
  const auto nd = static_cast<double>(n);
  summary.std_theoretical = std::sqrt(2.0 * (2.0 * nd + 5.0) / (9.0 * nd * (nd - 1.0)));
  summary.band3 = 3.0 * summary.std_theoretical;
  return summary;
}

SweepResult dim_sweep(std::span<const std::size_t> dims, const SyntheticBenchmark& bench,
                      Scheme scheme, const TrainConfig& cfg, std::uint64_t hv_seed) {
  if (dims.empty()) fail(ErrorCategory::config, "dimension list must not be empty");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] == 0) fail(ErrorCategory::config, "dimensions must be >= 1");
    if (i > 0 && dims[i] <= dims[i - 1])
      fail(ErrorCategory::config, "dimensions must be strictly increasing");
  }
  validate_train_config(cfg);

  SweepResult result;
  const WeightTable truth_weights =
      ranks_to_weights(bench.train_ranks, cfg.mu, cfg.weight_mode);
  for (std::size_t dim : dims) {
    const auto start = std::chrono::steady_clock::now();
    const ItemMemorySet mems = build_item_memories(hv_seed, dim);
    const std::vector<Hypervector> train_hvs =
        encode_batch(bench.train_archs.archs, mems, scheme, cfg.threads);
    AssociativeMemory model = train(train_hvs, truth_weights, cfg);
    model.scheme = scheme;
    model.master_seed = hv_seed;
    if (cfg.retrain_max_epochs > 0) retrain(model, train_hvs, truth_weights, cfg);

    const SimilarityTable sims =
        predict_archs(model, mems, bench.test_archs.archs, cfg.threads);
    const RankTable predicted = similarities_to_ranks(sims);
    const TauReport report = score(predicted, bench.test_ranks);
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
    result.rows.push_back(SweepRow{dim, report.average, elapsed.count()});
  }
  return result;
}

}  // namespace hdrank
