#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hdrank/encoding.hpp"
#include "hdrank/hv.hpp"

namespace hdrank {

// Rank 0 is the best architecture.  Columns are stored per task:
// ranks[t][n] is the rank of architecture n on task t, and every column
// is a permutation of {0..N-1}.
struct RankTable {
  std::vector<std::string> task_names;
  std::vector<std::vector<int>> ranks;  // [task][arch]

  [[nodiscard]] std::size_t n_tasks() const noexcept { return ranks.size(); }
  [[nodiscard]] std::size_t n_archs() const noexcept {
    return ranks.empty() ? 0 : ranks.front().size();
  }
};

// Throws unless every column is a permutation of {0..N-1} and shapes agree.
void validate_rank_table(const RankTable& table);

// Two orientations of the inverse-number rank-to-weight rule:
//  paper_literal  w = mu * (1 - 2/(r+1)) with the raw integer rank r
//  semantic       w = mu * (2/(rh+1) - 1) with rh = 2r/(N-1), so the best
//                 rank maps to +mu, the median to ~0 and the worst to -mu/3
// The two disagree about which end of the ranking gets the large weights;
// semantic is the default and the one the acceptance pipeline uses.
enum class WeightMode { semantic, paper_literal };

WeightMode weight_mode_from_string(const std::string& name);
const char* to_string(WeightMode mode) noexcept;

struct WeightTable {
  std::vector<std::string> task_names;
  std::vector<std::vector<double>> weights;  // [task][arch]
  WeightMode mode = WeightMode::semantic;
  double mu = 1.0;

  [[nodiscard]] std::size_t n_tasks() const noexcept { return weights.size(); }
  [[nodiscard]] std::size_t n_archs() const noexcept {
    return weights.empty() ? 0 : weights.front().size();
  }
};

// Strictly monotone per column in both modes.  Semantic mode requires
// N >= 2 (the normalized rank is undefined for a single row).
WeightTable ranks_to_weights(const RankTable& ranks, double mu, WeightMode mode);

struct TrainConfig {
  double gamma0 = 1.0;           // learning rate of the first epoch
  double mu = 1.0;               // weight scaling factor
  WeightMode weight_mode = WeightMode::semantic;
  int retrain_max_epochs = 10;
  double decay = 0.8;            // per-epoch learning-rate decay
  double stop_threshold = 0.01;  // mean |dw| cutoff
  int threads = 0;               // <= 0: hardware concurrency
};

void validate_train_config(const TrainConfig& cfg);

// One uncapped accumulator vector per task plus the provenance needed to
// reproduce the encoding side (scheme + item-memory seed + config).
struct AssociativeMemory {
  std::vector<std::string> task_names;
  std::vector<Hypervector> task_hvs;
  std::size_t dim = 0;
  Scheme scheme = Scheme::record;
  std::uint64_t master_seed = 0;
  TrainConfig config;
};

// Single-pass weighted bundling: A_t = sum_n gamma0 * w[t][n] * V_n.
// Task vectors are never capped.
AssociativeMemory train(const std::vector<Hypervector>& encoded, const WeightTable& weights,
                        const TrainConfig& cfg);

struct SimilarityTable {
  std::vector<std::string> task_names;
  std::vector<std::vector<double>> sims;  // [task][arch]

  [[nodiscard]] std::size_t n_tasks() const noexcept { return sims.size(); }
  [[nodiscard]] std::size_t n_rows() const noexcept {
    return sims.empty() ? 0 : sims.front().size();
  }
};

// sims[t][m] = cosine(encoded[m], A_t).  Zero-norm operands score 0; the
// number of such rows is reported through zero_norm_count when non-null.
SimilarityTable predict_similarities(const AssociativeMemory& model,
                                     const std::vector<Hypervector>& encoded, int threads = 0,
                                     std::size_t* zero_norm_count = nullptr);

// Encode-then-score in fixed-size chunks, so arbitrarily large
// architecture sets never materialize a full encoding matrix.  Equivalent
// to predict_similarities(model, encode_batch(archs, ...)).
SimilarityTable predict_archs(const AssociativeMemory& model, const ItemMemorySet& mems,
                              std::span<const ArchDescriptor> archs, int threads = 0,
                              std::size_t* zero_norm_count = nullptr);

// Highest similarity receives rank 0; ties break by ascending architecture
// index, so the output is always a valid permutation.
RankTable similarities_to_ranks(const SimilarityTable& sims);

// Mean |w - w_hat| per epoch; entries cover every epoch that computed a
// weight difference, including the final one that fell below the stop
// threshold without being applied.
struct RetrainTrace {
  std::vector<std::vector<double>> per_task;  // [epoch][task]
  std::vector<double> overall;                // [epoch]
  int updates_applied = 0;

  [[nodiscard]] std::size_t epochs() const noexcept { return overall.size(); }
};

// Weight-difference retraining on the training set.  Per epoch e (1-based):
// predict similarities, rank them, convert back to weights w_hat, and add
// gamma0 * decay^(e-1) * (w - w_hat) weighted bundles to each task vector.
// Stops before applying an update whose mean |w - w_hat| is below
// cfg.stop_threshold, or after cfg.retrain_max_epochs updates.
RetrainTrace retrain(AssociativeMemory& model, const std::vector<Hypervector>& encoded,
                     const WeightTable& truth_weights, const TrainConfig& cfg);

}  // namespace hdrank
