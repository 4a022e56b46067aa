#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hdrank/arch.hpp"
#include "hdrank/ranking.hpp"

namespace hdrank {

// --- CSV formats -----------------------------------------------------------
//
// Architectures: header `arch_id,depth,head_1..head_12,mlp_1..mlp_12`;
// layers beyond `depth` are zero-padded and must be zero.
//
// Ranks: header `arch_id,<task_1>,...,<task_T>`; every task column is a
// permutation of {0..N-1} and arch_ids align with the architecture file.
//
// UTF-8, comma separated, no quoting (all fields are identifiers or
// integers).

ArchTable load_arch_csv(const std::filesystem::path& path);
void write_arch_csv(const std::filesystem::path& path, const ArchTable& table);

struct RankCsv {
  std::vector<std::string> arch_ids;
  RankTable table;
};

RankCsv load_rank_csv(const std::filesystem::path& path,
                      std::optional<std::size_t> expected_n = std::nullopt);

// Inverse of load_rank_csv: a written file reloads to an equal table.
void write_pred_csv(const std::filesystem::path& path, std::span<const std::string> arch_ids,
                    const RankTable& table);

// --- Synthetic benchmark ----------------------------------------------------

enum class ScoringFamily { additive_linear, quadratic_interaction };

ScoringFamily scoring_family_from_string(const std::string& name);
const char* to_string(ScoringFamily family) noexcept;

struct BenchmarkSpec {
  std::int64_t n_train = 500;
  std::int64_t n_test = 99500;
  std::vector<std::string> task_names;
  std::uint64_t seed = 1;
  double noise_sigma = 0.0;
  ScoringFamily family = ScoringFamily::additive_linear;
};

// Ground-truth scorer behind a generated benchmark.  Per task one
// coefficient per (layer position, parameter, code) one-hot feature,
// plus per-layer head x mlp interaction terms for the quadratic family.
// Deterministic in (seed, task count, family).
class HiddenScorer {
 public:
  HiddenScorer() = default;

  static HiddenScorer make(std::uint64_t seed, std::size_t n_tasks, ScoringFamily family,
                           double noise_sigma);

  // Noiseless true score of `arch` on task t; larger is better.
  [[nodiscard]] double score(const ArchDescriptor& arch, std::size_t task) const;

  [[nodiscard]] std::size_t n_tasks() const noexcept { return linear_.size(); }
  [[nodiscard]] ScoringFamily family() const noexcept { return family_; }
  [[nodiscard]] double noise_sigma() const noexcept { return noise_sigma_; }

 private:
  // linear_[t][pos*6 + param*3 + (code-1)], param 0 = head, 1 = mlp
  std::vector<std::vector<double>> linear_;
  // quad_[t][pos*9 + (h-1)*3 + (m-1)]
  std::vector<std::vector<double>> quad_;
  ScoringFamily family_ = ScoringFamily::additive_linear;
  double noise_sigma_ = 0.0;
};

struct SyntheticBenchmark {
  ArchTable train_archs;
  RankTable train_ranks;
  ArchTable test_archs;
  RankTable test_ranks;
  HiddenScorer scorer;
  BenchmarkSpec spec;
};

// Uniform architecture sampling without duplicates across train+test;
// per-task ranks follow descending (score + noise), ties broken by index.
// Fully reproducible from spec.seed.
SyntheticBenchmark gen_synthetic(const BenchmarkSpec& spec);

// Capacity of the search space: 9^10 + 9^11 + 9^12 distinct architectures.
std::int64_t search_space_size() noexcept;

}  // namespace hdrank
