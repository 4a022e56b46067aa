#include "hdrank/ranking.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

#include "hdrank/error.hpp"
#include "hdrank/parallel.hpp"

namespace hdrank {

WeightMode weight_mode_from_string(const std::string& name) {
  if (name == "semantic") return WeightMode::semantic;
  if (name == "paper-literal" || name == "paper_literal") return WeightMode::paper_literal;
  fail(ErrorCategory::usage,
       "unknown weight mode '" + name + "' (expected semantic|paper-literal)");
}

const char* to_string(WeightMode mode) noexcept {
  return mode == WeightMode::semantic ? "semantic" : "paper-literal";
}

void validate_rank_table(const RankTable& table) {
  if (table.task_names.size() != table.ranks.size())
    fail(ErrorCategory::internal, "rank table: task name/column count mismatch");
  const std::size_t n = table.n_archs();
  std::vector<char> seen(n);
  for (std::size_t t = 0; t < table.ranks.size(); ++t) {
    const auto& col = table.ranks[t];
    if (col.size() != n)
      fail(ErrorCategory::format, "rank table: ragged column for task " + table.task_names[t]);
    std::fill(seen.begin(), seen.end(), 0);
    for (int r : col) {
      if (r < 0 || static_cast<std::size_t>(r) >= n)
        fail(ErrorCategory::format, "rank " + std::to_string(r) + " out of range in task " +
                                        table.task_names[t]);
      if (seen[static_cast<std::size_t>(r)]++)
        fail(ErrorCategory::format, "duplicate rank " + std::to_string(r) + " in task " +
                                        table.task_names[t]);
    }
  }
}

namespace {

double weight_of_rank(int rank, std::size_t n, double mu, WeightMode mode) {
  if (mode == WeightMode::paper_literal) {
    return mu * (1.0 - 2.0 / (static_cast<double>(rank) + 1.0));
  }
  const double rh = 2.0 * static_cast<double>(rank) / (static_cast<double>(n) - 1.0);
  return mu * (2.0 / (rh + 1.0) - 1.0);
}

}  // namespace

WeightTable ranks_to_weights(const RankTable& ranks, double mu, WeightMode mode) {
  validate_rank_table(ranks);
  const std::size_t n = ranks.n_archs();
  if (mode == WeightMode::semantic && n < 2)
    fail(ErrorCategory::config, "semantic weight mode requires at least 2 architectures");
  WeightTable out;
  out.task_names = ranks.task_names;
  out.mode = mode;
  out.mu = mu;
  out.weights.resize(ranks.n_tasks());
  for (std::size_t t = 0; t < ranks.n_tasks(); ++t) {
    out.weights[t].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      out.weights[t][i] = weight_of_rank(ranks.ranks[t][i], n, mu, mode);
    }
  }
  return out;
}

void validate_train_config(const TrainConfig& cfg) {
  if (!(cfg.gamma0 > 0.0)) fail(ErrorCategory::config, "gamma must be > 0");
  if (!(cfg.decay > 0.0) || cfg.decay > 1.0)
    fail(ErrorCategory::config, "decay must be in (0, 1]");
  if (cfg.stop_threshold < 0.0) fail(ErrorCategory::config, "stop threshold must be >= 0");
  if (cfg.retrain_max_epochs < 0)
    fail(ErrorCategory::config, "retrain epoch count must be >= 0");
}

namespace {

void require_consistent(const std::vector<Hypervector>& encoded, std::size_t expected_rows,
                        const char* op) {
  if (encoded.size() != expected_rows)
    fail(ErrorCategory::domain, std::string(op) + ": " + std::to_string(encoded.size()) +
                                    " encoded vectors for " + std::to_string(expected_rows) +
                                    " weight rows");
  for (std::size_t i = 1; i < encoded.size(); ++i) {
    if (encoded[i].dim() != encoded.front().dim())
      fail(ErrorCategory::domain, std::string(op) + ": inconsistent encoded dimensions");
  }
}

// A_t += scale * sum_n w[t][n] * V_n for every task at once.  Blocked over
// the dimension so each encoded vector streams through once per call while
// the per-task accumulator blocks stay cached.  Every element accumulates
// in fixed n order, so the result is identical for any thread count or
// block size.
void accumulate_weighted(std::vector<Hypervector>& task_hvs,
                         const std::vector<std::vector<double>>& w, double scale,
                         const std::vector<Hypervector>& encoded, int threads) {
  if (encoded.empty()) return;
  constexpr std::size_t kBlock = 4096;
  const std::size_t d = encoded.front().dim();
  const std::size_t n = encoded.size();
  const std::size_t t_count = task_hvs.size();
  parallel_chunks(d, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t b0 = begin; b0 < end; b0 += kBlock) {
      const std::size_t b1 = std::min(end, b0 + kBlock);
      for (std::size_t i = 0; i < n; ++i) {
        const double* v = encoded[i].data();
        for (std::size_t t = 0; t < t_count; ++t) {
          const double alpha = scale * w[t][i];
          if (alpha == 0.0) continue;
          double* acc = task_hvs[t].data();
          for (std::size_t j = b0; j < b1; ++j) acc[j] += alpha * v[j];
        }
      }
    }
  });
}

}  // namespace

AssociativeMemory train(const std::vector<Hypervector>& encoded, const WeightTable& weights,
                        const TrainConfig& cfg) {
  validate_train_config(cfg);
  require_consistent(encoded, weights.n_archs(), "train");
  AssociativeMemory model;
  model.task_names = weights.task_names;
  model.dim = encoded.empty() ? 0 : encoded.front().dim();
  model.config = cfg;
  model.task_hvs.assign(weights.n_tasks(), Hypervector(model.dim));
  accumulate_weighted(model.task_hvs, weights.weights, cfg.gamma0, encoded, cfg.threads);
  return model;
}

SimilarityTable predict_similarities(const AssociativeMemory& model,
                                     const std::vector<Hypervector>& encoded, int threads,
                                     std::size_t* zero_norm_count) {
  for (const auto& v : encoded) {
    if (v.dim() != model.dim)
      fail(ErrorCategory::domain, "predict: encoded dimension " + std::to_string(v.dim()) +
                                      " does not match model dimension " +
                                      std::to_string(model.dim));
  }
  const std::size_t t_count = model.task_hvs.size();
  const std::size_t m_count = encoded.size();
  SimilarityTable out;
  out.task_names = model.task_names;
  out.sims.assign(t_count, std::vector<double>(m_count, 0.0));

  std::vector<double> task_norms(t_count);
  for (std::size_t t = 0; t < t_count; ++t) task_norms[t] = hv_norm(model.task_hvs[t].span());

  std::atomic<std::size_t> zero_norms{0};
  constexpr std::size_t kBlock = 4096;
  const std::size_t d = model.dim;
  parallel_chunks(m_count, threads, [&](std::size_t begin, std::size_t end) {
    std::size_t local_zero = 0;
    std::vector<double> dots(t_count);
    for (std::size_t m = begin; m < end; ++m) {
      const double* v = encoded[m].data();
      // one streaming pass per architecture: the block of v stays hot
      // across the self-product and every task dot
      double vv = 0.0;
      std::fill(dots.begin(), dots.end(), 0.0);
      for (std::size_t b0 = 0; b0 < d; b0 += kBlock) {
        const std::size_t b1 = std::min(d, b0 + kBlock);
        for (std::size_t j = b0; j < b1; ++j) vv += v[j] * v[j];
        for (std::size_t t = 0; t < t_count; ++t) {
          const double* a = model.task_hvs[t].data();
          double s = 0.0;
          for (std::size_t j = b0; j < b1; ++j) s += v[j] * a[j];
          dots[t] += s;
        }
      }
      const double nv = std::sqrt(vv);
      for (std::size_t t = 0; t < t_count; ++t) {
        if (nv == 0.0 || task_norms[t] == 0.0) {
          out.sims[t][m] = 0.0;
          ++local_zero;
        } else {
          out.sims[t][m] = dots[t] / (nv * task_norms[t]);
        }
      }
    }
    zero_norms += local_zero;
  });
  if (zero_norm_count) *zero_norm_count = zero_norms.load();
  return out;
}

SimilarityTable predict_archs(const AssociativeMemory& model, const ItemMemorySet& mems,
                              std::span<const ArchDescriptor> archs, int threads,
                              std::size_t* zero_norm_count) {
  if (mems.dim() != model.dim)
    fail(ErrorCategory::domain, "predict: item memory dimension " + std::to_string(mems.dim()) +
                                    " does not match model dimension " +
                                    std::to_string(model.dim));
  for (std::size_t i = 0; i < archs.size(); ++i) {
    try {
      validate_arch(archs[i]);
    } catch (const Error& e) {
      fail(e.category(), "invalid descriptor at index " + std::to_string(i) + ": " + e.what());
    }
  }
  const UnifiedRecordMemory unified =
      model.scheme == Scheme::record ? build_unified_memory(mems) : UnifiedRecordMemory{};

  constexpr std::size_t kChunk = 512;
  SimilarityTable sims;
  sims.task_names = model.task_names;
  sims.sims.assign(model.task_hvs.size(), std::vector<double>(archs.size(), 0.0));
  std::size_t zero_norms = 0;
  for (std::size_t begin = 0; begin < archs.size(); begin += kChunk) {
    const std::size_t count = std::min(archs.size() - begin, kChunk);
    std::vector<Hypervector> encoded(count);
    parallel_chunks(count, threads, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        encoded[i] = model.scheme == Scheme::record
                         ? encode_record(archs[begin + i], unified)
                         : encode_gram(archs[begin + i], mems);
      }
    });
    std::size_t chunk_zero = 0;
    const SimilarityTable part = predict_similarities(model, encoded, threads, &chunk_zero);
    zero_norms += chunk_zero;
    for (std::size_t t = 0; t < part.n_tasks(); ++t)
      std::copy(part.sims[t].begin(), part.sims[t].end(), sims.sims[t].begin() + begin);
  }
  if (zero_norm_count) *zero_norm_count = zero_norms;
  return sims;
}

RankTable similarities_to_ranks(const SimilarityTable& sims) {
  RankTable out;
  out.task_names = sims.task_names;
  out.ranks.resize(sims.n_tasks());
  const std::size_t m = sims.n_rows();
  std::vector<std::size_t> order(m);
  for (std::size_t t = 0; t < sims.n_tasks(); ++t) {
    std::iota(order.begin(), order.end(), 0);
    const auto& col = sims.sims[t];
    // stable sort keeps ascending-index order among equal similarities
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return col[a] > col[b]; });
    out.ranks[t].resize(m);
    for (std::size_t pos = 0; pos < m; ++pos) {
      out.ranks[t][order[pos]] = static_cast<int>(pos);
    }
  }
  return out;
}

RetrainTrace retrain(AssociativeMemory& model, const std::vector<Hypervector>& encoded,
                     const WeightTable& truth_weights, const TrainConfig& cfg) {
  validate_train_config(cfg);
  require_consistent(encoded, truth_weights.n_archs(), "retrain");
  if (truth_weights.n_tasks() != model.task_hvs.size())
    fail(ErrorCategory::domain, "retrain: weight/model task count mismatch");

  RetrainTrace trace;
  const std::size_t n = truth_weights.n_archs();
  const std::size_t t_count = truth_weights.n_tasks();
  if (n == 0 || t_count == 0) return trace;

  std::vector<std::vector<double>> dw(t_count, std::vector<double>(n, 0.0));
  for (int epoch = 1; epoch <= cfg.retrain_max_epochs; ++epoch) {
    const SimilarityTable delta = predict_similarities(model, encoded, cfg.threads);
    const RankTable predicted = similarities_to_ranks(delta);
    const WeightTable speculated = ranks_to_weights(predicted, cfg.mu, cfg.weight_mode);

    double total_abs = 0.0;
    std::vector<double> per_task(t_count, 0.0);
    for (std::size_t t = 0; t < t_count; ++t) {
      double task_abs = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double diff = truth_weights.weights[t][i] - speculated.weights[t][i];
        dw[t][i] = diff;
        task_abs += std::abs(diff);
      }
      per_task[t] = task_abs / static_cast<double>(n);
      total_abs += task_abs;
    }
    const double mean_abs = total_abs / static_cast<double>(n * t_count);
    trace.per_task.push_back(per_task);
    trace.overall.push_back(mean_abs);

    if (mean_abs < cfg.stop_threshold) break;

    const double gamma_e = cfg.gamma0 * std::pow(cfg.decay, epoch - 1);
    accumulate_weighted(model.task_hvs, dw, gamma_e, encoded, cfg.threads);
    ++trace.updates_applied;
  }
  return trace;
}

}  // namespace hdrank
