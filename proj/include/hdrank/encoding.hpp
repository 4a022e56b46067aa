#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hdrank/arch.hpp"
#include "hdrank/hv.hpp"

namespace hdrank {

enum class Scheme { gram, record };

Scheme scheme_from_string(const std::string& name);
const char* to_string(Scheme scheme) noexcept;

// Item memories for the three architectural parameters: 3 head vectors,
// 3 mlp-ratio vectors, and 12 per-position depth vectors.  All entries are
// bipolar, share one dimension, and are derived from fixed stream labels
// ("head/1".."depth/12") under one master seed, so construction order
// never matters.
class ItemMemorySet {
 public:
  static constexpr int kCodes = 3;

  ItemMemorySet() = default;

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::uint64_t master_seed() const noexcept { return master_seed_; }

  // code in {1,2,3}
  [[nodiscard]] const Hypervector& head(int code) const;
  [[nodiscard]] const Hypervector& mlp(int code) const;
  // 0-based layer position in [0, 12)
  [[nodiscard]] const Hypervector& depth(std::size_t position) const;

  friend ItemMemorySet build_item_memories(std::uint64_t master_seed, std::size_t dim);

 private:
  std::uint64_t master_seed_ = 0;
  std::size_t dim_ = 0;
  std::array<Hypervector, kCodes> head_{};
  std::array<Hypervector, kCodes> mlp_{};
  std::array<Hypervector, kMaxLayers> depth_{};
};

// 3 + 3 + 12 freshly generated bipolar vectors, each from a distinct
// stream label.  Throws on dim == 0.  Tiny dimensions are accepted for
// tests; pseudo-orthogonality only holds at production scale (>= 10^4).
ItemMemorySet build_item_memories(std::uint64_t master_seed, std::size_t dim);

// Pre-multiplied depth*head*mlp vectors, one per (position, head, mlp)
// triple (12 x 3 x 3 = 108 entries).  Lookup replaces two element-wise
// multiplications per layer; results are bit-identical to the naive path.
class UnifiedRecordMemory {
 public:
  static constexpr std::size_t kEntries = kMaxLayers * 3 * 3;

  UnifiedRecordMemory() = default;

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t size() const noexcept { return table_.size(); }
  [[nodiscard]] const Hypervector& entry(std::size_t position, int head_code,
                                         int mlp_code) const;

  friend UnifiedRecordMemory build_unified_memory(const ItemMemorySet& mems);

 private:
  std::size_t dim_ = 0;
  std::vector<Hypervector> table_;
};

UnifiedRecordMemory build_unified_memory(const ItemMemorySet& mems);

// Gram scheme: layer i contributes permute(head_i * mlp_i, i); the layer
// position is carried by the shift amount alone.  The returned vector is
// the capped sum.
Hypervector encode_gram(const ArchDescriptor& arch, const ItemMemorySet& mems);

// Record scheme: layer i contributes head_i * mlp_i * depth_i; no
// permutation involved.
Hypervector encode_record(const ArchDescriptor& arch, const ItemMemorySet& mems);
Hypervector encode_record(const ArchDescriptor& arch, const UnifiedRecordMemory& unified);

// Pre-capping accumulations, exposed for analysis and tests.  Sums of
// bipolar products, so every element is an exact integer.
Hypervector encode_gram_sum(const ArchDescriptor& arch, const ItemMemorySet& mems);
Hypervector encode_record_sum(const ArchDescriptor& arch, const ItemMemorySet& mems);

// Order-preserving batch encoding; archs are validated up front and the
// first invalid descriptor aborts the batch with its index.  Internally
// parallel; results do not depend on the worker count.
std::vector<Hypervector> encode_batch(std::span<const ArchDescriptor> archs,
                                      const ItemMemorySet& mems, Scheme scheme,
                                      int threads = 0);

}  // namespace hdrank
