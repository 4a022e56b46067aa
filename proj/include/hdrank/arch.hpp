#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace hdrank {

// Search-space domains: per encoder block the attention-head count and the
// MLP dilation ratio are label-encoded into {1,2,3}; block counts (depth)
// range over {10,11,12}.
inline constexpr int kCodeMin = 1;
inline constexpr int kCodeMax = 3;
inline constexpr int kMinDepth = 10;
inline constexpr int kMaxDepth = 12;
inline constexpr std::size_t kMaxLayers = 12;

struct LayerParams {
  int head_code = 0;
  int mlp_code = 0;

  bool operator==(const LayerParams&) const = default;
};

// One transformer architecture: depth encoder blocks, listed input-first.
struct ArchDescriptor {
  std::vector<LayerParams> layers;

  [[nodiscard]] std::size_t depth() const noexcept { return layers.size(); }

  bool operator==(const ArchDescriptor&) const = default;
};

// Encoder-level validation: codes in {1,2,3} and 1 <= depth <= 12.  Depths
// below 10 are tolerated here so unit tests can use small instances;
// ingestion enforces the production domain via validate_arch_strict.
void validate_arch(const ArchDescriptor& arch);

// Production validation: additionally requires depth in {10,11,12}.
void validate_arch_strict(const ArchDescriptor& arch);

// Architectures plus their external identifiers, aligned by index.
struct ArchTable {
  std::vector<std::string> ids;
  std::vector<ArchDescriptor> archs;

  [[nodiscard]] std::size_t size() const noexcept { return archs.size(); }
};

}  // namespace hdrank
