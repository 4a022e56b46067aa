#include "hdrank/encoding.hpp"

#include <string>

#include "hdrank/error.hpp"
#include "hdrank/parallel.hpp"

namespace hdrank {

Scheme scheme_from_string(const std::string& name) {
  if (name == "gram") return Scheme::gram;
  if (name == "record") return Scheme::record;
  fail(ErrorCategory::usage, "unknown encoding scheme '" + name + "' (expected gram|record)");
}

const char* to_string(Scheme scheme) noexcept {
  return scheme == Scheme::gram ? "gram" : "record";
}

void validate_arch(const ArchDescriptor& arch) {
  if (arch.depth() < 1 || arch.depth() > kMaxLayers) {
    fail(ErrorCategory::domain,
         "architecture depth " + std::to_string(arch.depth()) + " outside [1, 12]");
  }
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const auto& lp = arch.layers[i];
    if (lp.head_code < kCodeMin || lp.head_code > kCodeMax) {
      fail(ErrorCategory::domain, "head code " + std::to_string(lp.head_code) +
                                      " at layer " + std::to_string(i) + " outside {1,2,3}");
    }
    if (lp.mlp_code < kCodeMin || lp.mlp_code > kCodeMax) {
      fail(ErrorCategory::domain, "mlp code " + std::to_string(lp.mlp_code) + " at layer " +
                                      std::to_string(i) + " outside {1,2,3}");
    }
  }
}

void validate_arch_strict(const ArchDescriptor& arch) {
  validate_arch(arch);
  if (arch.depth() < static_cast<std::size_t>(kMinDepth)) {
    fail(ErrorCategory::domain,
         "architecture depth " + std::to_string(arch.depth()) + " outside {10,11,12}");
  }
}

const Hypervector& ItemMemorySet::head(int code) const {
  if (code < kCodeMin || code > kCodeMax)
    fail(ErrorCategory::domain, "head code " + std::to_string(code) + " outside {1,2,3}");
  return head_[static_cast<std::size_t>(code - 1)];
}

const Hypervector& ItemMemorySet::mlp(int code) const {
  if (code < kCodeMin || code > kCodeMax)
    fail(ErrorCategory::domain, "mlp code " + std::to_string(code) + " outside {1,2,3}");
  return mlp_[static_cast<std::size_t>(code - 1)];
}

const Hypervector& ItemMemorySet::depth(std::size_t position) const {
  if (position >= kMaxLayers)
    fail(ErrorCategory::domain, "depth position " + std::to_string(position) + " outside [0, 12)");
  return depth_[position];
}

ItemMemorySet build_item_memories(std::uint64_t master_seed, std::size_t dim) {
  if (dim == 0) fail(ErrorCategory::config, "item memory dimension must be >= 1");
  ItemMemorySet mems;
  mems.master_seed_ = master_seed;
  mems.dim_ = dim;
  for (int code = kCodeMin; code <= kCodeMax; ++code) {
    mems.head_[static_cast<std::size_t>(code - 1)] =
        random_bipolar({master_seed, "head/" + std::to_string(code)}, dim);
    mems.mlp_[static_cast<std::size_t>(code - 1)] =
        random_bipolar({master_seed, "mlp/" + std::to_string(code)}, dim);
  }
  for (std::size_t pos = 0; pos < kMaxLayers; ++pos) {
    mems.depth_[pos] = random_bipolar({master_seed, "depth/" + std::to_string(pos + 1)}, dim);
  }
  return mems;
}

const Hypervector& UnifiedRecordMemory::entry(std::size_t position, int head_code,
                                              int mlp_code) const {
  if (position >= kMaxLayers || head_code < kCodeMin || head_code > kCodeMax ||
      mlp_code < kCodeMin || mlp_code > kCodeMax) {
    fail(ErrorCategory::domain, "unified memory index out of range");
  }
  const std::size_t idx = position * 9 + static_cast<std::size_t>(head_code - 1) * 3 +
                          static_cast<std::size_t>(mlp_code - 1);
  return table_[idx];
}

UnifiedRecordMemory build_unified_memory(const ItemMemorySet& mems) {
  UnifiedRecordMemory unified;
  unified.dim_ = mems.dim();
  unified.table_.resize(UnifiedRecordMemory::kEntries);
  for (std::size_t pos = 0; pos < kMaxLayers; ++pos) {
    for (int h = kCodeMin; h <= kCodeMax; ++h) {
      for (int m = kCodeMin; m <= kCodeMax; ++m) {
        const std::size_t idx =
            pos * 9 + static_cast<std::size_t>(h - 1) * 3 + static_cast<std::size_t>(m - 1);
        unified.table_[idx] = hv_mult(hv_mult(mems.depth(pos), mems.head(h)), mems.mlp(m));
      }
    }
  }
  return unified;
}

Hypervector encode_gram_sum(const ArchDescriptor& arch, const ItemMemorySet& mems) {
  validate_arch(arch);
  const std::size_t d = mems.dim();
  Hypervector sum(d);
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const auto& lp = arch.layers[i];
    const double* h = mems.head(lp.head_code).data();
    const double* m = mems.mlp(lp.mlp_code).data();
    double* out = sum.data();
    // gram_i = head * mlp, rotated by the 0-based layer index: layers
    // closer to the output shift by more positions.  The rotation is
    // split at the wrap point so both segments stay contiguous.
    const std::size_t shift = i % d;
    const std::size_t split = d - shift;
    for (std::size_t j = 0; j < split; ++j) out[j + shift] += h[j] * m[j];
    for (std::size_t j = split; j < d; ++j) out[j - split] += h[j] * m[j];
  }
  return sum;
}

Hypervector encode_gram(const ArchDescriptor& arch, const ItemMemorySet& mems) {
  Hypervector v = encode_gram_sum(arch, mems);
  cap_bipolarize_inplace(v);
  return v;
}

Hypervector encode_record_sum(const ArchDescriptor& arch, const ItemMemorySet& mems) {
  validate_arch(arch);
  const std::size_t d = mems.dim();
  Hypervector sum(d);
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const auto& lp = arch.layers[i];
    const Hypervector& hv_h = mems.head(lp.head_code);
    const Hypervector& hv_m = mems.mlp(lp.mlp_code);
    const Hypervector& hv_d = mems.depth(i);
    for (std::size_t j = 0; j < d; ++j) {
      sum[j] += hv_h[j] * hv_m[j] * hv_d[j];
    }
  }
  return sum;
}

Hypervector encode_record(const ArchDescriptor& arch, const ItemMemorySet& mems) {
  Hypervector v = encode_record_sum(arch, mems);
  cap_bipolarize_inplace(v);
  return v;
}

Hypervector encode_record(const ArchDescriptor& arch, const UnifiedRecordMemory& unified) {
  validate_arch(arch);
  const std::size_t d = unified.dim();
  Hypervector v(d);
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const Hypervector& e = unified.entry(i, arch.layers[i].head_code, arch.layers[i].mlp_code);
    hv_axpy(1.0, e.span(), v.span());
  }
  cap_bipolarize_inplace(v);
  return v;
}

std::vector<Hypervector> encode_batch(std::span<const ArchDescriptor> archs,
                                      const ItemMemorySet& mems, Scheme scheme, int threads) {
  for (std::size_t i = 0; i < archs.size(); ++i) {
    try {
      validate_arch(archs[i]);
    } catch (const Error& e) {
      fail(e.category(),
           "invalid descriptor at index " + std::to_string(i) + ": " + e.what());
    }
  }
  std::vector<Hypervector> out(archs.size());
  if (scheme == Scheme::record) {
    const UnifiedRecordMemory unified = build_unified_memory(mems);
    parallel_chunks(archs.size(), threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) out[i] = encode_record(archs[i], unified);
    });
  } else {
    parallel_chunks(archs.size(), threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) out[i] = encode_gram(archs[i], mems);
    });
  }
  return out;
}

}  // namespace hdrank
