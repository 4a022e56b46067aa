#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hdrank {

// Names the stream a hypervector is generated from.  Identical
// (master_seed, stream_label) pairs always yield bit-identical vectors.
struct HvSeed {
  std::uint64_t master_seed = 0;
  std::string stream_label;
};

// Fixed-dimension real-valued vector, the unit of all computation here.
// Item vectors are bipolar (+1/-1) stored in the same representation as
// the real-valued accumulators so that fractional weights never need a
// lossy conversion.
class Hypervector {
 public:
  Hypervector() = default;
  explicit Hypervector(std::size_t dim) : elems_(dim, 0.0) {}

  [[nodiscard]] std::size_t dim() const noexcept { return elems_.size(); }

  double& operator[](std::size_t i) noexcept { return elems_[i]; }
  double operator[](std::size_t i) const noexcept { return elems_[i]; }

  [[nodiscard]] double* data() noexcept { return elems_.data(); }
  [[nodiscard]] const double* data() const noexcept { return elems_.data(); }

  [[nodiscard]] std::span<double> span() noexcept { return elems_; }
  [[nodiscard]] std::span<const double> span() const noexcept { return elems_; }

  bool operator==(const Hypervector&) const = default;

 private:
  std::vector<double> elems_;
};

// Fresh bipolar vector with each element drawn i.i.d. uniform over {-1,+1}
// from the stream named by `seed`.  Throws on dim == 0.
Hypervector random_bipolar(const HvSeed& seed, std::size_t dim);

// Element-wise sum (bundling).  Dimensions must match.
Hypervector hv_add(const Hypervector& a, const Hypervector& b);

// Element-wise product (binding).  Self-inverse on bipolar vectors.
Hypervector hv_mult(const Hypervector& a, const Hypervector& b);

// Cyclic rotation by n mod D positions; positive n rotates toward higher
// indices.  n may be zero, negative, or >= D.
Hypervector hv_permute(const Hypervector& a, std::int64_t n);

// Clamp every element into [-1, 1]; interior values are kept as-is.
Hypervector cap_bipolarize(const Hypervector& a);
void cap_bipolarize_inplace(Hypervector& a) noexcept;

// dot(a,b) / (|a|*|b|).  A zero-norm operand yields 0; when `zero_norm`
// is non-null it is set so callers can surface a warning instead of
// failing batch jobs.
double cosine_similarity(const Hypervector& a, const Hypervector& b,
                         bool* zero_norm = nullptr);

// Dense kernels shared by the training/prediction paths.
double hv_dot(std::span<const double> a, std::span<const double> b) noexcept;
double hv_norm(std::span<const double> a) noexcept;
// y += alpha * x
void hv_axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept;

}  // namespace hdrank
