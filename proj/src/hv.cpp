#include "hdrank/hv.hpp"

#include <algorithm>
#include <cmath>

#include "hdrank/error.hpp"
#include "hdrank/rng.hpp"

namespace hdrank {

Hypervector random_bipolar(const HvSeed& seed, std::size_t dim) {
  if (dim == 0) fail(ErrorCategory::config, "hypervector dimension must be >= 1");
  Hypervector out(dim);
  const std::uint64_t key = stream_key(seed.master_seed, seed.stream_label);
  // One counter word covers 64 elements; element e uses bit e%64 of word e/64.
  const std::size_t words = (dim + 63) / 64;
  double* p = out.data();
  for (std::size_t w = 0; w < words; ++w) {
    const std::uint64_t bits = counter_word(key, w);
    const std::size_t base = w * 64;
    const std::size_t n = std::min<std::size_t>(64, dim - base);
    for (std::size_t b = 0; b < n; ++b) {
      p[base + b] = ((bits >> b) & 1ULL) ? 1.0 : -1.0;
    }
  }
  return out;
}

namespace {
void require_same_dim(const Hypervector& a, const Hypervector& b, const char* op) {
  if (a.dim() != b.dim()) {
    fail(ErrorCategory::domain, std::string(op) + ": dimension mismatch (" +
                                    std::to_string(a.dim()) + " vs " +
                                    std::to_string(b.dim()) + ")");
  }
}
}  // namespace

Hypervector hv_add(const Hypervector& a, const Hypervector& b) {
  require_same_dim(a, b, "hv_add");
  Hypervector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + b[i];
  return out;
}

Hypervector hv_mult(const Hypervector& a, const Hypervector& b) {
  require_same_dim(a, b, "hv_mult");
  Hypervector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] * b[i];
  return out;
}

Hypervector hv_permute(const Hypervector& a, std::int64_t n) {
  const std::size_t d = a.dim();
  if (d == 0) return a;
  const auto dim = static_cast<std::int64_t>(d);
  const std::size_t shift = static_cast<std::size_t>(((n % dim) + dim) % dim);
  Hypervector out(d);
  // out[(j + shift) mod D] = a[j]
  for (std::size_t j = 0; j < d; ++j) {
    std::size_t k = j + shift;
    if (k >= d) k -= d;
    out[k] = a[j];
  }
  return out;
}

Hypervector cap_bipolarize(const Hypervector& a) {
  Hypervector out = a;
  cap_bipolarize_inplace(out);
  return out;
}

void cap_bipolarize_inplace(Hypervector& a) noexcept {
  double* p = a.data();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    p[i] = std::min(std::max(p[i], -1.0), 1.0);
  }
}

double cosine_similarity(const Hypervector& a, const Hypervector& b, bool* zero_norm) {
  require_same_dim(a, b, "cosine_similarity");
  const double na = hv_norm(a.span());
  const double nb = hv_norm(b.span());
  if (zero_norm) *zero_norm = false;
  if (na == 0.0 || nb == 0.0) {
    // An all-zero vector carries no information; degrade to 0 instead of
    // failing whole batch jobs.
    if (zero_norm) *zero_norm = true;
    return 0.0;
  }
  return hv_dot(a.span(), b.span()) / (na * nb);
}

double hv_dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double hv_norm(std::span<const double> a) noexcept {
  return std::sqrt(hv_dot(a, a));
}

void hv_axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace hdrank
