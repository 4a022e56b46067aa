#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "hdrank/error.hpp"
#include "hdrank/hv.hpp"
#include "hdrank/rng.hpp"

using namespace hdrank;

namespace {

Hypervector make_hv(std::initializer_list<double> vals) {
  Hypervector hv(vals.size());
  std::size_t i = 0;
  for (double v : vals) hv[i++] = v;
  return hv;
}

// Test-side generator for real-valued vectors, independent of random_bipolar.
Hypervector random_real(DetRng& rng, std::size_t dim, double scale) {
  Hypervector hv(dim);
  for (std::size_t i = 0; i < dim; ++i) hv[i] = scale * (2.0 * rng.next_unit() - 1.0);
  return hv;
}

}  // namespace

TEST_CASE("random_bipolar is deterministic in (seed, label, dim)") {
  const Hypervector a = random_bipolar({7, "alpha"}, 4);
  const Hypervector b = random_bipolar({7, "alpha"}, 4);
  CHECK(a == b);
  for (std::size_t i = 0; i < a.dim(); ++i) CHECK(std::abs(a[i]) == 1.0);

  const Hypervector c = random_bipolar({7, "beta"}, 4);
  CHECK(a != c);
  const Hypervector d = random_bipolar({8, "alpha"}, 4);
  CHECK(a != d);
}

TEST_CASE("random_bipolar handles the degenerate dimension") {
  const Hypervector a = random_bipolar({3, "x"}, 1);
  CHECK(a.dim() == 1);
  CHECK(std::abs(a[0]) == 1.0);
}

TEST_CASE("random_bipolar rejects dimension zero") {
  CHECK_THROWS_AS(random_bipolar({1, "x"}, 0), Error);
}

TEST_CASE("distinct streams are pseudo-orthogonal at D = 10000") {
  // 5-sigma bound with sigma = 1/sqrt(D) = 0.01, over 100 disjoint pairs.
  for (int pair = 0; pair < 100; ++pair) {
    const Hypervector a = random_bipolar({11, "pair/" + std::to_string(pair) + "/a"}, 10000);
    const Hypervector b = random_bipolar({11, "pair/" + std::to_string(pair) + "/b"}, 10000);
    CHECK(std::abs(cosine_similarity(a, b)) < 0.05);
  }
}

TEST_CASE("hv_add follows element-wise arithmetic") {
  CHECK(hv_add(make_hv({1, -1}), make_hv({1, 1})) == make_hv({2, 0}));
  const Hypervector a = random_bipolar({1, "a"}, 16);
  CHECK(hv_add(a, Hypervector(16)) == a);   // zero vector is the identity
  const Hypervector doubled = hv_add(a, a);
  for (std::size_t i = 0; i < a.dim(); ++i) CHECK(doubled[i] == 2.0 * a[i]);
  CHECK_THROWS_AS(hv_add(a, Hypervector(8)), Error);
}

TEST_CASE("hv_mult follows element-wise arithmetic") {
  CHECK(hv_mult(make_hv({1, -1, 1}), make_hv({-1, -1, 1})) == make_hv({-1, 1, 1}));
  const Hypervector a = random_bipolar({2, "a"}, 16);
  const Hypervector self = hv_mult(a, a);  // bipolar binding is self-inverse
  for (std::size_t i = 0; i < a.dim(); ++i) CHECK(self[i] == 1.0);
  Hypervector ones(16);
  for (std::size_t i = 0; i < ones.dim(); ++i) ones[i] = 1.0;
  CHECK(hv_mult(a, ones) == a);
  CHECK_THROWS_AS(hv_mult(a, Hypervector(8)), Error);
}

TEST_CASE("hv_permute rotates toward higher indices") {
  const Hypervector a = make_hv({1, 2, 3, 4});
  CHECK(hv_permute(a, 1) == make_hv({4, 1, 2, 3}));
  CHECK(hv_permute(a, 0) == a);
  CHECK(hv_permute(a, 4) == a);
  CHECK(hv_permute(a, -1) == make_hv({2, 3, 4, 1}));
  CHECK(hv_permute(a, 5) == hv_permute(a, 1));
}

TEST_CASE("hv_permute composes additively and preserves the multiset") {
  DetRng rng(99, "permute-prop");
  for (int trial = 0; trial < 20; ++trial) {
    const auto dim = static_cast<std::size_t>(2 + rng.next_below(64));
    const Hypervector a = random_real(rng, dim, 3.0);
    const auto m = static_cast<std::int64_t>(rng.next_below(200)) - 100;
    const auto n = static_cast<std::int64_t>(rng.next_below(200)) - 100;
    CHECK(hv_permute(hv_permute(a, m), n) == hv_permute(a, m + n));

    std::vector<double> sorted_in(a.data(), a.data() + dim);
    const Hypervector p = hv_permute(a, m);
    std::vector<double> sorted_out(p.data(), p.data() + dim);
    std::sort(sorted_in.begin(), sorted_in.end());
    std::sort(sorted_out.begin(), sorted_out.end());
    CHECK(sorted_in == sorted_out);
  }
}

TEST_CASE("cap_bipolarize clamps into [-1, 1] and is idempotent") {
  CHECK(cap_bipolarize(make_hv({3, -5, 0.5, 1})) == make_hv({1, -1, 0.5, 1}));
  CHECK(cap_bipolarize(Hypervector(8)) == Hypervector(8));

  DetRng rng(5, "cap-prop");
  for (int trial = 0; trial < 50; ++trial) {
    const Hypervector a = random_real(rng, 64, 4.0);
    const Hypervector once = cap_bipolarize(a);
    CHECK(cap_bipolarize(once) == once);
    for (std::size_t i = 0; i < once.dim(); ++i) {
      CHECK(once[i] >= -1.0);
      CHECK(once[i] <= 1.0);
    }
  }
}

TEST_CASE("cosine_similarity basics") {
  const Hypervector a = random_bipolar({21, "cos"}, 1000);
  CHECK(cosine_similarity(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  Hypervector neg(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) neg[i] = -a[i];
  CHECK(cosine_similarity(a, neg) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(cosine_similarity(make_hv({1, 0}), make_hv({0, 1})) == 0.0);
}

TEST_CASE("cosine_similarity zero-norm inputs degrade to 0 with a warning flag") {
  const Hypervector zero(16);
  const Hypervector a = random_bipolar({21, "cos0"}, 16);
  bool flagged = false;
  CHECK(cosine_similarity(zero, a, &flagged) == 0.0);
  CHECK(flagged);
  flagged = false;
  CHECK(cosine_similarity(a, a, &flagged) > 0.0);
  CHECK_FALSE(flagged);
}

TEST_CASE("cosine_similarity is invariant under shared rotation and positive scaling") {
  DetRng rng(6, "cos-prop");
  for (int trial = 0; trial < 20; ++trial) {
    const auto dim = static_cast<std::size_t>(8 + rng.next_below(256));
    const Hypervector a = random_real(rng, dim, 2.0);
    const Hypervector b = random_real(rng, dim, 2.0);
    const auto n = static_cast<std::int64_t>(rng.next_below(2 * dim));
    const double base = cosine_similarity(a, b);
    const double rotated = cosine_similarity(hv_permute(a, n), hv_permute(b, n));
    CHECK(rotated == doctest::Approx(base).epsilon(1e-12));

    const double c = 0.25 + 4.0 * rng.next_unit();
    Hypervector scaled(dim);
    for (std::size_t i = 0; i < dim; ++i) scaled[i] = c * a[i];
    CHECK(cosine_similarity(scaled, b) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("golden vectors pin the generator across implementations") {
  std::ifstream in(std::string(HDRANK_FIXTURE_DIR) + "/golden_hv.txt");
  REQUIRE(in.good());
  std::string line;
  int checked = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::uint64_t seed = 0;
    std::string label;
    std::size_t dim = 0;
    row >> seed >> label >> dim;
    REQUIRE(dim == 16);
    const Hypervector hv = random_bipolar({seed, label}, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      double expected = 0.0;
      row >> expected;
      CHECK(hv[i] == expected);
    }
    ++checked;
  }
  CHECK(checked >= 6);
}
