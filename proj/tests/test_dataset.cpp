#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "hdrank/dataset.hpp"
#include "hdrank/error.hpp"
#include "hdrank/rng.hpp"

using namespace hdrank;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "hdrank_dataset_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir / name;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

const std::string kArchHeader =
    "arch_id,depth,head_1,head_2,head_3,head_4,head_5,head_6,head_7,head_8,head_9,head_10,"
    "head_11,head_12,mlp_1,mlp_2,mlp_3,mlp_4,mlp_5,mlp_6,mlp_7,mlp_8,mlp_9,mlp_10,mlp_11,mlp_12";

std::string expect_error(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("arch csv round-trips and validates rows") {
  const fs::path path = temp_file("archs.csv");
  write_text(path, kArchHeader +
                       "\n"
                       "a0,12,2,1,3,1,2,3,1,2,3,1,2,3,1,2,3,1,2,3,1,2,3,1,2,3\n"
                       "a1,10,1,1,1,1,1,1,1,1,1,1,0,0,2,2,2,2,2,2,2,2,2,2,0,0\n");
  const ArchTable table = load_arch_csv(path);
  REQUIRE(table.size() == 2);
  CHECK(table.ids == std::vector<std::string>{"a0", "a1"});
  CHECK(table.archs[0].depth() == 12);
  CHECK(table.archs[0].layers[0] == LayerParams{2, 1});
  CHECK(table.archs[1].depth() == 10);

  const fs::path out = temp_file("archs_rt.csv");
  write_arch_csv(out, table);
  const ArchTable reloaded = load_arch_csv(out);
  CHECK(reloaded.ids == table.ids);
  CHECK(reloaded.archs == table.archs);
}

TEST_CASE("arch csv error paths carry row context") {
  const fs::path path = temp_file("bad_archs.csv");

  write_text(path, kArchHeader + "\n");
  CHECK(load_arch_csv(path).size() == 0);  // header-only file

  write_text(path, kArchHeader + "\na0,12,2,1\n");
  CHECK(expect_error([&] { load_arch_csv(path); }).find("line 2") != std::string::npos);

  write_text(path, kArchHeader +
                       "\na0,10,1,1,1,1,1,1,1,1,1,1,3,0,2,2,2,2,2,2,2,2,2,2,0,0\n");
  CHECK(expect_error([&] { load_arch_csv(path); }).find("padding") != std::string::npos);

  write_text(path, kArchHeader +
                       "\na0,12,2,1,3,1,9,3,1,2,3,1,2,3,1,2,3,1,2,3,1,2,3,1,2,3\n");
  CHECK(expect_error([&] { load_arch_csv(path); }).find("head_5") != std::string::npos);

  write_text(path, kArchHeader +
                       "\na0,7,1,1,1,1,1,1,1,0,0,0,0,0,2,2,2,2,2,2,2,0,0,0,0,0\n");
  CHECK(expect_error([&] { load_arch_csv(path); }).find("depth") != std::string::npos);

  write_text(path, kArchHeader +
                       "\na0,12,2,1,3,1,2,3,1,2,3,1,2,3,1,2,3,1,2,3,1,2,3,1,2,3\n"
                       "a0,12,2,1,3,1,2,3,1,2,3,1,2,3,1,2,3,1,2,3,1,2,3,1,2,3\n");
  CHECK(expect_error([&] { load_arch_csv(path); }).find("duplicate") != std::string::npos);
}

TEST_CASE("rank csv loads permutations and rejects everything else") {
  const fs::path path = temp_file("ranks.csv");
  write_text(path, "arch_id,cplfw,market\na0,2,0\na1,0,1\na2,1,2\n");
  const RankCsv ranks = load_rank_csv(path, 3);
  CHECK(ranks.arch_ids == std::vector<std::string>{"a0", "a1", "a2"});
  CHECK(ranks.table.task_names == std::vector<std::string>{"cplfw", "market"});
  CHECK(ranks.table.ranks[0] == std::vector<int>{2, 0, 1});

  write_text(path, "arch_id,t\na0,0\na1,0\na2,1\n");
  CHECK(expect_error([&] { load_rank_csv(path); }).find("duplicate rank") != std::string::npos);

  write_text(path, "arch_id,t\na0,0\na1,1\na2,3\n");
  CHECK(expect_error([&] { load_rank_csv(path); }).find("out of range") != std::string::npos);

  write_text(path, "arch_id,t\na0,0\na1,1\n");
  CHECK(expect_error([&] { load_rank_csv(path, 3); }).find("expected 3 rows") !=
        std::string::npos);
}

TEST_CASE("prediction csv round-trips random tables") {
  DetRng rng(701, "pred-rt");
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.next_below(20);
    const std::size_t t_count = 1 + rng.next_below(4);
    RankTable table;
    std::vector<std::string> ids;
    for (std::size_t t = 0; t < t_count; ++t) {
      table.task_names.push_back("task_" + std::to_string(t + 1));
      std::vector<int> col(n);
      std::iota(col.begin(), col.end(), 0);
      for (std::size_t i = n - 1; i > 0; --i) std::swap(col[i], col[rng.next_below(i + 1)]);
      table.ranks.push_back(std::move(col));
    }
    for (std::size_t i = 0; i < n; ++i) ids.push_back("a" + std::to_string(i));

    const fs::path path = temp_file("pred_rt.csv");
    write_pred_csv(path, ids, table);
    const RankCsv reloaded = load_rank_csv(path, n);
    CHECK(reloaded.arch_ids == ids);
    CHECK(reloaded.table.task_names == table.task_names);
    CHECK(reloaded.table.ranks == table.ranks);
  }
}

TEST_CASE("empty prediction table writes a header-only file") {
  RankTable table;
  table.task_names = {"t0", "t1"};
  table.ranks = {{}, {}};
  const fs::path path = temp_file("pred_empty.csv");
  write_pred_csv(path, {}, table);
  std::ifstream in(path);
  std::string line;
  CHECK(std::getline(in, line));
  CHECK(line == "arch_id,t0,t1");
  CHECK_FALSE(std::getline(in, line));
}

TEST_CASE("gen_synthetic is deterministic and matches its own scorer") {
  BenchmarkSpec spec;
  spec.n_train = 40;
  spec.n_test = 80;
  spec.task_names = {"t0", "t1", "t2"};
  spec.seed = 77;
  const SyntheticBenchmark a = gen_synthetic(spec);
  const SyntheticBenchmark b = gen_synthetic(spec);
  CHECK(a.train_archs.archs == b.train_archs.archs);
  CHECK(a.test_archs.archs == b.test_archs.archs);
  CHECK(a.train_ranks.ranks == b.train_ranks.ranks);
  CHECK(a.test_ranks.ranks == b.test_ranks.ranks);

  // no duplicates across train + test
  std::vector<ArchDescriptor> all = a.train_archs.archs;
  all.insert(all.end(), a.test_archs.archs.begin(), a.test_archs.archs.end());
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) CHECK(all[i] != all[j]);

  // noiseless ranks are exactly recoverable by brute-force re-scoring
  for (std::size_t t = 0; t < spec.task_names.size(); ++t) {
    std::vector<std::size_t> order(a.test_archs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return a.scorer.score(a.test_archs.archs[x], t) > a.scorer.score(a.test_archs.archs[y], t);
    });
    for (std::size_t pos = 0; pos < order.size(); ++pos)
      CHECK(a.test_ranks.ranks[t][order[pos]] == static_cast<int>(pos));
  }
}

TEST_CASE("gen_synthetic respects domains and rejects impossible requests") {
  BenchmarkSpec spec;
  spec.n_train = 10;
  spec.n_test = 10;
  spec.task_names = {"t0"};
  spec.seed = 5;
  const SyntheticBenchmark bench = gen_synthetic(spec);
  for (const auto& arch : bench.train_archs.archs) CHECK_NOTHROW(validate_arch_strict(arch));

  spec.n_train = 1;
  CHECK_THROWS_AS(gen_synthetic(spec), Error);
  spec.n_train = 2;
  spec.noise_sigma = -0.5;
  CHECK_THROWS_AS(gen_synthetic(spec), Error);
  spec.noise_sigma = 0.0;
  spec.task_names = {"t0", "t0"};
  CHECK_THROWS_AS(gen_synthetic(spec), Error);
  spec.task_names = {"t0"};
  spec.n_test = search_space_size();  // train + test exceeds capacity
  CHECK_THROWS_AS(gen_synthetic(spec), Error);
}

TEST_CASE("noise changes rankings but keeps them valid permutations") {
  BenchmarkSpec spec;
  spec.n_train = 30;
  spec.n_test = 30;
  spec.task_names = {"t0", "t1"};
  spec.seed = 13;
  const SyntheticBenchmark clean = gen_synthetic(spec);
  spec.noise_sigma = 5.0;
  const SyntheticBenchmark noisy = gen_synthetic(spec);
  CHECK(clean.train_archs.archs == noisy.train_archs.archs);
  CHECK(clean.train_ranks.ranks != noisy.train_ranks.ranks);
  CHECK_NOTHROW(validate_rank_table(noisy.train_ranks));
  CHECK_NOTHROW(validate_rank_table(noisy.test_ranks));
}

TEST_CASE("quadratic family adds interaction structure deterministically") {
  BenchmarkSpec spec;
  spec.n_train = 20;
  spec.n_test = 0;
  spec.task_names = {"t0"};
  spec.seed = 19;
  spec.family = ScoringFamily::quadratic_interaction;
  const SyntheticBenchmark a = gen_synthetic(spec);
  const SyntheticBenchmark b = gen_synthetic(spec);
  CHECK(a.train_ranks.ranks == b.train_ranks.ranks);
  spec.family = ScoringFamily::additive_linear;
  const SyntheticBenchmark lin = gen_synthetic(spec);
  CHECK(a.train_ranks.ranks != lin.train_ranks.ranks);
}

TEST_CASE("benchmark generation meets the desk-scale time budget") {
  BenchmarkSpec spec;
  spec.n_train = 500;
  spec.n_test = 5000;
  spec.task_names.clear();
  for (int t = 1; t <= 8; ++t) spec.task_names.push_back("task_" + std::to_string(t));
  spec.seed = 7001;
  const auto start = std::chrono::steady_clock::now();
  const SyntheticBenchmark bench = gen_synthetic(spec);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(bench.train_archs.size() == 500);
  CHECK(bench.test_archs.size() == 5000);
  CHECK(secs < 10.0);
}
