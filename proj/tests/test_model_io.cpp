#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hdrank/error.hpp"
#include "hdrank/model_io.hpp"
#include "hdrank/rng.hpp"

using namespace hdrank;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "hdrank_model_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir / name;
}

AssociativeMemory sample_model() {
  AssociativeMemory model;
  model.task_names = {"task_1", "task_2", "task_3"};
  model.dim = 257;  // deliberately not a multiple of 64
  model.scheme = Scheme::gram;
  model.master_seed = 0xfeedface12345678ULL;
  model.config.gamma0 = 1.0;
  model.config.mu = 0.5;
  model.config.weight_mode = WeightMode::paper_literal;
  model.config.retrain_max_epochs = 7;
  model.config.decay = 0.75;
  model.config.stop_threshold = 0.002;
  DetRng rng(31337, "model-io");
  for (std::size_t t = 0; t < model.task_names.size(); ++t) {
    Hypervector hv(model.dim);
    for (std::size_t i = 0; i < model.dim; ++i) hv[i] = 10.0 * (rng.next_unit() - 0.5);
    model.task_hvs.push_back(std::move(hv));
  }
  return model;
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("model files round-trip bit-exactly") {
  const AssociativeMemory model = sample_model();
  const fs::path path = temp_file("model.hdr");
  save_model(path, model);
  const AssociativeMemory loaded = load_model(path);
  CHECK(loaded.task_names == model.task_names);
  CHECK(loaded.dim == model.dim);
  CHECK(loaded.scheme == model.scheme);
  CHECK(loaded.master_seed == model.master_seed);
  CHECK(loaded.config.gamma0 == model.config.gamma0);
  CHECK(loaded.config.mu == model.config.mu);
  CHECK(loaded.config.weight_mode == model.config.weight_mode);
  CHECK(loaded.config.retrain_max_epochs == model.config.retrain_max_epochs);
  CHECK(loaded.config.decay == model.config.decay);
  CHECK(loaded.config.stop_threshold == model.config.stop_threshold);
  CHECK(loaded.task_hvs == model.task_hvs);
}

TEST_CASE("model serialization is byte-deterministic") {
  const AssociativeMemory model = sample_model();
  const fs::path a = temp_file("model_a.hdr");
  const fs::path b = temp_file("model_b.hdr");
  save_model(a, model);
  save_model(b, model);
  CHECK(read_bytes(a) == read_bytes(b));
}

TEST_CASE("loader rejects foreign and truncated files") {
  const fs::path bogus = temp_file("bogus.hdr");
  {
    std::ofstream out(bogus, std::ios::binary);
    out << "definitely not a model";
  }
  CHECK_THROWS_AS(load_model(bogus), Error);

  const fs::path truncated = temp_file("truncated.hdr");
  save_model(truncated, sample_model());
  const std::string bytes = read_bytes(truncated);
  {
    std::ofstream out(truncated, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
  }
  CHECK_THROWS_AS(load_model(truncated), Error);

  CHECK_THROWS_AS(load_model(temp_file("missing.hdr")), Error);
}
