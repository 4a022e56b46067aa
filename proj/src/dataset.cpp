#include "hdrank/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "hdrank/error.hpp"
#include "hdrank/rng.hpp"

namespace hdrank {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string read_line(std::istream& in, bool& ok) {
  std::string line;
  ok = static_cast<bool>(std::getline(in, line));
  if (ok && !line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

int parse_int_field(const std::string& field, const std::string& what, std::size_t line_no) {
  std::size_t pos = 0;
  int value = 0;
  try {
    value = std::stoi(field, &pos);
  } catch (...) {
    fail(ErrorCategory::format,
         "line " + std::to_string(line_no) + ": " + what + " is not an integer: '" + field + "'");
  }
  if (pos != field.size())
    fail(ErrorCategory::format,
         "line " + std::to_string(line_no) + ": " + what + " is not an integer: '" + field + "'");
  return value;
}

std::string arch_header() {
  std::string h = "arch_id,depth";
  for (int i = 1; i <= static_cast<int>(kMaxLayers); ++i) h += ",head_" + std::to_string(i);
  for (int i = 1; i <= static_cast<int>(kMaxLayers); ++i) h += ",mlp_" + std::to_string(i);
  return h;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCategory::io, "cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary: byte-identical across platforms
  if (!out) fail(ErrorCategory::io, "cannot write " + path.string());
  return out;
}

}  // namespace

ArchTable load_arch_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  bool ok = false;
  const std::string header = read_line(in, ok);
  if (!ok) fail(ErrorCategory::format, path.string() + ": empty file (missing header)");
  if (header != arch_header())
    fail(ErrorCategory::format, path.string() + ": unexpected header '" + header + "'");

  ArchTable table;
  std::unordered_set<std::string> seen_ids;
  std::size_t line_no = 1;
  for (;;) {
    const std::string line = read_line(in, ok);
    if (!ok) break;
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2 + 2 * kMaxLayers)
      fail(ErrorCategory::format, path.string() + ": line " + std::to_string(line_no) +
                                      ": expected " + std::to_string(2 + 2 * kMaxLayers) +
                                      " fields, got " + std::to_string(fields.size()));
    const std::string& id = fields[0];
    if (id.empty())
      fail(ErrorCategory::format,
           path.string() + ": line " + std::to_string(line_no) + ": empty arch_id");
    if (!seen_ids.insert(id).second)
      fail(ErrorCategory::format,
           path.string() + ": line " + std::to_string(line_no) + ": duplicate arch_id '" + id + "'");

    const int depth = parse_int_field(fields[1], "depth", line_no);
    if (depth < kMinDepth || depth > kMaxDepth)
      fail(ErrorCategory::domain, path.string() + ": line " + std::to_string(line_no) +
                                      ": depth " + std::to_string(depth) + " outside {10,11,12}");

    ArchDescriptor arch;
    arch.layers.resize(static_cast<std::size_t>(depth));
    for (std::size_t i = 0; i < kMaxLayers; ++i) {
      const std::string head_name = "head_" + std::to_string(i + 1);
      const std::string mlp_name = "mlp_" + std::to_string(i + 1);
      const int head = parse_int_field(fields[2 + i], head_name, line_no);
      const int mlp = parse_int_field(fields[2 + kMaxLayers + i], mlp_name, line_no);
      if (i < static_cast<std::size_t>(depth)) {
        if (head < kCodeMin || head > kCodeMax)
          fail(ErrorCategory::domain, path.string() + ": line " + std::to_string(line_no) + ": " +
                                          head_name + " = " + std::to_string(head) +
                                          " outside {1,2,3}");
        if (mlp < kCodeMin || mlp > kCodeMax)
          fail(ErrorCategory::domain, path.string() + ": line " + std::to_string(line_no) + ": " +
                                          mlp_name + " = " + std::to_string(mlp) +
                                          " outside {1,2,3}");
        arch.layers[i] = LayerParams{head, mlp};
      } else {
        if (head != 0 || mlp != 0)
          fail(ErrorCategory::domain, path.string() + ": line " + std::to_string(line_no) +
                                          ": nonzero padding at position " + std::to_string(i + 1) +
                                          " beyond depth " + std::to_string(depth));
      }
    }
    table.ids.push_back(id);
    table.archs.push_back(std::move(arch));
  }
  return table;
}

void write_arch_csv(const std::filesystem::path& path, const ArchTable& table) {
  std::ofstream out = open_output(path);
  out << arch_header() << "\n";
  for (std::size_t n = 0; n < table.size(); ++n) {
    const auto& arch = table.archs[n];
    out << table.ids[n] << ',' << arch.depth();
    for (std::size_t i = 0; i < kMaxLayers; ++i)
      out << ',' << (i < arch.depth() ? arch.layers[i].head_code : 0);
    for (std::size_t i = 0; i < kMaxLayers; ++i)
      out << ',' << (i < arch.depth() ? arch.layers[i].mlp_code : 0);
    out << '\n';
  }
  if (!out) fail(ErrorCategory::io, "write failed: " + path.string());
}

RankCsv load_rank_csv(const std::filesystem::path& path, std::optional<std::size_t> expected_n) {
  std::ifstream in = open_input(path);
  bool ok = false;
  const std::string header = read_line(in, ok);
  if (!ok) fail(ErrorCategory::format, path.string() + ": empty file (missing header)");
  const auto head_fields = split_csv_line(header);
  if (head_fields.size() < 2 || head_fields[0] != "arch_id")
    fail(ErrorCategory::format, path.string() + ": unexpected header '" + header + "'");

  RankCsv out;
  out.table.task_names.assign(head_fields.begin() + 1, head_fields.end());
  {
    std::unordered_set<std::string> names(out.table.task_names.begin(),
                                          out.table.task_names.end());
    if (names.size() != out.table.task_names.size())
      fail(ErrorCategory::format, path.string() + ": duplicate task name in header");
  }
  const std::size_t t_count = out.table.task_names.size();
  out.table.ranks.resize(t_count);

  std::unordered_set<std::string> seen_ids;
  std::size_t line_no = 1;
  for (;;) {
    const std::string line = read_line(in, ok);
    if (!ok) break;
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 1 + t_count)
      fail(ErrorCategory::format, path.string() + ": line " + std::to_string(line_no) +
                                      ": expected " + std::to_string(1 + t_count) +
                                      " fields, got " + std::to_string(fields.size()));
    if (fields[0].empty())
      fail(ErrorCategory::format,
           path.string() + ": line " + std::to_string(line_no) + ": empty arch_id");
    if (!seen_ids.insert(fields[0]).second)
      fail(ErrorCategory::format, path.string() + ": line " + std::to_string(line_no) +
                                      ": duplicate arch_id '" + fields[0] + "'");
    out.arch_ids.push_back(fields[0]);
    for (std::size_t t = 0; t < t_count; ++t) {
      out.table.ranks[t].push_back(
          parse_int_field(fields[1 + t], "rank for " + out.table.task_names[t], line_no));
    }
  }

  if (expected_n && out.arch_ids.size() != *expected_n)
    fail(ErrorCategory::format, path.string() + ": expected " + std::to_string(*expected_n) +
                                    " rows, got " + std::to_string(out.arch_ids.size()));
  try {
    validate_rank_table(out.table);
  } catch (const Error& e) {
    fail(e.category(), path.string() + ": " + e.what());
  }
  return out;
}

void write_pred_csv(const std::filesystem::path& path, std::span<const std::string> arch_ids,
                    const RankTable& table) {
  if (!table.ranks.empty() && arch_ids.size() != table.n_archs())
    fail(ErrorCategory::internal, "write_pred_csv: id/rank row count mismatch");
  std::ofstream out = open_output(path);
  out << "arch_id";
  for (const auto& name : table.task_names) out << ',' << name;
  out << '\n';
  for (std::size_t n = 0; n < arch_ids.size(); ++n) {
    out << arch_ids[n];
    for (std::size_t t = 0; t < table.n_tasks(); ++t) out << ',' << table.ranks[t][n];
    out << '\n';
  }
  if (!out) fail(ErrorCategory::io, "write failed: " + path.string());
}

ScoringFamily scoring_family_from_string(const std::string& name) {
  if (name == "additive_linear" || name == "additive-linear") return ScoringFamily::additive_linear;
  if (name == "quadratic_interaction" || name == "quadratic-interaction")
    return ScoringFamily::quadratic_interaction;
  fail(ErrorCategory::usage, "unknown scoring family '" + name +
                                 "' (expected additive_linear|quadratic_interaction)");
}

const char* to_string(ScoringFamily family) noexcept {
  return family == ScoringFamily::additive_linear ? "additive_linear" : "quadratic_interaction";
}

HiddenScorer HiddenScorer::make(std::uint64_t seed, std::size_t n_tasks, ScoringFamily family,
                                double noise_sigma) {
  HiddenScorer scorer;
  scorer.family_ = family;
  scorer.noise_sigma_ = noise_sigma;
  scorer.linear_.resize(n_tasks);
  scorer.quad_.resize(n_tasks);
  for (std::size_t t = 0; t < n_tasks; ++t) {
    DetRng lin(seed, "scorer/lin/" + std::to_string(t));
    scorer.linear_[t].resize(kMaxLayers * 6);
    for (auto& c : scorer.linear_[t]) c = lin.next_normal();
    if (family == ScoringFamily::quadratic_interaction) {
      DetRng quad(seed, "scorer/quad/" + std::to_string(t));
      scorer.quad_[t].resize(kMaxLayers * 9);
      // interaction terms at half the linear scale
      for (auto& c : scorer.quad_[t]) c = 0.5 * quad.next_normal();
    }
  }
  return scorer;
}

double HiddenScorer::score(const ArchDescriptor& arch, std::size_t task) const {
  if (task >= linear_.size()) fail(ErrorCategory::internal, "scorer task index out of range");
  const auto& lin = linear_[task];
  double s = 0.0;
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const auto& lp = arch.layers[i];
    s += lin[i * 6 + static_cast<std::size_t>(lp.head_code - 1)];
    s += lin[i * 6 + 3 + static_cast<std::size_t>(lp.mlp_code - 1)];
  }
  if (family_ == ScoringFamily::quadratic_interaction) {
    const auto& quad = quad_[task];
    for (std::size_t i = 0; i < arch.layers.size(); ++i) {
      const auto& lp = arch.layers[i];
      s += quad[i * 9 + static_cast<std::size_t>(lp.head_code - 1) * 3 +
                static_cast<std::size_t>(lp.mlp_code - 1)];
    }
  }
  return s;
}

std::int64_t search_space_size() noexcept {
  std::int64_t total = 0;
  for (int depth = kMinDepth; depth <= kMaxDepth; ++depth) {
    std::int64_t combos = 1;
    for (int i = 0; i < depth; ++i) combos *= 9;
    total += combos;
  }
  return total;
}

namespace {

// 2 bits per code (values 1..3) plus the depth tag packs any valid
// architecture into one 64-bit key.
std::uint64_t pack_arch(const ArchDescriptor& arch) {
  std::uint64_t key = static_cast<std::uint64_t>(arch.depth());
  for (const auto& lp : arch.layers) {
    key = (key << 2) | static_cast<std::uint64_t>(lp.head_code & 0x3);
    key = (key << 2) | static_cast<std::uint64_t>(lp.mlp_code & 0x3);
  }
  return key;
}

ArchDescriptor sample_arch(DetRng& rng) {
  ArchDescriptor arch;
  const auto depth = static_cast<std::size_t>(kMinDepth + rng.next_below(3));
  arch.layers.resize(depth);
  for (auto& lp : arch.layers) {
    lp.head_code = 1 + static_cast<int>(rng.next_below(3));
    lp.mlp_code = 1 + static_cast<int>(rng.next_below(3));
  }
  return arch;
}

// Ranks by descending score; ties (possible only with degenerate scorers)
// break by ascending index so columns stay strict permutations.
std::vector<int> rank_by_score(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<int> ranks(scores.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    ranks[order[pos]] = static_cast<int>(pos);
  return ranks;
}

RankTable rank_set(const std::vector<ArchDescriptor>& archs, const HiddenScorer& scorer,
                   const BenchmarkSpec& spec, const std::string& set_label) {
  RankTable table;
  table.task_names = spec.task_names;
  table.ranks.resize(spec.task_names.size());
  for (std::size_t t = 0; t < spec.task_names.size(); ++t) {
    DetRng noise(spec.seed, "noise/" + set_label + "/" + std::to_string(t));
    std::vector<double> scores(archs.size());
    for (std::size_t n = 0; n < archs.size(); ++n) {
      scores[n] = scorer.score(archs[n], t);
      if (spec.noise_sigma > 0.0) scores[n] += spec.noise_sigma * noise.next_normal();
    }
    table.ranks[t] = rank_by_score(scores);
  }
  return table;
}

}  // namespace

SyntheticBenchmark gen_synthetic(const BenchmarkSpec& spec) {
  if (spec.n_train < 2) fail(ErrorCategory::config, "n_train must be >= 2");
  if (spec.n_test < 0) fail(ErrorCategory::config, "n_test must be >= 0");
  if (spec.task_names.empty()) fail(ErrorCategory::config, "at least one task required");
  {
    std::unordered_set<std::string> names(spec.task_names.begin(), spec.task_names.end());
    if (names.size() != spec.task_names.size())
      fail(ErrorCategory::config, "task names must be unique");
  }
  if (spec.noise_sigma < 0.0) fail(ErrorCategory::config, "noise sigma must be >= 0");
  const std::int64_t total = spec.n_train + spec.n_test;
  if (total > search_space_size())
    fail(ErrorCategory::config, "requested " + std::to_string(total) +
                                    " distinct architectures but the search space only has " +
                                    std::to_string(search_space_size()));

  SyntheticBenchmark bench;
  bench.spec = spec;
  bench.scorer =
      HiddenScorer::make(spec.seed, spec.task_names.size(), spec.family, spec.noise_sigma);

  DetRng sampler(spec.seed, "arch-sampler");
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(static_cast<std::size_t>(total) * 2);
  std::vector<ArchDescriptor> all;
  all.reserve(static_cast<std::size_t>(total));
  while (all.size() < static_cast<std::size_t>(total)) {
    ArchDescriptor arch = sample_arch(sampler);
    if (seen.insert(pack_arch(arch)).second) all.push_back(std::move(arch));
  }

  char id_buf[32];
  for (std::int64_t n = 0; n < total; ++n) {
    std::snprintf(id_buf, sizeof(id_buf), "a%06lld", static_cast<long long>(n));
    const bool is_train = n < spec.n_train;
    ArchTable& dst = is_train ? bench.train_archs : bench.test_archs;
    dst.ids.emplace_back(id_buf);
    dst.archs.push_back(all[static_cast<std::size_t>(n)]);
  }

  bench.train_ranks = rank_set(bench.train_archs.archs, bench.scorer, spec, "train");
  bench.test_ranks = rank_set(bench.test_archs.archs, bench.scorer, spec, "test");
  return bench;
}

}  // namespace hdrank
