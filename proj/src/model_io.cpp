#include "hdrank/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "hdrank/error.hpp"

namespace hdrank {

namespace {

constexpr char kMagic[8] = {'H', 'D', 'R', 'A', 'N', 'K', 'M', '1'};

template <typename T>
T to_little_endian(T value) {
  if constexpr (std::endian::native == std::endian::big) {
    T out;
    auto* src = reinterpret_cast<const unsigned char*>(&value);
    auto* dst = reinterpret_cast<unsigned char*>(&out);
    for (std::size_t i = 0; i < sizeof(T); ++i) dst[i] = src[sizeof(T) - 1 - i];
    return out;
  }
  return value;
}

template <typename T>
T from_little_endian(T value) {
  return to_little_endian(value);  // involution
}

}  // namespace

void save_model(const std::filesystem::path& path, const AssociativeMemory& model) {
  nlohmann::ordered_json header;
  header["format"] = "hdrank-model";
  header["version"] = 1;
  header["dim"] = model.dim;
  header["scheme"] = to_string(model.scheme);
  header["master_seed"] = model.master_seed;
  header["weight_mode"] = to_string(model.config.weight_mode);
  header["gamma"] = model.config.gamma0;
  header["mu"] = model.config.mu;
  header["decay"] = model.config.decay;
  header["retrain_max_epochs"] = model.config.retrain_max_epochs;
  header["stop_threshold"] = model.config.stop_threshold;
  header["tasks"] = model.task_names;
  const std::string header_bytes = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCategory::io, "cannot write " + path.string());
  out.write(kMagic, sizeof(kMagic));
  const std::uint64_t len = to_little_endian<std::uint64_t>(header_bytes.size());
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(header_bytes.data(), static_cast<std::streamsize>(header_bytes.size()));
  for (const auto& hv : model.task_hvs) {
    if (hv.dim() != model.dim) fail(ErrorCategory::internal, "model task vector dim mismatch");
    if constexpr (std::endian::native == std::endian::little) {
      out.write(reinterpret_cast<const char*>(hv.data()),
                static_cast<std::streamsize>(hv.dim() * sizeof(double)));
    } else {
      for (std::size_t i = 0; i < hv.dim(); ++i) {
        const double v = hv[i];
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        bits = to_little_endian(bits);
        out.write(reinterpret_cast<const char*>(&bits), sizeof(bits));
      }
    }
  }
  if (!out) fail(ErrorCategory::io, "write failed: " + path.string());
}

AssociativeMemory load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCategory::io, "cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    fail(ErrorCategory::format, path.string() + ": not a model file (bad magic)");
  std::uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  len = from_little_endian(len);
  if (!in || len == 0 || len > (1ULL << 24))
    fail(ErrorCategory::format, path.string() + ": corrupt header length");
  std::string header_bytes(len, '\0');
  in.read(header_bytes.data(), static_cast<std::streamsize>(len));
  if (!in) fail(ErrorCategory::format, path.string() + ": truncated header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_bytes);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCategory::format, path.string() + ": bad header json: " + e.what());
  }
  try {
    if (header.at("format").get<std::string>() != "hdrank-model")
      fail(ErrorCategory::format, path.string() + ": unknown container format");
    if (header.at("version").get<int>() != 1)
      fail(ErrorCategory::format, path.string() + ": unsupported model version " +
                                      std::to_string(header.at("version").get<int>()));
    AssociativeMemory model;
    model.dim = header.at("dim").get<std::size_t>();
    model.scheme = scheme_from_string(header.at("scheme").get<std::string>());
    model.master_seed = header.at("master_seed").get<std::uint64_t>();
    model.config.weight_mode = weight_mode_from_string(header.at("weight_mode").get<std::string>());
    model.config.gamma0 = header.at("gamma").get<double>();
    model.config.mu = header.at("mu").get<double>();
    model.config.decay = header.at("decay").get<double>();
    model.config.retrain_max_epochs = header.at("retrain_max_epochs").get<int>();
    model.config.stop_threshold = header.at("stop_threshold").get<double>();
    model.task_names = header.at("tasks").get<std::vector<std::string>>();

    model.task_hvs.assign(model.task_names.size(), Hypervector(model.dim));
    for (auto& hv : model.task_hvs) {
      in.read(reinterpret_cast<char*>(hv.data()),
              static_cast<std::streamsize>(model.dim * sizeof(double)));
      if (!in) fail(ErrorCategory::format, path.string() + ": truncated task vectors");
      if constexpr (std::endian::native == std::endian::big) {
        for (std::size_t i = 0; i < hv.dim(); ++i) {
          std::uint64_t bits;
          std::memcpy(&bits, hv.data() + i, sizeof(bits));
          bits = from_little_endian(bits);
          std::memcpy(hv.data() + i, &bits, sizeof(bits));
        }
      }
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCategory::format, path.string() + ": bad header field: " + e.what());
  }
}

}  // namespace hdrank
