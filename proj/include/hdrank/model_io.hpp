#pragma once

#include <filesystem>

#include "hdrank/ranking.hpp"

namespace hdrank {

// Model container: 8-byte format tag, a length-prefixed JSON header
// (dim, scheme, master seed, weight mode, full training config, task
// names) and one little-endian float64 array per task.  Writes are
// deterministic: identical models serialize to identical bytes.
void save_model(const std::filesystem::path& path, const AssociativeMemory& model);
AssociativeMemory load_model(const std::filesystem::path& path);

}  // namespace hdrank
