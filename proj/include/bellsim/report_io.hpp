#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "bellsim/types.hpp"

namespace bellsim {

struct RunMetadata {
  std::string source_label;
  AngleSettings settings;  // radians
  std::uint64_t n_per_pair = 0;
  std::uint64_t seed = 0;
};

/// One JSON object per run, schema "bellsim/chsh-report/1", full double
/// precision.
std::string report_to_json(const RunMetadata& meta, const EventCounts& counts,
                           const ChshReport& report);

/// Flat CSV, one row per setting pair: label, the four counts, xi, SE.
/// The header row is the schema; reals use '.' and fixed 6 decimals.
std::string counts_to_csv(const EventCounts& counts, const ChshReport& report);

/// Throws std::system_error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace bellsim
