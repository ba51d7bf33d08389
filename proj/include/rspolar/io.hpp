#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rspolar/channel.hpp"
#include "rspolar/concat.hpp"
#include "rspolar/polar.hpp"

namespace rspolar {

inline constexpr int kFormatVersion = 1;

/// Provenance carried alongside a code description.
struct DesignMetadata {
  std::string method;        // e.g. "target_rate", "uniform", "baseline"
  double ebn0_db = 0.0;      // channel the reliabilities were estimated on
  double estimate_rate = 0.0;
  std::uint64_t trials = 0;  // estimation trials
  std::uint64_t seed = 0;
  double target_rate = 0.0;
  double pe = 0.0;           // per-sub-block target chosen by the design loop
};

/// Either a concatenated code or a plain polar code, as read from disk.
struct CodeFile {
  std::optional<ConcatCode> concat;
  std::optional<PolarCode> polar;
  DesignMetadata design;

  bool is_concat() const { return concat.has_value(); }
};

nlohmann::json to_json(const ConcatCode& code, const DesignMetadata& meta);
nlohmann::json to_json(const PolarCode& code, const DesignMetadata& meta);
CodeFile code_from_json(const nlohmann::json& doc);
CodeFile load_code(const std::filesystem::path& path);

struct ReliabilityFile {
  std::vector<double> values;
  std::string method;  // "mc" or "bec"
  ChannelParams channel;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const ReliabilityFile& rel);
ReliabilityFile reliability_from_json(const nlohmann::json& doc);
ReliabilityFile load_reliabilities(const std::filesystem::path& path);

nlohmann::json read_json(const std::filesystem::path& path);

/// Writes to a sibling temporary and renames over `path`, so readers never
/// observe a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace rspolar
