#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace swrl::cli {

std::string sha256_hex(std::string_view bytes);

struct OutputRecord {
  std::string path;
  std::string sha256;
  std::size_t bytes = 0;
};

struct RunManifest {
  nlohmann::json config;
  std::string config_sha256;  // digest of config.dump()
  std::string tool_version;
  double wall_time_seconds = 0.0;
  int threads = 0;
  std::string simd_level;
  nlohmann::json tolerances;
  std::vector<OutputRecord> outputs;
  int exit_code = 0;
  std::string error;

  nlohmann::json to_json() const;
};

/// <output>.manifest.json
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace swrl::cli
