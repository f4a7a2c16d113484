#include "swrl/cli/manifest.hpp"

#include <fstream>

#include <openssl/evp.h>

#include "swrl/errors.hpp"

namespace swrl::cli {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    fail(Errc::InvalidArgument, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["tool"] = "swrl";
  j["tool_version"] = tool_version;
  j["config"] = config;
  j["config_sha256"] = config_sha256;
  j["wall_time_seconds"] = wall_time_seconds;
  j["threads"] = threads;
  j["simd_level"] = simd_level;
  j["tolerances"] = tolerances;
  j["outputs"] = nlohmann::json::array();
  for (const auto& o : outputs) {
    j["outputs"].push_back({{"path", o.path}, {"sha256", o.sha256}, {"bytes", o.bytes}});
  }
  j["exit_code"] = exit_code;
  if (!error.empty()) j["error"] = error;
  return j;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  std::filesystem::path p = output;
  p += ".manifest.json";
  return p;
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::UsageError, "output: cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) fail(Errc::UsageError, "output: write to '" + path.string() + "' failed");
}

}  // namespace swrl::cli
