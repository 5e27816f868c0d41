#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mflab {

/// 17 significant digits, scientific; "nan"/"inf"/"-inf" for non-finite.
std::string format_real(double x);

std::string sha256_hex(const std::string& bytes);

/// Writes bytes to dir/name (creating dir) and returns the SHA-256 digest.
std::string write_output(const std::string& dir, const std::string& name, const std::string& bytes);

std::string read_file(const std::string& path);

struct RunManifest {
  std::string tool = "mflab";
  std::string version;
  std::string command;
  std::vector<std::string> args;  // full argument vector after the program name
  std::string model_path;
  std::string model_text;
  std::string model_digest;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string timestamp;  // UTC, ISO 8601
  std::map<std::string, std::string> outputs;  // file name -> sha256
};

std::string manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const std::string& text);
std::string utc_timestamp();

inline constexpr const char* kManifestFile = "manifest.json";

}  // namespace mflab
