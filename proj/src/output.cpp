#include "mflab/output.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mflab/errors.hpp"

namespace mflab {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw NumericalError("sha256: digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string write_output(const std::string& dir, const std::string& name, const std::string& bytes) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory '" + dir + "': " + ec.message());
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ValidationError("write failed for '" + path.string() + "'");
  return sha256_hex(bytes);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string manifest_to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["tool"] = m.tool;
  j["version"] = m.version;
  j["command"] = m.command;
  j["args"] = m.args;
  j["model_path"] = m.model_path;
  j["model_text"] = m.model_text;
  j["model_digest"] = m.model_digest;
  j["seed"] = m.seed;
  j["threads"] = m.threads;
  j["timestamp"] = m.timestamp;
  j["outputs"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.outputs) j["outputs"][k] = v;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("manifest: ") + e.what());
  }
  RunManifest m;
  try {
    m.tool = j.at("tool");
    m.version = j.at("version");
    m.command = j.at("command");
    m.args = j.at("args").get<std::vector<std::string>>();
    m.model_path = j.value("model_path", "");
    m.model_text = j.at("model_text");
    m.model_digest = j.at("model_digest");
    m.seed = j.at("seed");
    m.threads = j.value("threads", 1u);
    m.timestamp = j.value("timestamp", "");
    for (auto& [k, v] : j.at("outputs").items()) m.outputs[k] = v.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("manifest: missing or malformed field: ") + e.what());
  }
  return m;
}

}  // namespace mflab
