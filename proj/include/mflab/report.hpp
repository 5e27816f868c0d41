#pragma once

#include <string>
#include <vector>

#include "mflab/models.hpp"

namespace mflab {

struct OracleRecord {
  std::string name;
  std::string method;  // enumeration | closed-form | gaussian-approx | high-precision
  double value = 0.0;
  double tolerance = 0.0;
  std::string note;
};

/// Reference values from deliberately naive routes (50-digit direct formulas,
/// brute-force 2^n enumeration, Gaussian simulation). Shares no code with
/// the spectrum/lil/qb paths.
std::vector<OracleRecord> build_oracles();

const OracleRecord& find_oracle(const std::vector<OracleRecord>& records, const std::string& name);

struct CrossCheck {
  std::string name;
  double main_value = 0.0;
  double oracle_value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Recomputes every oracle quantity through the main code paths and compares.
std::vector<CrossCheck> cross_check(const std::vector<OracleRecord>& records);

std::string oracles_to_json(const std::vector<OracleRecord>& records);
std::vector<OracleRecord> oracles_from_json(const std::string& text);

/// Name of the versioned cache file.
inline constexpr const char* kOracleCacheFile = "oracles.v1.json";

/// Zoo models as spec texts, keyed by file stem.
std::vector<std::pair<std::string, std::string>> zoo_specs();
MeasureModel zoo_model(const std::string& stem);

}  // namespace mflab
