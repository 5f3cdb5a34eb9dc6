#pragma once

#include "wk/equivalence.hpp"
#include "wk/kernel.hpp"
#include "wk/seminorms.hpp"
#include "wk/weights.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace wk {

/// Deterministic JSON text: keys sorted, two-space indent, floats printed with
/// 17 significant digits, non-finite floats as null, trailing newline.
std::string canonical_json(const nlohmann::json& value);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

nlohmann::json to_json(const Point& x);
nlohmann::json to_json(const CheckReport& r);
nlohmann::json to_json(const SeminormValue& v);
nlohmann::json to_json(const EquivalenceCertificate& c, const DefiningFamily& family);
nlohmann::json to_json(const EquivalenceReport& r, const DefiningFamily& family);
nlohmann::json to_json(const PietschReport& r, const DefiningFamily& family);
nlohmann::json to_json(const CutoffReport& r);
nlohmann::json to_json(const BoundReport& r, const DefiningFamily& family);
nlohmann::json to_json(const MeanValueReport& r);
nlohmann::json to_json(const AnalyticEquivalenceReport& r, const DefiningFamily& family);
nlohmann::json to_json(const DiffReport& r);
nlohmann::json to_json(const DecayReport& r);

/// rank,singular_value,residual rows.
std::string decay_csv(const DecayReport& r);

struct Artifact {
  std::string file;
  std::string sha256;
  std::size_t bytes;
};

/// Writes report files under one directory and remembers their hashes.
class ReportWriter {
 public:
  explicit ReportWriter(std::filesystem::path dir);

  const Artifact& write(const std::string& name, const std::string& content);
  const std::vector<Artifact>& artifacts() const { return artifacts_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<Artifact> artifacts_;
};

}  // namespace wk
