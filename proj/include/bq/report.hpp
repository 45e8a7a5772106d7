#pragma once

// Machine-readable output: JSON for bounded values, chain reports and run
// manifests. Everything except the manifest's wall time is a pure function of
// the inputs, so identical runs produce identical bytes.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "bq/entms.hpp"
#include "bq/optim.hpp"

namespace bq {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunManifest {
  std::string command;
  OptimizerConfig config;
  int max_dim = 0;
  std::optional<double> wall_time;  // seconds; only written to sidecar files
};

nlohmann::ordered_json to_json(const BoundedValue& v);
nlohmann::ordered_json to_json(const OptimizerConfig& cfg);
nlohmann::ordered_json to_json(const RunManifest& m);
nlohmann::ordered_json to_json(const ChainReport& report);

/// Two-space indented dump with a trailing newline.
std::string dump(const nlohmann::ordered_json& j);

}  // namespace bq
