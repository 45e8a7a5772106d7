#include "bq/report.hpp"

namespace bq {

using nlohmann::ordered_json;

ordered_json to_json(const BoundedValue& v) {
  ordered_json j;
  j["value"] = v.value;
  j["direction"] = to_string(v.direction);
  j["method"] = v.method;
  ordered_json res = ordered_json::object();
  for (const auto& [k, r] : v.residuals) res[k] = r;
  j["residuals"] = res;
  j["converged"] = v.converged;
  j["flagged"] = v.flagged;
  j["iterations_used"] = v.iterations_used;
  j["restart_index"] = v.restart_index;
  j["notes"] = v.notes;
  return j;
}

ordered_json to_json(const OptimizerConfig& cfg) {
  ordered_json j;
  j["max_iters"] = cfg.max_iters;
  j["restarts"] = cfg.restarts;
  j["master_seed"] = cfg.master_seed;
  j["step_init"] = cfg.step_init;
  j["penalty_schedule"] = cfg.penalty_schedule;
  j["tol_objective"] = cfg.tol_objective;
  j["tol_residual"] = cfg.tol_residual;
  j["jobs"] = cfg.jobs;
  j["lbfgs_memory"] = cfg.lbfgs_memory;
  return j;
}

ordered_json to_json(const RunManifest& m) {
  ordered_json j;
  j["command"] = m.command;
  j["tool_version"] = kToolVersion;
  j["seed"] = m.config.master_seed;
  // jobs only changes scheduling, never results, so it stays out of hashed output
  ordered_json cfg = to_json(m.config);
  cfg.erase("jobs");
  j["config"] = cfg;
  j["max_dim"] = m.max_dim;
  if (m.wall_time) {
    j["jobs"] = m.config.jobs;
    j["wall_time"] = *m.wall_time;
  }
  return j;
}

ordered_json to_json(const ChainReport& report) {
  ordered_json j;
  j["state"] = report.state;
  ordered_json entries = ordered_json::object();
  for (const auto& [name, v] : report.entries) {
    ordered_json e;
    e["value"] = v.value;
    e["direction"] = to_string(v.direction);
    ordered_json res = ordered_json::object();
    for (const auto& [k, r] : v.residuals) res[k] = r;
    e["residuals"] = res;
    e["method"] = v.method;
    entries[name] = e;
  }
  j["entries"] = entries;
  ordered_json checks = ordered_json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}});
  j["checks"] = checks;
  j["ensemble_entropy"] = report.ensemble_entropy;
  j["verdict"] = to_string(report.verdict);
  j["notes"] = report.notes;
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace bq
