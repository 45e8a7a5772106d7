#pragma once

#include <map>
#include <string>

#include "bq/optim.hpp"
#include "bq/states.hpp"

namespace bqtest {

inline bq::DensityOperator family(const std::string& name, std::map<std::string, double> params = {}) {
  bq::StateSpec spec;
  spec.family = name;
  spec.params = std::move(params);
  return bq::make_state(spec);
}

inline bq::DensityOperator basis_pure(int dim_a, int dim_b, int index) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim_a * dim_b);
  psi(index) = 1.0;
  return bq::DensityOperator::pure(bq::SubsystemLayout::bipartite(dim_a, dim_b), psi);
}

inline bq::OptimizerConfig quick_config(std::uint64_t seed = 1, int restarts = 4) {
  bq::OptimizerConfig cfg;
  cfg.master_seed = seed;
  cfg.restarts = restarts;
  return cfg;
}

}  // namespace bqtest
