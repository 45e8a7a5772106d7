// bq: command-line front end.
//
//   bq state   --family werner --p 0.9 --out w.json
//   bq measure --in w.json --measure ecsq --seed 7 --json
//   bq curve   --in w.json --max-copies 3 --out w.csv
//   bq chain   --in w.json --out w.chain.json
//   bq verify  --suite thm1
//
// Exit codes: 0 ok, 1 verification failure, 2 input error, 3 solver
// failure, 4 dimension cap exceeded.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "bq/broadcast.hpp"
#include "bq/entms.hpp"
#include "bq/measures.hpp"
#include "bq/report.hpp"
#include "bq/verify.hpp"

namespace {

using bq::RunManifest;
using nlohmann::ordered_json;

enum Exit { kOk = 0, kVerifyFailed = 1, kInput = 2, kSolver = 3, kCap = 4 };

struct Options {
  std::uint64_t seed = 0;
  int jobs = 1;
  int restarts = 8;
  int max_iters = 400;
  int max_dim = bq::kDefaultMaxDim;
  std::string command;

  bq::OptimizerConfig config() const {
    bq::OptimizerConfig cfg;
    cfg.master_seed = seed;
    cfg.jobs = jobs;
    cfg.restarts = restarts;
    cfg.max_iters = max_iters;
    cfg.validate();
    return cfg;
  }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw bq::InputError(path, "cannot open for writing");
  out << text;
  if (!out) throw bq::InputError(path, "write failed");
}

void write_sidecar(const std::string& path, const Options& opt, double seconds) {
  RunManifest m{opt.command, opt.config(), opt.max_dim, seconds};
  write_file(path + ".manifest.json", bq::dump(to_json(m)));
}

int default_max_dim() {
  if (const char* env = std::getenv("BQ_MAX_DIM")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid BQ_MAX_DIM='" << env << "'\n";
  }
  return bq::kDefaultMaxDim;
}

std::string joined_args(int argc, char** argv) {
  std::string s = "bq";
  for (int i = 1; i < argc; ++i) s += std::string(" ") + argv[i];
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Broadcast mutual information and entanglement bounds for small bipartite states"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Options opt;
  opt.jobs = std::max(1u, std::thread::hardware_concurrency());
  opt.max_dim = default_max_dim();
  opt.command = joined_args(argc, argv);
  app.add_option("--seed", opt.seed, "master seed (restart i uses seed + i)")->capture_default_str();
  app.add_option("--jobs", opt.jobs, "concurrent restarts")->check(CLI::PositiveNumber);
  app.add_option("--restarts", opt.restarts, "random restarts per solve")->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--max-iters", opt.max_iters, "iterations per penalty stage")->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--max-dim", opt.max_dim, "cap on the joint n-copy dimension (env BQ_MAX_DIM)")
      ->check(CLI::PositiveNumber);

  // state
  auto* state_cmd = app.add_subcommand("state", "write a state file");
  std::string family, out_path, path;
  std::map<std::string, double> params;
  state_cmd->add_option("--family", family, "bell, cc, product-mix, werner, isotropic, random, file")->required();
  for (const char* name : {"p", "q", "p00", "p01", "p10", "p11", "dA", "dB", "rank"}) {
    state_cmd->add_option_function<double>(std::string("--") + name,
                                           [&params, name](double v) { params[name] = v; }, "family parameter");
  }
  state_cmd->add_option("--path", path, "input state file (family 'file')");
  state_cmd->add_option("--out", out_path, "output path (stdout when omitted)");

  // measure
  auto* measure_cmd = app.add_subcommand("measure", "compute one quantity");
  std::string in_path, measure;
  int outcomes = 0, ensemble_size = 0, ext_dim = 0, env_dim = 0;
  bool as_json = false;
  measure_cmd->add_option("--in", in_path, "state file")->required();
  measure_cmd->add_option("--measure", measure, "quantity")
      ->required()
      ->check(CLI::IsMember({"mi", "ic", "ecsq", "esq", "cemi", "eiclower"}));
  measure_cmd->add_option("--outcomes", outcomes, "POVM outcomes per side for ic (default d^2)");
  measure_cmd->add_option("--ensemble-size", ensemble_size, "ensemble size for ecsq (default rank^2)");
  measure_cmd->add_option("--ext-dim", ext_dim, "extension dimension: E for esq, A' and B' for cemi");
  measure_cmd->add_option("--env-dim", env_dim, "discarded environment dimension");
  measure_cmd->add_option("--out", out_path, "write the JSON report here");
  measure_cmd->add_flag("--json", as_json, "print the JSON report");

  // curve
  auto* curve_cmd = app.add_subcommand("curve", "growth curve of the broadcast mutual information");
  int max_copies = 3;
  curve_cmd->add_option("--in", in_path, "state file")->required();
  curve_cmd->add_option("--max-copies", max_copies, "largest copy count")->capture_default_str();
  curve_cmd->add_option("--out", out_path, "CSV output (stdout when omitted)");

  // chain
  auto* chain_cmd = app.add_subcommand("chain", "bound-ordering report");
  int chain_copies = 2;
  chain_cmd->add_option("--in", in_path, "state file")->required();
  chain_cmd->add_option("--max-copies", chain_copies, "largest copy count")->capture_default_str();
  chain_cmd->add_option("--out", out_path, "JSON output (stdout when omitted)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  std::string suite = "all";
  verify_cmd->add_option("--suite", suite, "thm1, thm2, chain or all")
      ->check(CLI::IsMember({"thm1", "thm2", "chain", "all"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    const bq::OptimizerConfig cfg = opt.config();

    if (*state_cmd) {
      bq::StateSpec spec;
      spec.family = family;
      spec.params = params;
      spec.seed = opt.seed;
      spec.path = path;
      const bq::DensityOperator rho = bq::make_state(spec);
      if (out_path.empty())
        std::cout << bq::state_to_json(rho);
      else
        bq::save_state(out_path, rho);
      return kOk;
    }

    if (*measure_cmd) {
      const bq::DensityOperator rho = bq::load_state(in_path);
      const int da = rho.layout().side_dim(bq::Side::A);
      const int db = rho.layout().side_dim(bq::Side::B);
      bq::BoundedValue v;
      if (measure == "mi") {
        v.value = bq::mutual_information(rho);
        v.direction = bq::Direction::exact;
        v.method = "eigendecomposition";
      } else if (measure == "ic") {
        const int k = outcomes > 0 ? outcomes : std::max(da, db) * std::max(da, db);
        v = bq::classical_mi_max(rho, k, cfg).bound;
      } else if (measure == "ecsq") {
        v = bq::ecsq_upper(rho, ensemble_size, cfg).bound;
      } else if (measure == "esq") {
        v = bq::esq_upper(rho, bq::ExtensionSpec::squashed(ext_dim > 0 ? ext_dim : rho.dim(), env_dim), cfg).bound;
      } else if (measure == "cemi") {
        const bq::ExtensionSpec spec =
            ext_dim > 0 ? bq::ExtensionSpec::cemi(ext_dim, ext_dim, env_dim) : bq::ExtensionSpec::cemi(da, db, env_dim);
        v = bq::cemi_upper(rho, spec, cfg).bound;
      } else {
        v = bq::eic_lower(rho, bq::default_ic_povm(da), bq::default_ic_povm(db), cfg).bound;
      }
      ordered_json report;
      report["measure"] = measure;
      report["result"] = bq::to_json(v);
      report["manifest"] = bq::to_json(RunManifest{opt.command, cfg, opt.max_dim, std::nullopt});
      if (!out_path.empty()) {
        write_file(out_path, bq::dump(report));
        write_sidecar(out_path, opt, seconds_since(t0));
      }
      if (as_json)
        std::cout << bq::dump(report);
      else
        std::printf("%s = %.12g (%s; %s)\n", measure.c_str(), v.value, bq::to_string(v.direction).c_str(),
                    v.method.c_str());
      return v.flagged ? kSolver : kOk;
    }

    if (*curve_cmd) {
      const bq::DensityOperator rho = bq::load_state(in_path);
      bq::GrowthOptions gopts;
      gopts.max_dim = opt.max_dim;
      const bq::GrowthCurve curve = bq::growth_curve(rho, max_copies, cfg, gopts);
      const std::string csv = bq::growth_curve_csv(curve);
      if (out_path.empty()) {
        std::cout << csv;
      } else {
        write_file(out_path, csv);
        write_sidecar(out_path, opt, seconds_since(t0));
      }
      std::printf("classification: %s\n", bq::to_string(curve.classification).c_str());
      if (curve.certificate) std::printf("certificate: %.12g\n", *curve.certificate);
      std::printf("best per-copy upper: %.12g\n", curve.best_per_copy_upper);
      for (const auto& pt : curve.per_n)
        if (pt.upper.flagged) return kSolver;
      return kOk;
    }

    if (*chain_cmd) {
      const bq::DensityOperator rho = bq::load_state(in_path);
      bq::ChainOptions copts;
      copts.n_max = chain_copies;
      copts.max_dim = opt.max_dim;
      copts.state_name = in_path;
      const bq::ChainReport report = bq::chain_report(rho, cfg, copts);
      ordered_json j = bq::to_json(report);
      j["manifest"] = bq::to_json(RunManifest{opt.command, cfg, opt.max_dim, std::nullopt});
      if (out_path.empty()) {
        std::cout << bq::dump(j);
      } else {
        write_file(out_path, bq::dump(j));
        write_sidecar(out_path, opt, seconds_since(t0));
        std::printf("verdict: %s\n", bq::to_string(report.verdict).c_str());
      }
      for (const auto& [name, v] : report.entries)
        if (v.flagged) return kSolver;
      return kOk;
    }

    if (*verify_cmd) {
      const bq::SuiteReport report = bq::verify_suite(suite, cfg, opt.max_dim);
      std::cout << report.table();
      return report.all_passed() ? kOk : kVerifyFailed;
    }
  } catch (const bq::CapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCap;
  } catch (const bq::SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolver;
  } catch (const bq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kOk;
}
