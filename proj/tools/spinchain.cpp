// spinchain: simulate the Shor N=4 protocol on a four-spin Ising chain.
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "spinchain/cli.hpp"

namespace cli = spinchain::cli;

int main(int argc, char** argv) {
  CLI::App app{"Four-spin Ising chain quantum computer: Shor N=4 simulation"};
  app.fallthrough();
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;
  std::optional<unsigned> threads;
  std::optional<double> step, jprime, j, rabi;
  std::optional<double> jprime_first, jprime_last, jprime_step;
  std::optional<double> omega_first, omega_last, omega_step;
  std::optional<long> k_min, k_max;
  std::optional<int> stride, shots;
  std::optional<unsigned long> seed;

  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads for sweeps (0 = all cores)");
  app.add_option("--step", step, "fixed integration step in us");
  app.add_option("--j", j, "first-neighbour coupling J (2*pi*MHz)");
  app.add_option("--jprime", jprime, "second-neighbour coupling J' (2*pi*MHz)");
  app.add_option("--rabi", rabi, "Rabi frequency (2*pi*MHz)");

  auto* run = app.add_subcommand("run-shor", "run the 12-pulse protocol once");
  run->add_option("--stride", stride, "record every Nth integration step");
  run->add_option("--shots", shots, "sample this many x-register measurements");
  run->add_option("--seed", seed, "seed for measurement sampling");

  std::string var;
  auto* sweep = app.add_subcommand("sweep", "fidelity curve over J'/J or the Rabi frequency");
  sweep->add_option("--var", var, "swept variable")
      ->required()
      ->check(CLI::IsMember({"jprime", "omega"}));
  sweep->add_option("--jprime-first", jprime_first);
  sweep->add_option("--jprime-last", jprime_last);
  sweep->add_option("--jprime-step", jprime_step);
  sweep->add_option("--omega-first", omega_first);
  sweep->add_option("--omega-last", omega_last);
  sweep->add_option("--omega-step", omega_step);

  auto* table = app.add_subcommand("rabi-table", "2*pi*k Rabi frequencies for the detuning catalog");
  table->add_option("--k-min", k_min);
  table->add_option("--k-max", k_max);

  auto* selftest = app.add_subcommand("selftest", "oracle, norm, convergence and picture checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kSuccess : cli::kUsageError;
  }

  cli::RunConfig cfg;
  try {
    if (config_path) cfg = cli::load_config(*config_path);
  } catch (const spinchain::Error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return cli::kUsageError;
  }
  if (out_dir) cfg.out_dir = *out_dir;
  if (threads) cfg.threads = *threads;
  if (step) cfg.step_us = *step;
  if (j) cfg.j_mhz = *j;
  if (jprime) cfg.jprime_mhz = *jprime;
  if (rabi) cfg.rabi_mhz = *rabi;
  if (jprime_first) cfg.jprime_first = *jprime_first;
  if (jprime_last) cfg.jprime_last = *jprime_last;
  if (jprime_step) cfg.jprime_step = *jprime_step;
  if (omega_first) cfg.omega_first = *omega_first;
  if (omega_last) cfg.omega_last = *omega_last;
  if (omega_step) cfg.omega_step = *omega_step;
  if (k_min) cfg.k_min = *k_min;
  if (k_max) cfg.k_max = *k_max;
  if (stride) cfg.record_stride = *stride;
  if (shots) cfg.sample_shots = *shots;
  if (seed) cfg.seed = *seed;

  if (*run) return cli::cmd_run_shor(cfg, std::cout);
  if (*sweep) {
    const auto variable =
        var == "jprime" ? spinchain::SweepVariable::jprime_ratio : spinchain::SweepVariable::omega;
    return cli::cmd_sweep(cfg, variable, std::cout);
  }
  if (*table) return cli::cmd_rabi_table(cfg, std::cout);
  if (*selftest) return cli::cmd_selftest(cfg, std::cout);
  return cli::kUsageError;
}
