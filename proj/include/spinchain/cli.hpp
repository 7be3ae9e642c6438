// Command layer behind the `spinchain` executable: run configuration,
// subcommands and artifact emission.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "spinchain/analysis.hpp"
#include "spinchain/pulse_control.hpp"

namespace spinchain::cli {

enum ExitCode : int { kSuccess = 0, kTestFailure = 1, kUsageError = 2 };

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Flat run configuration. Frequencies are stored in 2*pi*MHz, as written in
/// the configuration file; conversion to rad/us happens in the accessors.
struct RunConfig {
  std::array<double, kNumQubits> larmor_mhz{100.0, 200.0, 400.0, 800.0};
  double j_mhz = 10.0;
  double jprime_mhz = 0.4;
  double rabi_mhz = kReferenceRabiMhz;

  double max_phase_step = kTwoPi / 200.0;
  std::optional<double> step_us;
  int record_stride = 1000;
  double resolution_mhz = 0.5;

  std::filesystem::path out_dir = "out";
  unsigned threads = 0;

  double jprime_first = 0.0;
  double jprime_last = 0.1;
  double jprime_step = 0.002;
  double omega_first = 0.07;
  double omega_last = 0.15;
  double omega_step = 0.0002;

  long k_min = 1;
  long k_max = 300;
  bool extended_catalog = true;

  int sample_shots = 0;
  unsigned long seed = 1;

  ChainParameters params() const;
  double rabi() const { return mhz(rabi_mhz); }
  IntegratorConfig integrator() const;

  /// Throws ConfigError on any invalid field.
  void validate() const;
};

/// Overlays the keys present in `j` onto `base`. Unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json outcome_to_json(const ShorOutcome& outcome, const FidelityReport& fidelity);

/// Header `t,iz0,iz1,iz2,iz3`.
void write_expectations_csv(std::ostream& out, const Trajectory& trajectory);
/// Header `state,x,y,probability`.
void write_distribution_csv(std::ostream& out, const Probabilities& p);

int cmd_run_shor(const RunConfig& cfg, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, SweepVariable variable, std::ostream& log);
int cmd_rabi_table(const RunConfig& cfg, std::ostream& log);
int cmd_selftest(const RunConfig& cfg, std::ostream& log);

}  // namespace spinchain::cli
