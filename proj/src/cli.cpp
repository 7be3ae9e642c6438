#include "spinchain/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>

namespace spinchain::cli {

namespace fs = std::filesystem;
using nlohmann::json;

ChainParameters RunConfig::params() const {
  return ChainParameters::from_mhz(larmor_mhz, j_mhz, jprime_mhz);
}

IntegratorConfig RunConfig::integrator() const {
  IntegratorConfig c;
  c.max_phase_step = max_phase_step;
  c.fixed_step = step_us;
  c.record_stride = record_stride;
  return c;
}

void RunConfig::validate() const {
  try {
    params().validate();
    integrator().validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (!(rabi_mhz > 0.0) || !std::isfinite(rabi_mhz)) throw ConfigError("rabi must be > 0");
  if (!(resolution_mhz >= 0.0)) throw ConfigError("resolution must be >= 0");
  if (!(jprime_step > 0.0) || jprime_last < jprime_first) {
    throw ConfigError("jprime grid needs step > 0 and last >= first");
  }
  if (!(omega_step > 0.0) || omega_last < omega_first || !(omega_first > 0.0)) {
    throw ConfigError("omega grid needs 0 < first <= last and step > 0");
  }
  if (k_min < 1 || k_max < k_min || k_max > kMaxTwoPiK) {
    throw ConfigError("k range must satisfy 1 <= k_min <= k_max <= 1e6");
  }
  if (sample_shots < 0) throw ConfigError("sample_shots must be >= 0");
}

namespace {

template <typename T>
void read(const json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

}  // namespace

RunConfig config_from_json(const json& j, RunConfig base) {
  static const std::set<std::string> known = {
      "larmor",       "j",           "jprime",       "rabi",         "max_phase_step",
      "step",         "record_stride", "resolution", "out",          "threads",
      "jprime_first", "jprime_last", "jprime_step",  "omega_first",  "omega_last",
      "omega_step",   "k_min",       "k_max",        "extended_catalog", "sample_shots",
      "seed"};
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown configuration key: " + key);
  }
  RunConfig c = base;
  try {
    if (j.contains("larmor")) {
      const auto& l = j.at("larmor");
      if (!l.is_array() || l.size() != kNumQubits) {
        throw ConfigError("larmor must be an array of 4 frequencies");
      }
      for (int k = 0; k < kNumQubits; ++k) c.larmor_mhz[k] = l.at(k).get<double>();
    }
    read(j, "j", c.j_mhz);
    read(j, "jprime", c.jprime_mhz);
    read(j, "rabi", c.rabi_mhz);
    read(j, "max_phase_step", c.max_phase_step);
    if (j.contains("step")) {
      if (j.at("step").is_null()) {
        c.step_us.reset();
      } else {
        c.step_us = j.at("step").get<double>();
      }
    }
    read(j, "record_stride", c.record_stride);
    read(j, "resolution", c.resolution_mhz);
    if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
    read(j, "threads", c.threads);
    read(j, "jprime_first", c.jprime_first);
    read(j, "jprime_last", c.jprime_last);
    read(j, "jprime_step", c.jprime_step);
    read(j, "omega_first", c.omega_first);
    read(j, "omega_last", c.omega_last);
    read(j, "omega_step", c.omega_step);
    read(j, "k_min", c.k_min);
    read(j, "k_max", c.k_max);
    read(j, "extended_catalog", c.extended_catalog);
    read(j, "sample_shots", c.sample_shots);
    read(j, "seed", c.seed);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad configuration value: ") + e.what());
  }
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["larmor"] = c.larmor_mhz;
  j["j"] = c.j_mhz;
  j["jprime"] = c.jprime_mhz;
  j["rabi"] = c.rabi_mhz;
  j["max_phase_step"] = c.max_phase_step;
  j["step"] = c.step_us ? json(*c.step_us) : json(nullptr);
  j["record_stride"] = c.record_stride;
  j["resolution"] = c.resolution_mhz;
  j["out"] = c.out_dir.string();
  j["threads"] = c.threads;
  j["jprime_first"] = c.jprime_first;
  j["jprime_last"] = c.jprime_last;
  j["jprime_step"] = c.jprime_step;
  j["omega_first"] = c.omega_first;
  j["omega_last"] = c.omega_last;
  j["omega_step"] = c.omega_step;
  j["k_min"] = c.k_min;
  j["k_max"] = c.k_max;
  j["extended_catalog"] = c.extended_catalog;
  j["sample_shots"] = c.sample_shots;
  j["seed"] = c.seed;
  return j;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("configuration file " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

json outcome_to_json(const ShorOutcome& outcome, const FidelityReport& fidelity) {
  json j;
  j["probabilities"] = std::vector<double>(outcome.probabilities.begin(),
                                           outcome.probabilities.end());
  j["marginal"] = outcome.marginal;
  j["peaks"] = outcome.peaks;
  j["delta_x"] = outcome.peak_spacing;
  j["period"] = outcome.period;
  if (outcome.factors) {
    j["factors"] = {outcome.factors->first, outcome.factors->second};
  } else {
    j["factors"] = nullptr;
  }
  j["fidelity"] = {{"re", fidelity.overlap.real()},
                   {"im", fidelity.overlap.imag()},
                   {"abs", fidelity.magnitude},
                   {"overlap", fidelity.population_overlap}};
  return j;
}

void write_expectations_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "t,iz0,iz1,iz2,iz3\n";
  char buf[32];
  for (const auto& s : trajectory.samples) {
    std::snprintf(buf, sizeof buf, "%.12g", s.time);
    out << buf;
    for (int q = 0; q < kNumQubits; ++q) {
      std::snprintf(buf, sizeof buf, "%.12g", expectation_iz(s.probabilities, q));
      out << ',' << buf;
    }
    out << '\n';
  }
}

void write_distribution_csv(std::ostream& out, const Probabilities& p) {
  out << "state,x,y,probability\n";
  char buf[32];
  for (int m = 0; m < kNumStates; ++m) {
    const BasisState s(m);
    std::snprintf(buf, sizeof buf, "%.12g", p[m]);
    out << m << ',' << s.x_register() << ',' << s.y_register() << ',' << buf << '\n';
  }
}

namespace {

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + (dir / name).string());
  return out;
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

// Runs `body`, mapping library exceptions onto exit codes.
template <typename Body>
int guarded(std::ostream& log, Body&& body) {
  try {
    return body();
  } catch (const ProtocolFailure& e) {
    log << "protocol failed: " << e.what() << "\ndistribution:";
    for (int m = 0; m < kNumStates; ++m) log << ' ' << fmt("%.6g", e.distribution()[m]);
    log << '\n';
    return kTestFailure;
  } catch (const ConfigError& e) {
    log << "configuration error: " << e.what() << '\n';
    return kUsageError;
  } catch (const AddressabilityError& e) {
    log << "addressability error: " << e.what() << '\n';
    return kUsageError;
  } catch (const InvalidArgument& e) {
    log << "invalid argument: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace

int cmd_run_shor(const RunConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    cfg.validate();
    const ChainParameters params = cfg.params();
    IntegratorConfig integ = cfg.integrator();
    ShorOutcome outcome = simulate_protocol(params, cfg.rabi(), integ, mhz(cfg.resolution_mhz));
    const FidelityReport fid = fidelity(expected_wavefunction(), outcome.final_state);

    for (const auto& stage : outcome.stages) {
      auto traj = open_output(cfg.out_dir, "trajectory_" + to_string(stage.name) + ".csv");
      stage.trajectory.write_csv(traj);
      auto iz = open_output(cfg.out_dir, "expectations_" + to_string(stage.name) + ".csv");
      write_expectations_csv(iz, stage.trajectory);
    }
    auto dist = open_output(cfg.out_dir, "final_distribution.csv");
    write_distribution_csv(dist, outcome.probabilities);

    log << "fidelity |F| = " << fmt("%.6f", fid.magnitude)
        << ", population overlap = " << fmt("%.6f", fid.population_overlap) << '\n';
    log << "x-register marginal:";
    for (double v : outcome.marginal) log << ' ' << fmt("%.6f", v);
    log << '\n';

    int status = kSuccess;
    try {
      analyse_marginal(outcome);
      log << "delta x = " << outcome.peak_spacing << ", period T = " << outcome.period << '\n';
      if (outcome.factors) {
        log << "factors: (" << outcome.factors->first << ", " << outcome.factors->second << ")\n";
      } else {
        log << "period is odd; retry with a different q\n";
      }
    } catch (const ProtocolFailure& e) {
      log << "protocol failed: " << e.what() << '\n';
      status = kTestFailure;
    }

    if (cfg.sample_shots > 0) {
      const auto shots = sample_measurements(outcome.marginal, cfg.sample_shots, cfg.seed);
      std::array<int, 4> counts{};
      for (int x : shots) ++counts[x];
      log << "sampled x counts:";
      for (int c : counts) log << ' ' << c;
      log << '\n';
    }

    auto js = open_output(cfg.out_dir, "outcome.json");
    js << outcome_to_json(outcome, fid).dump(2) << '\n';
    return status;
  });
}

int cmd_sweep(const RunConfig& cfg, SweepVariable variable, std::ostream& log) {
  return guarded(log, [&] {
    cfg.validate();
    SweepSpec spec;
    spec.variable = variable;
    spec.base = cfg.params();
    spec.rabi = cfg.rabi();
    if (variable == SweepVariable::jprime_ratio) {
      spec.grid = linear_grid(cfg.jprime_first, cfg.jprime_last, cfg.jprime_step);
    } else {
      for (double w : linear_grid(cfg.omega_first, cfg.omega_last, cfg.omega_step)) {
        spec.grid.push_back(mhz(w));
      }
    }
    const SweepResult result = run_sweep(spec, cfg.integrator(), cfg.threads);
    const auto curve = result.curve();

    const bool ratio = variable == SweepVariable::jprime_ratio;
    auto csv = open_output(cfg.out_dir, ratio ? "sweep_jprime.csv" : "sweep_omega.csv");
    write_sweep_csv(csv, result);

    if (ratio) {
      const auto onset = plateau_onset(spec.grid, curve, 0.99);
      if (onset) {
        log << "plateau (>= 0.99 of max) from J'/J = " << fmt("%.4f", *onset) << '\n';
      } else {
        log << "no plateau reaching 0.99 of the maximum\n";
      }
    } else {
      const auto maxima = local_maxima(curve);
      const auto prom = prominences(curve, maxima);
      const auto [lo, hi] = std::minmax_element(curve.begin(), curve.end());
      const double min_prominence = 0.1 * (*hi - *lo);
      for (std::size_t i = 0; i < maxima.size(); ++i) {
        if (prom[i] < min_prominence) continue;
        log << "peak at omega = " << fmt("%.6f", to_mhz(spec.grid[maxima[i]]))
            << ", overlap = " << fmt("%.6f", curve[maxima[i]]) << '\n';
      }
    }
    return kSuccess;
  });
}

int cmd_rabi_table(const RunConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    cfg.validate();
    const auto rows = rabi_table(cfg.params(), cfg.k_min, cfg.k_max, cfg.extended_catalog);
    auto csv = open_output(cfg.out_dir, "rabi_table.csv");
    write_rabi_table_csv(csv, rows);
    log << rows.size() << " rows written to " << (cfg.out_dir / "rabi_table.csv").string() << '\n';
    return kSuccess;
  });
}

namespace {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

Check check_oracle(const RunConfig& cfg) {
  const ChainParameters params = cfg.params();
  const IntegratorConfig integ = cfg.integrator();
  const double rabi = cfg.rabi();
  const std::array<int, 2> pair = {0, 1};
  const auto couplings = couplings_within(pair);
  const double resonance = transition_frequency(BasisState(1), BasisState(0), params);
  double worst = 0.0;
  for (double detuning : {0.0, 2 * params.j2, 2 * params.j1, 4 * params.j1}) {
    StateVector s;
    s.amplitudes[0] = std::sqrt(0.7);
    s.amplitudes[1] = std::polar(std::sqrt(0.3), 0.4);
    const Pulse pulse{resonance - detuning, 0.0, rabi, std::numbers::pi, std::nullopt};
    const StateVector out = apply_pulse(s, pulse, params, integ, couplings).state;
    const auto [upper, lower] = analytic_evolution(
        TwoLevelSystem{detuning, rabi, s.amplitudes[1], s.amplitudes[0]}, pulse.duration());
    worst = std::max({worst, std::abs(out.amplitudes[1] - upper),
                      std::abs(out.amplitudes[0] - lower)});
  }
  return {"oracle-equivalence", worst <= 1e-8, "max amplitude error " + fmt("%.3e", worst)};
}

Check check_norm(const RunConfig& cfg) {
  IntegratorConfig integ = cfg.integrator();
  integ.record = false;
  const ChainParameters params = cfg.params();
  StateVector s = StateVector::basis(BasisState(0));
  double worst = 0.0;
  for (const auto& pulse : flatten(build_protocol(params, cfg.rabi(), mhz(cfg.resolution_mhz)))) {
    const double before = s.norm_squared();
    s = apply_pulse(s, pulse, params, integ).state;
    worst = std::max(worst, std::abs(s.norm_squared() - before));
  }
  return {"norm-conservation", worst <= 1e-9, "max drift per pulse " + fmt("%.3e", worst)};
}

Pulse reference_pi_pulse(const RunConfig& cfg) {
  const double drive = resonant_drive_frequency(BasisState(0), BasisState(1), cfg.params());
  return Pulse{drive, 0.0, cfg.rabi(), std::numbers::pi, std::nullopt};
}

Check check_convergence(const RunConfig& cfg) {
  const ChainParameters params = cfg.params();
  IntegratorConfig integ = cfg.integrator();
  integ.record = false;
  const Pulse pulse = reference_pi_pulse(cfg);
  const StateVector start = StateVector::basis(BasisState(0));
  const double h = step_size(pulse, params, integ);
  IntegratorConfig half = integ;
  half.fixed_step = 0.5 * h;
  const Probabilities a = apply_pulse(start, pulse, params, integ).state.probabilities();
  const Probabilities b = apply_pulse(start, pulse, params, half).state.probabilities();
  const double diff = (a - b).cwiseAbs().maxCoeff();
  return {"step-halving", diff <= 1e-8, "max probability change " + fmt("%.3e", diff)};
}

Check check_pictures(const RunConfig& cfg) {
  const ChainParameters params = cfg.params();
  IntegratorConfig integ = cfg.integrator();
  integ.record = false;
  const std::array<Pulse, 1> pulses = {reference_pi_pulse(cfg)};
  const StateVector start = StateVector::basis(BasisState(0));
  const Probabilities a = run_sequence(start, pulses, params, integ).state.probabilities();
  const Probabilities b = lab_frame_reference(start, pulses, params).probabilities();
  const double diff = (a - b).cwiseAbs().maxCoeff();
  return {"picture-equivalence", diff <= 1e-8, "max probability difference " + fmt("%.3e", diff)};
}

}  // namespace

int cmd_selftest(const RunConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    cfg.validate();
    for (auto* check : {&check_oracle, &check_norm, &check_convergence, &check_pictures}) {
      const Check c = check(cfg);
      log << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
      if (!c.pass) {
        log << "selftest failed: " << c.name << '\n';
        return kTestFailure;
      }
    }
    log << "selftest passed\n";
    return kSuccess;
  });
}

}  // namespace spinchain::cli
