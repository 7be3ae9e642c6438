#include "spinchain/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace spinchain {

FidelityReport fidelity(const StateVector& expected, const StateVector& actual) {
  constexpr double kNormTolerance = 1e-6;
  if (std::abs(expected.norm_squared() - 1.0) >= kNormTolerance ||
      std::abs(actual.norm_squared() - 1.0) >= kNormTolerance) {
    throw InvalidArgument("fidelity needs normalised states");
  }
  if (expected.picture != actual.picture) {
    throw InvalidArgument("fidelity needs both states in the same picture");
  }
  FidelityReport r;
  r.overlap = expected.amplitudes.dot(actual.amplitudes);  // conjugates the left operand
  r.magnitude = std::abs(r.overlap);
  r.population_overlap = expected.amplitudes.cwiseAbs().dot(actual.amplitudes.cwiseAbs());
  return r;
}

double expectation_iz(const Probabilities& probabilities, int qubit) {
  if (qubit < 0 || qubit >= kNumQubits) throw InvalidArgument("qubit index out of range");
  double sum = 0.0;
  for (int m = 0; m < kNumStates; ++m) {
    sum += (BasisState(m).bit(qubit) ? -1.0 : 1.0) * probabilities[m];
  }
  return 0.5 * sum;
}

double expectation_iz(const StateVector& state, int qubit) {
  return expectation_iz(state.probabilities(), qubit);
}

void SweepSpec::validate() const {
  if (grid.empty()) throw InvalidArgument("sweep grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw InvalidArgument("sweep grid must be strictly increasing");
  }
  for (double v : grid) {
    if (!std::isfinite(v)) throw InvalidArgument("sweep grid contains a non-finite value");
  }
  base.validate();
  if (variable == SweepVariable::omega && !(grid.front() > 0.0)) {
    throw InvalidArgument("Rabi frequencies must be > 0");
  }
}

std::vector<double> SweepResult::curve() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.fidelity.population_overlap);
  return out;
}

namespace {

SweepPoint evaluate_point(const SweepSpec& spec, double value, const IntegratorConfig& cfg) {
  ChainParameters params = spec.base;
  double rabi = spec.rabi;
  if (spec.variable == SweepVariable::jprime_ratio) {
    params.j2 = value * params.j1;
  } else {
    rabi = value;
  }
  const ShorOutcome outcome = simulate_protocol(params, rabi, cfg);
  SweepPoint p;
  p.parameter = value;
  p.fidelity = fidelity(expected_wavefunction(), outcome.final_state);
  p.probabilities = outcome.probabilities;
  return p;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const IntegratorConfig& cfg, unsigned threads) {
  spec.validate();
  IntegratorConfig point_cfg = cfg;
  point_cfg.record = false;
  point_cfg.validate();

  SweepResult result;
  result.variable = spec.variable;
  result.points.resize(spec.grid.size());

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(spec.grid.size()));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < spec.grid.size(); i = next++) {
      try {
        result.points[i] = evaluate_point(spec, spec.grid[i], point_cfg);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = spec.grid.size();
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

SweepResult sweep_jprime(const SweepSpec& spec, const IntegratorConfig& cfg, unsigned threads) {
  if (spec.variable != SweepVariable::jprime_ratio) {
    throw InvalidArgument("sweep_jprime needs a jprime_ratio sweep");
  }
  return run_sweep(spec, cfg, threads);
}

SweepResult sweep_omega(const SweepSpec& spec, const IntegratorConfig& cfg, unsigned threads) {
  if (spec.variable != SweepVariable::omega) throw InvalidArgument("sweep_omega needs an omega sweep");
  return run_sweep(spec, cfg, threads);
}

std::vector<double> linear_grid(double first, double last, double step) {
  if (!(step > 0.0) || last < first) throw InvalidArgument("grid needs step > 0 and last >= first");
  const auto n = static_cast<long>(std::floor((last - first) / step + 1e-9));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n + 1));
  for (long i = 0; i <= n; ++i) out.push_back(first + static_cast<double>(i) * step);
  return out;
}

std::vector<std::size_t> local_maxima(const std::vector<double>& values) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] > values[i - 1] && values[i] > values[i + 1]) out.push_back(i);
  }
  return out;
}

std::vector<double> prominences(const std::vector<double>& values,
                                const std::vector<std::size_t>& maxima) {
  std::vector<double> out;
  out.reserve(maxima.size());
  for (std::size_t i : maxima) {
    const double h = values[i];
    double left_min = h;
    for (std::size_t j = i; j-- > 0;) {
      if (values[j] > h) break;
      left_min = std::min(left_min, values[j]);
    }
    double right_min = h;
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      if (values[j] > h) break;
      right_min = std::min(right_min, values[j]);
    }
    out.push_back(h - std::max(left_min, right_min));
  }
  return out;
}

std::optional<double> plateau_onset(const std::vector<double>& grid,
                                    const std::vector<double>& values, double fraction) {
  if (grid.size() != values.size() || values.empty()) {
    throw InvalidArgument("plateau_onset needs matching non-empty grid and values");
  }
  const double threshold = fraction * *std::max_element(values.begin(), values.end());
  std::optional<double> onset;
  for (std::size_t i = values.size(); i-- > 0;) {
    if (values[i] < threshold) break;
    onset = grid[i];
  }
  return onset;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  const bool ratio = result.variable == SweepVariable::jprime_ratio;
  out << (ratio ? "ratio" : "omega") << ",|F|,ReF,ImF,overlap\n";
  char buf[160];
  for (const auto& p : result.points) {
    const double x = ratio ? p.parameter : to_mhz(p.parameter);
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g", x, p.fidelity.magnitude,
                  p.fidelity.overlap.real(), p.fidelity.overlap.imag(),
                  p.fidelity.population_overlap);
    out << buf << '\n';
  }
}

}  // namespace spinchain
