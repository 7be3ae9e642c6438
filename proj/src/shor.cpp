#include "spinchain/shor.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace spinchain {

long mod_exp(long q, long x, long n) {
  if (n < 2) throw InvalidArgument("mod_exp: modulus must be >= 2");
  if (x < 0) throw InvalidArgument("mod_exp: exponent must be >= 0");
  long long base = ((q % n) + n) % n;
  long long result = 1;
  for (long e = x; e > 0; e >>= 1) {
    if (e & 1) result = result * base % n;
    base = base * base % n;
  }
  return static_cast<long>(result % n);
}

long classical_period(long q, long n) {
  if (n < 2) throw InvalidArgument("classical_period: modulus must be >= 2");
  if (std::gcd(q, n) != 1) {
    throw InvalidArgument("classical_period: " + std::to_string(q) + " and " + std::to_string(n) +
                          " are not coprime");
  }
  long long value = ((q % n) + n) % n;
  const long long base = value;
  for (long t = 1; t <= n; ++t) {
    if (value == 1) return t;
    value = value * base % n;
  }
  throw Error("classical_period: no period found");  // unreachable for coprime inputs
}

std::pair<long, long> factors_from_period(long q, long period, long n) {
  if (period <= 0 || period % 2 != 0) {
    throw OddPeriod("period " + std::to_string(period) + " is odd; retry with a different q");
  }
  const long half = mod_exp(q, period / 2, n);
  const long minus = ((half - 1) % n + n) % n;
  const long plus = (half + 1) % n;
  // gcd(0, n) = n.
  return {std::gcd(minus, n), std::gcd(plus, n)};
}

std::string to_string(StageName name) {
  switch (name) {
    case StageName::superposition: return "superposition";
    case StageName::oracle: return "oracle";
    case StageName::fourier: return "fourier";
  }
  return "unknown";
}

namespace {

struct StagePlan {
  StageName name;
  double angle;
  std::vector<std::pair<int, int>> transitions;
};

const std::vector<StagePlan>& protocol_plan() {
  static const std::vector<StagePlan> plan = {
      {StageName::superposition, std::numbers::pi / 2, {{0, 4}, {0, 8}, {4, 12}}},
      {StageName::oracle, std::numbers::pi, {{0, 1}, {4, 5}, {5, 7}, {13, 15}}},
      {StageName::fourier, std::numbers::pi, {{6, 7}, {2, 6}, {2, 3}, {14, 15}, {11, 15}}},
  };
  return plan;
}

void check_addressable(BasisState m, BasisState k, double drive, const ChainParameters& params,
                       double resolution) {
  const int target = *flipped_qubit(m, k);
  for (const auto& c : all_couplings()) {
    if (c.qubit == target) continue;
    const double other = std::abs(transition_frequency(c.upper, c.lower, params));
    if (std::abs(other - drive) < resolution) {
      throw AddressabilityError("drive for transition " + std::to_string(m.index()) + "<->" +
                                std::to_string(k.index()) + " lies within resolution of " +
                                std::to_string(c.lower.index()) + "<->" +
                                std::to_string(c.upper.index()) + " on spin " +
                                std::to_string(c.qubit));
    }
  }
}

}  // namespace

std::vector<ProtocolStage> build_protocol(const ChainParameters& params, double rabi,
                                          double resolution) {
  params.validate();
  if (!(rabi > 0.0) || !std::isfinite(rabi)) throw InvalidArgument("Rabi frequency must be > 0");

  std::vector<ProtocolStage> stages;
  for (const auto& plan : protocol_plan()) {
    ProtocolStage stage{plan.name, {}, plan.transitions};
    for (const auto& [m, k] : plan.transitions) {
      const BasisState sm(m), sk(k);
      const double drive = resonant_drive_frequency(sm, sk, params);
      check_addressable(sm, sk, drive, params, resolution);
      stage.pulses.push_back(Pulse{drive, 0.0, rabi, plan.angle, std::nullopt});
    }
    stages.push_back(std::move(stage));
  }
  return stages;
}

std::vector<Pulse> flatten(const std::vector<ProtocolStage>& stages) {
  std::vector<Pulse> out;
  for (const auto& s : stages) out.insert(out.end(), s.pulses.begin(), s.pulses.end());
  return out;
}

StateVector expected_wavefunction() {
  StateVector s;
  s.picture = Picture::schrodinger;
  for (int m : {1, 3, 9, 11}) s.amplitudes[m] = 0.5;
  return s;
}

std::array<double, 4> x_marginal(const Probabilities& p) {
  std::array<double, 4> out{};
  for (int m = 0; m < kNumStates; ++m) out[BasisState(m).x_register()] += p[m];
  return out;
}

void analyse_marginal(ShorOutcome& outcome, const ShorProblem& problem) {
  const auto& marginal = outcome.marginal;
  const int size = 1 << problem.x_bits;
  double peak = 0.0;
  for (double v : marginal) peak = std::max(peak, v);
  if (!(peak > 0.0)) throw ProtocolFailure("x-register marginal is empty", outcome.probabilities);

  outcome.peaks.clear();
  for (int x = 0; x < size; ++x) {
    if (marginal[x] >= kPeakThreshold * peak) outcome.peaks.push_back(x);
  }
  if (outcome.peaks.size() == 1) {
    outcome.peak_spacing = size;
  } else {
    outcome.peak_spacing = outcome.peaks[1] - outcome.peaks[0];
    for (std::size_t i = 1; i < outcome.peaks.size(); ++i) {
      if (outcome.peaks[i] - outcome.peaks[i - 1] != outcome.peak_spacing) {
        throw ProtocolFailure("x-register peaks are not evenly spaced", outcome.probabilities);
      }
    }
  }
  if (size % outcome.peak_spacing != 0) {
    throw ProtocolFailure("peak spacing does not divide the register size", outcome.probabilities);
  }
  outcome.period = size / outcome.peak_spacing;
  try {
    outcome.factors = factors_from_period(problem.q, outcome.period, problem.n);
  } catch (const OddPeriod&) {
    outcome.factors.reset();
  }
}

ShorOutcome simulate_protocol(const ChainParameters& params, double rabi,
                              const IntegratorConfig& cfg, double resolution) {
  const auto stages = build_protocol(params, rabi, resolution);
  ShorOutcome outcome;
  StateVector state = StateVector::basis(BasisState(0));
  for (const auto& stage : stages) {
    Evolution evo = run_sequence(state, stage.pulses, params, cfg);
    state = evo.state;
    outcome.stages.push_back({stage.name, state, std::move(evo.trajectory)});
  }
  outcome.final_state = to_schrodinger(state, params);
  outcome.probabilities = outcome.final_state.probabilities();
  outcome.marginal = x_marginal(outcome.probabilities);
  return outcome;
}

ShorOutcome run_shor(const ChainParameters& params, double rabi, const IntegratorConfig& cfg,
                     double resolution) {
  ShorOutcome outcome = simulate_protocol(params, rabi, cfg, resolution);
  analyse_marginal(outcome);
  return outcome;
}

std::vector<int> sample_measurements(const std::array<double, 4>& marginal, int shots,
                                     unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> dist(marginal.begin(), marginal.end());
  std::vector<int> out(static_cast<std::size_t>(std::max(shots, 0)));
  for (auto& v : out) v = dist(rng);
  return out;
}

}  // namespace spinchain
