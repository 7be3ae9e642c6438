// Shor factorisation of N = 4 on the chain: classical pre/post-processing and
// the twelve-pulse protocol (superposition, modular exponentiation, Fourier).
//
// Register split: |x; y> = |i3 i2; i1 i0>.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "spinchain/dynamics.hpp"

namespace spinchain {

struct ShorProblem {
  long n = 4;
  long q = 3;
  int x_bits = 2;
  int y_bits = 2;
};

/// q^x mod n by square-and-multiply. Throws for n < 2 or x < 0.
long mod_exp(long q, long x, long n);

/// Least T >= 1 with q^T = 1 (mod n), by direct scan. Throws unless gcd(q, n) = 1.
long classical_period(long q, long n);

/// Thrown by factors_from_period() for odd periods: pick another q.
class OddPeriod : public Error {
 public:
  using Error::Error;
};

/// (gcd(q^{T/2} - 1, n), gcd(q^{T/2} + 1, n)).
std::pair<long, long> factors_from_period(long q, long period, long n);

enum class StageName { superposition, oracle, fourier };
std::string to_string(StageName name);

struct ProtocolStage {
  StageName name;
  std::vector<Pulse> pulses;
  /// The (m, k) transition each pulse is tuned to.
  std::vector<std::pair<int, int>> transitions;
};

/// Thrown when a protocol drive cannot address its spin because a transition
/// of another spin lies within the resolution.
class AddressabilityError : public Error {
 public:
  using Error::Error;
};

/// Default addressability resolution, 0.5 * 2*pi*MHz.
inline const double kDefaultResolution = mhz(0.5);

/// Three stages with drives recomputed from `params`; all phases zero.
std::vector<ProtocolStage> build_protocol(const ChainParameters& params, double rabi,
                                          double resolution = kDefaultResolution);

/// Flattened pulse list of the full protocol.
std::vector<Pulse> flatten(const std::vector<ProtocolStage>& stages);

/// Target state: amplitude 1/2 on |00;01>, |00;11>, |10;01>, |10;11> (indices 1, 3, 9, 11).
StateVector expected_wavefunction();

/// Probability of each x-register value, summed over y.
std::array<double, 4> x_marginal(const Probabilities& p);

/// Thrown when the measured distribution shows no usable peak structure.
class ProtocolFailure : public Error {
 public:
  ProtocolFailure(const std::string& what, Probabilities distribution)
      : Error(what), distribution_(distribution) {}
  const Probabilities& distribution() const { return distribution_; }

 private:
  Probabilities distribution_;
};

struct StageResult {
  StageName name;
  StateVector state;  // interaction picture at the end of the stage
  Trajectory trajectory;
};

struct ShorOutcome {
  StateVector final_state;  // Schrodinger picture
  Probabilities probabilities = Probabilities::Zero();
  std::array<double, 4> marginal{};
  std::vector<int> peaks;
  int peak_spacing = 0;
  long period = 0;
  std::optional<std::pair<long, long>> factors;
  std::vector<StageResult> stages;
};

/// Peak threshold as a fraction of the largest marginal entry.
inline constexpr double kPeakThreshold = 0.1;

/// Evolves |0000> through build_protocol(); fills the state, probabilities
/// and marginal but does not interpret the peaks.
ShorOutcome simulate_protocol(const ChainParameters& params, double rabi,
                              const IntegratorConfig& cfg,
                              double resolution = kDefaultResolution);

/// simulate_protocol() followed by analyse_marginal().
ShorOutcome run_shor(const ChainParameters& params, double rabi, const IntegratorConfig& cfg,
                     double resolution = kDefaultResolution);

/// Peak extraction on an x-marginal; fills peaks, spacing, period and factors.
void analyse_marginal(ShorOutcome& outcome, const ShorProblem& problem = {});

/// Draws `shots` x-register measurements from the marginal with a seeded generator.
std::vector<int> sample_measurements(const std::array<double, 4>& marginal, int shots,
                                     unsigned long seed);

}  // namespace spinchain
