// Observables and parameter sweeps: spin projections, protocol fidelity and
// the fidelity curves over J'/J and over the Rabi frequency.
#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "spinchain/shor.hpp"

namespace spinchain {

struct FidelityReport {
  Complex overlap;                  // <expected|actual>
  double magnitude = 0.0;           // |overlap|
  double population_overlap = 0.0;  // sum_m |a_exp,m| |a_act,m|
};

/// Both states must be normalised (to 1e-6) and in the same picture.
FidelityReport fidelity(const StateVector& expected, const StateVector& actual);

/// <I_j^z> = (1/2) sum_m (-1)^{bit_j(m)} |C_m|^2.
double expectation_iz(const Probabilities& probabilities, int qubit);
double expectation_iz(const StateVector& state, int qubit);

enum class SweepVariable { jprime_ratio, omega };

struct SweepSpec {
  SweepVariable variable = SweepVariable::jprime_ratio;
  std::vector<double> grid;  // ratios J'/J, or Rabi frequencies in rad/us
  ChainParameters base = ChainParameters::reference();
  double rabi = mhz(kReferenceRabiMhz);

  void validate() const;
};

struct SweepPoint {
  double parameter = 0.0;
  FidelityReport fidelity;
  Probabilities probabilities = Probabilities::Zero();
};

struct SweepResult {
  SweepVariable variable = SweepVariable::jprime_ratio;
  std::vector<SweepPoint> points;

  /// The curve the sweep reports: population_overlap at each grid point.
  std::vector<double> curve() const;
};

/// Runs the protocol at every grid point on up to `threads` workers
/// (0 = hardware concurrency). Results come back in grid order.
SweepResult run_sweep(const SweepSpec& spec, const IntegratorConfig& cfg, unsigned threads = 0);

SweepResult sweep_jprime(const SweepSpec& spec, const IntegratorConfig& cfg, unsigned threads = 0);
SweepResult sweep_omega(const SweepSpec& spec, const IntegratorConfig& cfg, unsigned threads = 0);

/// Evenly spaced grid from `first` to `last` inclusive.
std::vector<double> linear_grid(double first, double last, double step);

/// Indices of interior strict local maxima of `values`.
std::vector<std::size_t> local_maxima(const std::vector<double>& values);

/// Topographic prominence of each local maximum: its height above the higher
/// of the two lowest points separating it from a taller peak (or the edge).
std::vector<double> prominences(const std::vector<double>& values,
                                const std::vector<std::size_t>& maxima);

/// First grid value from which every later point stays at or above
/// `fraction` of the curve maximum.
std::optional<double> plateau_onset(const std::vector<double>& grid,
                                    const std::vector<double>& values, double fraction = 0.99);

/// CSV `ratio,|F|,ReF,ImF,overlap` (or `omega,...`); frequencies in 2*pi*MHz.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

}  // namespace spinchain
