// Time evolution of the chain under a sequence of rectangular rf pulses.
//
// The working representation is the interaction picture, D_m = C_m e^{i E_m t},
// whose equations of motion only carry the slow drive-induced dynamics:
//
//   dD_m/dt = -i sum_k (W_mk / hbar) D_k e^{i omega_mk t}
//
// integrated with classical fixed-step RK4. Global time runs continuously
// across pulses and enters the drive phase as omega t + phi.
#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "spinchain/spin_core.hpp"

namespace spinchain {

enum class Picture { interaction, schrodinger };

struct StateVector {
  Amplitudes amplitudes = Amplitudes::Zero();
  Picture picture = Picture::interaction;
  double time = 0.0;  // us

  static StateVector basis(BasisState state, Picture picture = Picture::interaction,
                           double time = 0.0);

  double norm_squared() const { return amplitudes.squaredNorm(); }
  Probabilities probabilities() const { return amplitudes.cwiseAbs2(); }
};

struct IntegratorConfig {
  /// Upper bound on the phase any coupling term advances within one step.
  double max_phase_step = kTwoPi / 200.0;
  /// Explicit step length in us; replaces the phase criterion when set.
  std::optional<double> fixed_step;
  bool record = true;
  int record_stride = 1;
  bool record_amplitudes = false;

  void validate() const;
};

struct TrajectorySample {
  double time = 0.0;
  Probabilities probabilities = Probabilities::Zero();
  std::optional<Amplitudes> amplitudes;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
  void append(const Trajectory& other);

  /// Header `t,p0,...,p15`, one row per sample, 12 significant digits.
  void write_csv(std::ostream& out) const;
};

/// A single-spin-flip pair; `lower` carries bit 0 on the flipped qubit.
struct Coupling {
  BasisState lower;
  BasisState upper;
  int qubit = 0;
};

/// The 32 single-flip pairs of the four-spin chain.
std::span<const Coupling> all_couplings();

/// Pairs from all_couplings() whose two states both lie in `states`.
std::vector<Coupling> couplings_within(std::span<const int> states);

/// Right-hand side of the interaction-picture equations at time t.
/// Evaluated term by term from coupling_element(); used as the reference
/// for the optimised kernel inside apply_pulse().
Amplitudes derivative(const StateVector& state, const Pulse& pulse, const ChainParameters& params,
                      double t, std::span<const Coupling> couplings = all_couplings());

/// Step length apply_pulse() would use for this pulse (us).
double step_size(const Pulse& pulse, const ChainParameters& params, const IntegratorConfig& cfg,
                 std::span<const Coupling> couplings = all_couplings());

struct Evolution {
  StateVector state;
  Trajectory trajectory;
};

/// Integrates one pulse from state.time to state.time + pulse.duration().
/// The trajectory holds every record_stride-th step plus the final step.
Evolution apply_pulse(const StateVector& state, const Pulse& pulse, const ChainParameters& params,
                      const IntegratorConfig& cfg,
                      std::span<const Coupling> couplings = all_couplings());

/// Folds apply_pulse over `pulses`. The trajectory starts with the initial state.
Evolution run_sequence(const StateVector& initial, std::span<const Pulse> pulses,
                       const ChainParameters& params, const IntegratorConfig& cfg);

/// C_m = D_m e^{-i E_m t}.
StateVector to_schrodinger(const StateVector& state, const ChainParameters& params);
/// D_m = C_m e^{+i E_m t}.
StateVector to_interaction(const StateVector& state, const ChainParameters& params);

struct LabFrameConfig {
  /// Phase bound per step against the fastest rate max|E_m| + omega + Omega.
  double max_phase_step = 0.1;
};

/// Integrates the Schrodinger-picture equations i dC_m/dt = E_m C_m + sum_k W_mk C_k
/// directly, with a fixed-step 7(8) Runge-Kutta-Fehlberg scheme. Independent of
/// the interaction-picture path; slow, meant for cross-checks.
StateVector lab_frame_reference(const StateVector& initial, std::span<const Pulse> pulses,
                                const ChainParameters& params, const LabFrameConfig& cfg = {});

}  // namespace spinchain
