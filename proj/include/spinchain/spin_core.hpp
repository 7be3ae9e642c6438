// Static structure of the four-spin Ising chain: parameters, basis indexing,
// the diagonal spectrum and the rf coupling matrix element.
//
// Frequencies are angular (rad/us) everywhere inside the library and time is
// in microseconds. Use mhz() to convert a value quoted in units of 2*pi*MHz.
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace spinchain {

inline constexpr int kNumQubits = 4;
inline constexpr int kNumStates = 1 << kNumQubits;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Complex = std::complex<double>;

template <typename Scalar>
using AmplitudesT = Eigen::Matrix<std::complex<Scalar>, kNumStates, 1>;
template <typename Scalar>
using ProbabilitiesT = Eigen::Matrix<Scalar, kNumStates, 1>;
template <typename Scalar>
using OperatorT = Eigen::Matrix<std::complex<Scalar>, kNumStates, kNumStates>;

using Amplitudes = AmplitudesT<double>;
using Probabilities = ProbabilitiesT<double>;
using Operator = OperatorT<double>;

/// Converts a frequency quoted in units of 2*pi*MHz into rad/us.
constexpr double mhz(double cycles) { return kTwoPi * cycles; }
/// Inverse of mhz().
constexpr double to_mhz(double angular) { return angular / kTwoPi; }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid inputs to a library call (bad parameters, malformed pulses, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Chain parameters. All values are angular frequencies in rad/us.
struct ChainParameters {
  std::array<double, kNumQubits> larmor{};
  double j1 = 0.0;  // first-neighbour Ising coupling J
  double j2 = 0.0;  // second-neighbour Ising coupling J'

  /// Builds parameters from values quoted in 2*pi*MHz.
  static ChainParameters from_mhz(const std::array<double, kNumQubits>& larmor_mhz,
                                  double j1_mhz, double j2_mhz);

  /// omega = 100, 200, 400, 800; J = 10; J' = 0.4 (2*pi*MHz).
  static ChainParameters reference();

  /// Throws InvalidArgument when a value is non-finite or two Larmor
  /// frequencies coincide.
  void validate() const;
};

/// Default Rabi frequency of the reference configuration, 0.1 * 2*pi*MHz.
inline constexpr double kReferenceRabiMhz = 0.1;

/// Computational basis state |i3 i2 i1 i0>, index = 8 i3 + 4 i2 + 2 i1 + i0.
/// Bit value 0 is the ground state (spin along the static field).
class BasisState {
 public:
  constexpr BasisState() = default;
  constexpr explicit BasisState(int index) : index_(index) {
    if (index < 0 || index >= kNumStates) {
      throw InvalidArgument("basis index out of range: " + std::to_string(index));
    }
  }

  constexpr int index() const { return index_; }
  constexpr int bit(int qubit) const { return (index_ >> qubit) & 1; }
  constexpr BasisState flipped(int qubit) const { return BasisState(index_ ^ (1 << qubit)); }

  /// Input register x = (i3, i2).
  constexpr int x_register() const { return index_ >> 2; }
  /// Valuation register y = (i1, i0).
  constexpr int y_register() const { return index_ & 3; }
  static constexpr BasisState from_registers(int x, int y) { return BasisState((x << 2) | y); }

  friend constexpr bool operator==(BasisState, BasisState) = default;

 private:
  int index_ = 0;
};

/// Number of qubits in which the two states differ.
int hamming_distance(BasisState a, BasisState b);

/// Index of the single differing qubit, or nullopt when the Hamming distance is not 1.
std::optional<int> flipped_qubit(BasisState a, BasisState b);

/// A rectangular rf pulse.
struct Pulse {
  double drive_frequency = 0.0;  // rad/us
  double phase = 0.0;            // rad
  double rabi = 0.0;             // rad/us
  double angle = 0.0;            // rotation angle, pi/2 or pi
  /// Replaces angle / rabi as the pulse length when set (us).
  std::optional<double> duration_override;

  double duration() const { return duration_override ? *duration_override : angle / rabi; }

  /// Throws InvalidArgument unless rabi > 0 (or rabi == 0 with a duration
  /// override), drive > 0 and duration >= 0.
  void validate() const;
};

/// E/hbar of a basis state (rad/us).
double energy(BasisState state, const ChainParameters& params);

/// All 16 energies as a vector indexed by basis index.
Probabilities spectrum(const ChainParameters& params);

/// omega_mk = (E_m - E_k) / hbar.
double transition_frequency(BasisState m, BasisState k, const ChainParameters& params);

/// |omega_mk| for a single-spin-flip pair; throws InvalidArgument otherwise.
double resonant_drive_frequency(BasisState m, BasisState k, const ChainParameters& params);

/// <m|W|k> / hbar at global time t. Non-zero only for single-spin flips:
/// -(Omega/2) e^{+i(wt+phi)} when the flipped bit is 1 in k and 0 in m (I^+ acts),
/// -(Omega/2) e^{-i(wt+phi)} in the opposite direction.
Complex coupling_element(BasisState m, BasisState k, const Pulse& pulse, double t);

/// Diagonal H0/hbar assembled from the spin operator sums I_k^z, I_k^z I_l^z.
/// Independent of energy(); used to cross-check the closed-form spectrum.
Operator assemble_h0(const ChainParameters& params);

/// Full W/hbar at time t assembled from I_k^+ and I_k^- matrices.
Operator assemble_w(const Pulse& pulse, double t);

}  // namespace spinchain
