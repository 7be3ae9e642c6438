#include "spinchain/spin_core.hpp"

#include <bit>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace spinchain {

ChainParameters ChainParameters::from_mhz(const std::array<double, kNumQubits>& larmor_mhz,
                                          double j1_mhz, double j2_mhz) {
  ChainParameters p;
  for (int k = 0; k < kNumQubits; ++k) p.larmor[k] = mhz(larmor_mhz[k]);
  p.j1 = mhz(j1_mhz);
  p.j2 = mhz(j2_mhz);
  return p;
}

ChainParameters ChainParameters::reference() {
  return from_mhz({100.0, 200.0, 400.0, 800.0}, 10.0, 0.4);
}

void ChainParameters::validate() const {
  for (int k = 0; k < kNumQubits; ++k) {
    if (!std::isfinite(larmor[k])) {
      throw InvalidArgument("Larmor frequency " + std::to_string(k) + " is not finite");
    }
    for (int l = 0; l < k; ++l) {
      if (larmor[k] == larmor[l]) {
        throw InvalidArgument("Larmor frequencies " + std::to_string(l) + " and " +
                              std::to_string(k) + " coincide; spins are not addressable");
      }
    }
  }
  if (!std::isfinite(j1) || !std::isfinite(j2)) {
    throw InvalidArgument("coupling constants must be finite");
  }
}

int hamming_distance(BasisState a, BasisState b) {
  return std::popcount(static_cast<unsigned>(a.index() ^ b.index()));
}

std::optional<int> flipped_qubit(BasisState a, BasisState b) {
  const unsigned diff = static_cast<unsigned>(a.index() ^ b.index());
  if (std::popcount(diff) != 1) return std::nullopt;
  return std::countr_zero(diff);
}

void Pulse::validate() const {
  // A zero-amplitude segment (free evolution) needs an explicit duration.
  if (!std::isfinite(rabi) || rabi < 0.0 || (rabi == 0.0 && !duration_override)) {
    throw InvalidArgument("pulse Rabi frequency must be > 0");
  }
  if (!(drive_frequency > 0.0) || !std::isfinite(drive_frequency)) {
    throw InvalidArgument("pulse drive frequency must be > 0");
  }
  if (!std::isfinite(phase)) throw InvalidArgument("pulse phase must be finite");
  const double tau = duration();
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw InvalidArgument("pulse duration must be >= 0");
  if (!duration_override && !(tau > 0.0)) throw InvalidArgument("pulse angle must be > 0");
}

namespace {
// (-1)^bit as +-1.
constexpr double sign(int bit) { return bit ? -1.0 : 1.0; }
}  // namespace

double energy(BasisState state, const ChainParameters& params) {
  double zeeman = 0.0;
  for (int k = 0; k < kNumQubits; ++k) zeeman += sign(state.bit(k)) * params.larmor[k];
  double first = 0.0;
  for (int k = 0; k + 1 < kNumQubits; ++k) first += sign(state.bit(k) ^ state.bit(k + 1));
  double second = 0.0;
  for (int k = 0; k + 2 < kNumQubits; ++k) second += sign(state.bit(k) ^ state.bit(k + 2));
  return -0.5 * (zeeman + params.j1 * first + params.j2 * second);
}

Probabilities spectrum(const ChainParameters& params) {
  Probabilities e;
  for (int m = 0; m < kNumStates; ++m) e[m] = energy(BasisState(m), params);
  return e;
}

double transition_frequency(BasisState m, BasisState k, const ChainParameters& params) {
  return energy(m, params) - energy(k, params);
}

double resonant_drive_frequency(BasisState m, BasisState k, const ChainParameters& params) {
  const int d = hamming_distance(m, k);
  if (d != 1) {
    throw InvalidArgument("no single-photon transition between " + std::to_string(m.index()) +
                          " and " + std::to_string(k.index()) + ": Hamming distance " +
                          std::to_string(d));
  }
  return std::abs(transition_frequency(m, k, params));
}

Complex coupling_element(BasisState m, BasisState k, const Pulse& pulse, double t) {
  const auto qubit = flipped_qubit(m, k);
  if (!qubit) return {0.0, 0.0};
  const double phase = pulse.drive_frequency * t + pulse.phase;
  // I^+ takes bit 1 (I^z = -1/2) to bit 0 (I^z = +1/2).
  const double s = k.bit(*qubit) == 1 ? 1.0 : -1.0;
  return -0.5 * pulse.rabi * std::polar(1.0, s * phase);
}

namespace {

using Single = Eigen::Matrix2cd;

Single iz() {
  Single m = Single::Zero();
  m(0, 0) = 0.5;
  m(1, 1) = -0.5;
  return m;
}

Single raising() {
  Single m = Single::Zero();
  m(0, 1) = 1.0;
  return m;
}

// Embeds a single-spin operator acting on `qubit` into the 16-dim space.
// Kronecker order is qubit 3 (most significant) down to qubit 0.
Operator embed(const Single& op, int qubit) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = kNumQubits - 1; q >= 0; --q) {
    const Single factor = (q == qubit) ? op : Single::Identity();
    Eigen::MatrixXcd next = Eigen::kroneckerProduct(acc, factor);
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

Operator assemble_h0(const ChainParameters& params) {
  std::array<Operator, kNumQubits> z;
  for (int k = 0; k < kNumQubits; ++k) z[k] = embed(iz(), k);
  Operator h = Operator::Zero();
  for (int k = 0; k < kNumQubits; ++k) h += params.larmor[k] * z[k];
  h += 2.0 * params.j1 * (z[0] * z[1] + z[1] * z[2] + z[2] * z[3]);
  h += 2.0 * params.j2 * (z[0] * z[2] + z[1] * z[3]);
  return -h;
}

Operator assemble_w(const Pulse& pulse, double t) {
  const Complex z = std::polar(1.0, pulse.drive_frequency * t + pulse.phase);
  Operator w = Operator::Zero();
  for (int k = 0; k < kNumQubits; ++k) {
    const Operator up = embed(raising(), k);
    w += z * up + std::conj(z) * up.adjoint();
  }
  return -0.5 * pulse.rabi * w;
}

}  // namespace spinchain
