// Two-level analytics: detuned Rabi oscillation in closed form and the
// 2*pi*k choice of Rabi frequency that returns off-resonant pairs to their
// initial populations at the end of a pi-pulse.
#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "spinchain/spin_core.hpp"

namespace spinchain {

/// Upper state p and lower state m driven at detuning
/// Delta = (E_p - E_m)/hbar - omega, in interaction-picture amplitudes.
struct TwoLevelSystem {
  double detuning = 0.0;
  double rabi = 0.0;
  Complex upper0{1.0, 0.0};  // C_p(0)
  Complex lower0{0.0, 0.0};  // C_m(0)
};

/// sqrt(Omega^2 + Delta^2).
double effective_rabi(const TwoLevelSystem& sys);

/// Closed-form (D_p(t), D_m(t)). Identity when Omega_e == 0.
std::pair<Complex, Complex> analytic_evolution(const TwoLevelSystem& sys, double t);

inline constexpr long kMaxTwoPiK = 1'000'000;

/// |Delta| / sqrt(4k^2 - 1): the pi-pulse Rabi frequency for which a pair
/// detuned by Delta completes k full cycles.
double two_pi_k_rabi(double detuning, long k);

struct Detuning {
  std::string label;  // e.g. "4J+2J'"
  double value = 0.0;
};

/// Detunings of spectator pairs: 4J+2J', 4J, 2J+2J', 2J, 2J'. With `extended`
/// the additional 2J-2J' difference is appended. Duplicates (by value) and
/// zero entries are dropped, keeping the first label.
std::vector<Detuning> detuning_catalog(const ChainParameters& params, bool extended = false);

struct RabiRow {
  std::string label;
  double detuning = 0.0;
  long k = 0;
  double rabi = 0.0;
};

/// detuning_catalog x [k_min, k_max] through two_pi_k_rabi, sorted by rabi.
std::vector<RabiRow> rabi_table(const ChainParameters& params, long k_min, long k_max,
                                bool extended = false);

/// CSV `delta_label,delta,k,omega`; frequencies written in 2*pi*MHz.
void write_rabi_table_csv(std::ostream& out, const std::vector<RabiRow>& rows);

}  // namespace spinchain
