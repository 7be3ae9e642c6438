#include "spinchain/pulse_control.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace spinchain {

double effective_rabi(const TwoLevelSystem& sys) { return std::hypot(sys.rabi, sys.detuning); }

std::pair<Complex, Complex> analytic_evolution(const TwoLevelSystem& sys, double t) {
  const double omega_e = effective_rabi(sys);
  if (omega_e == 0.0) return {sys.upper0, sys.lower0};

  const double c = std::cos(0.5 * omega_e * t);
  const double s = std::sin(0.5 * omega_e * t);
  const Complex i(0.0, 1.0);
  const double d = sys.detuning / omega_e;
  const double w = sys.rabi / omega_e;

  // The lower amplitude carries +i(Delta/Omega_e) in its bracket; with the
  // same sign as the upper one the map would not be unitary.
  const Complex upper = (sys.upper0 * (c - i * d * s) + i * w * sys.lower0 * s) *
                        std::polar(1.0, 0.5 * sys.detuning * t);
  const Complex lower = (sys.lower0 * (c + i * d * s) + i * w * sys.upper0 * s) *
                        std::polar(1.0, -0.5 * sys.detuning * t);
  return {upper, lower};
}

double two_pi_k_rabi(double detuning, long k) {
  if (k < 1) throw InvalidArgument("2*pi*k method needs k >= 1");
  if (k > kMaxTwoPiK) throw InvalidArgument("2*pi*k method: k exceeds 1e6");
  if (detuning == 0.0 || !std::isfinite(detuning)) {
    throw InvalidArgument("2*pi*k method needs a finite non-zero detuning");
  }
  const double kk = static_cast<double>(k);
  return std::abs(detuning) / std::sqrt(4.0 * kk * kk - 1.0);
}

std::vector<Detuning> detuning_catalog(const ChainParameters& params, bool extended) {
  const double j = params.j1;
  const double jp = params.j2;
  std::vector<Detuning> raw = {
      {"4J+2J'", 4 * j + 2 * jp}, {"4J", 4 * j}, {"2J+2J'", 2 * j + 2 * jp},
      {"2J", 2 * j},              {"2J'", 2 * jp},
  };
  if (extended) raw.push_back({"2J-2J'", 2 * j - 2 * jp});

  std::vector<Detuning> out;
  for (auto& d : raw) {
    d.value = std::abs(d.value);
    if (d.value == 0.0) continue;
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const Detuning& o) { return o.value == d.value; });
    if (!seen) out.push_back(std::move(d));
  }
  return out;
}

std::vector<RabiRow> rabi_table(const ChainParameters& params, long k_min, long k_max,
                                bool extended) {
  if (k_min < 1 || k_max < k_min) throw InvalidArgument("k range must satisfy 1 <= k_min <= k_max");
  if (k_max > kMaxTwoPiK) throw InvalidArgument("k range exceeds 1e6");
  std::vector<RabiRow> rows;
  for (const auto& d : detuning_catalog(params, extended)) {
    for (long k = k_min; k <= k_max; ++k) {
      rows.push_back({d.label, d.value, k, two_pi_k_rabi(d.value, k)});
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const RabiRow& a, const RabiRow& b) { return a.rabi < b.rabi; });
  return rows;
}

void write_rabi_table_csv(std::ostream& out, const std::vector<RabiRow>& rows) {
  out << "delta_label,delta,k,omega\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.12g,%ld,%.12g", to_mhz(r.detuning), r.k, to_mhz(r.rabi));
    out << r.label << ',' << buf << '\n';
  }
}

}  // namespace spinchain
