#include "spinchain/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <boost/numeric/odeint/integrate/integrate_n_steps.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

namespace spinchain {

StateVector StateVector::basis(BasisState state, Picture picture, double time) {
  StateVector s;
  s.amplitudes[state.index()] = 1.0;
  s.picture = picture;
  s.time = time;
  return s;
}

void IntegratorConfig::validate() const {
  if (!(max_phase_step > 0.0 && max_phase_step < std::numbers::pi)) {
    throw InvalidArgument("max_phase_step must lie in (0, pi)");
  }
  if (fixed_step && !(*fixed_step > 0.0 && std::isfinite(*fixed_step))) {
    throw InvalidArgument("fixed step must be a positive finite length");
  }
  if (record_stride < 1) throw InvalidArgument("record_stride must be >= 1");
}

void Trajectory::append(const Trajectory& other) {
  samples.insert(samples.end(), other.samples.begin(), other.samples.end());
}

void Trajectory::write_csv(std::ostream& out) const {
  out << "t";
  for (int m = 0; m < kNumStates; ++m) out << ",p" << m;
  out << '\n';
  char buf[32];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof buf, "%.12g", s.time);
    out << buf;
    for (int m = 0; m < kNumStates; ++m) {
      std::snprintf(buf, sizeof buf, "%.12g", s.probabilities[m]);
      out << ',' << buf;
    }
    out << '\n';
  }
}

namespace {

std::array<Coupling, kNumStates * kNumQubits / 2> make_couplings() {
  std::array<Coupling, kNumStates * kNumQubits / 2> out{};
  std::size_t n = 0;
  for (int m = 0; m < kNumStates; ++m) {
    for (int q = 0; q < kNumQubits; ++q) {
      const BasisState lower(m);
      if (lower.bit(q) == 0) out[n++] = Coupling{lower, lower.flipped(q), q};
    }
  }
  return out;
}

const std::array<Coupling, kNumStates * kNumQubits / 2> kCouplings = make_couplings();

// Fastest phase rate among the active interaction-picture terms.
double fastest_rate(const Pulse& pulse, const ChainParameters& params,
                    std::span<const Coupling> couplings) {
  double r = 0.0;
  for (const auto& c : couplings) {
    const double detuning = pulse.drive_frequency - transition_frequency(c.upper, c.lower, params);
    r = std::max(r, std::abs(detuning));
  }
  return r + pulse.rabi;
}

// Steps between exact re-evaluations of the drive phasors.
constexpr long kResyncInterval = 64;

// Precomputed per-pulse view of the sparse generator. For a pair (l, u) with
// nu = omega - (E_u - E_l) and z = e^{i(nu t + phi)}:
//   dD_l += i (Omega/2) z D_u,   dD_u += i (Omega/2) conj(z) D_l.
// Complex products are spelled out on interleaved (re, im) doubles.
class PulseKernel {
 public:
  PulseKernel(const Pulse& pulse, const ChainParameters& params,
              std::span<const Coupling> couplings, double step)
      : half_rabi_(0.5 * pulse.rabi), phase_(pulse.phase) {
    terms_.reserve(couplings.size());
    for (const auto& c : couplings) {
      Term t;
      t.lower = c.lower.index();
      t.upper = c.upper.index();
      t.rate = pulse.drive_frequency - transition_frequency(c.upper, c.lower, params);
      t.half_re = std::cos(0.5 * t.rate * step);
      t.half_im = std::sin(0.5 * t.rate * step);
      terms_.push_back(t);
    }
    for (auto* z : {&start_, &mid_, &end_}) z->resize(2 * terms_.size());
  }

  // Phasors at t, t + h/2 and t + h for the step beginning at t. With
  // `exact` false the start phasor is carried over from the previous step's
  // end instead of being re-evaluated.
  void prepare(double t, bool exact) {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const auto& term = terms_[i];
      double sr, si;
      if (exact) {
        const double arg = term.rate * t + phase_;
        sr = std::cos(arg);
        si = std::sin(arg);
      } else {
        sr = end_[2 * i];
        si = end_[2 * i + 1];
      }
      const double mr = sr * term.half_re - si * term.half_im;
      const double mi = sr * term.half_im + si * term.half_re;
      start_[2 * i] = sr;
      start_[2 * i + 1] = si;
      mid_[2 * i] = mr;
      mid_[2 * i + 1] = mi;
      end_[2 * i] = mr * term.half_re - mi * term.half_im;
      end_[2 * i + 1] = mr * term.half_im + mi * term.half_re;
    }
  }

  enum class Stage { start, mid, end };

  void evaluate(Stage stage, const Amplitudes& amplitudes, Amplitudes& rate) const {
    const auto& z = stage == Stage::start ? start_ : stage == Stage::mid ? mid_ : end_;
    const auto* d = reinterpret_cast<const double*>(amplitudes.data());
    double acc[2 * kNumStates] = {};
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const int l = 2 * terms_[i].lower;
      const int u = 2 * terms_[i].upper;
      const double zr = z[2 * i], zi = z[2 * i + 1];
      acc[l] += zr * d[u] - zi * d[u + 1];
      acc[l + 1] += zr * d[u + 1] + zi * d[u];
      acc[u] += zr * d[l] + zi * d[l + 1];
      acc[u + 1] += zr * d[l + 1] - zi * d[l];
    }
    // Multiply by i * Omega / 2.
    auto* r = reinterpret_cast<double*>(rate.data());
    for (int m = 0; m < kNumStates; ++m) {
      r[2 * m] = -half_rabi_ * acc[2 * m + 1];
      r[2 * m + 1] = half_rabi_ * acc[2 * m];
    }
  }

 private:
  struct Term {
    int lower = 0;
    int upper = 0;
    double rate = 0.0;
    double half_re = 1.0;
    double half_im = 0.0;
  };

  double half_rabi_;
  double phase_;
  std::vector<Term> terms_;
  std::vector<double> start_, mid_, end_;
};

TrajectorySample sample_of(const StateVector& s, bool with_amplitudes) {
  TrajectorySample out;
  out.time = s.time;
  out.probabilities = s.probabilities();
  if (with_amplitudes) out.amplitudes = s.amplitudes;
  return out;
}

void require_interaction(const StateVector& s, const char* what) {
  if (s.picture != Picture::interaction) {
    throw InvalidArgument(std::string(what) + " requires an interaction-picture state");
  }
}

}  // namespace

std::span<const Coupling> all_couplings() { return kCouplings; }

std::vector<Coupling> couplings_within(std::span<const int> states) {
  std::vector<Coupling> out;
  const auto contains = [&](BasisState s) {
    return std::find(states.begin(), states.end(), s.index()) != states.end();
  };
  for (const auto& c : kCouplings) {
    if (contains(c.lower) && contains(c.upper)) out.push_back(c);
  }
  return out;
}

Amplitudes derivative(const StateVector& state, const Pulse& pulse, const ChainParameters& params,
                      double t, std::span<const Coupling> couplings) {
  require_interaction(state, "derivative");
  Amplitudes rate = Amplitudes::Zero();
  const Complex minus_i(0.0, -1.0);
  const auto add = [&](BasisState m, BasisState k) {
    const Complex w = coupling_element(m, k, pulse, t);
    const double omega_mk = transition_frequency(m, k, params);
    rate[m.index()] += minus_i * w * state.amplitudes[k.index()] * std::polar(1.0, omega_mk * t);
  };
  for (const auto& c : couplings) {
    add(c.lower, c.upper);
    add(c.upper, c.lower);
  }
  return rate;
}

double step_size(const Pulse& pulse, const ChainParameters& params, const IntegratorConfig& cfg,
                 std::span<const Coupling> couplings) {
  cfg.validate();
  const double fastest = fastest_rate(pulse, params, couplings);
  if (cfg.fixed_step) {
    if (*cfg.fixed_step * fastest > std::numbers::pi) {
      throw InvalidArgument("fixed step advances the fastest coupling phase by more than pi");
    }
    return *cfg.fixed_step;
  }
  return cfg.max_phase_step / fastest;
}

Evolution apply_pulse(const StateVector& state, const Pulse& pulse, const ChainParameters& params,
                      const IntegratorConfig& cfg, std::span<const Coupling> couplings) {
  require_interaction(state, "apply_pulse");
  pulse.validate();

  Evolution out;
  out.state = state;
  const double tau = pulse.duration();
  if (tau == 0.0) return out;

  const double h_max = step_size(pulse, params, cfg, couplings);
  const auto steps = static_cast<long>(std::ceil(tau / h_max));
  const double h = tau / static_cast<double>(steps);
  const double t0 = state.time;

  PulseKernel kernel(pulse, params, couplings, h);
  Amplitudes d = state.amplitudes;
  Amplitudes k1, k2, k3, k4, tmp;
  using Stage = PulseKernel::Stage;

  for (long n = 0; n < steps; ++n) {
    const double t = t0 + static_cast<double>(n) * h;
    kernel.prepare(t, n % kResyncInterval == 0);
    kernel.evaluate(Stage::start, d, k1);
    tmp = d + (0.5 * h) * k1;
    kernel.evaluate(Stage::mid, tmp, k2);
    tmp = d + (0.5 * h) * k2;
    kernel.evaluate(Stage::mid, tmp, k3);
    tmp = d + h * k3;
    kernel.evaluate(Stage::end, tmp, k4);
    d += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const bool last = n + 1 == steps;
    if (cfg.record && (last || (n + 1) % cfg.record_stride == 0)) {
      StateVector s{d, Picture::interaction, last ? t0 + tau : t + h};
      out.trajectory.samples.push_back(sample_of(s, cfg.record_amplitudes));
    }
  }

  out.state.amplitudes = d;
  out.state.time = t0 + tau;
  return out;
}

Evolution run_sequence(const StateVector& initial, std::span<const Pulse> pulses,
                       const ChainParameters& params, const IntegratorConfig& cfg) {
  cfg.validate();
  Evolution out;
  out.state = initial;
  if (cfg.record) out.trajectory.samples.push_back(sample_of(initial, cfg.record_amplitudes));
  for (const auto& pulse : pulses) {
    Evolution seg = apply_pulse(out.state, pulse, params, cfg);
    out.state = seg.state;
    out.trajectory.append(seg.trajectory);
  }
  return out;
}

StateVector to_schrodinger(const StateVector& state, const ChainParameters& params) {
  if (state.picture == Picture::schrodinger) return state;
  StateVector out = state;
  const Probabilities e = spectrum(params);
  for (int m = 0; m < kNumStates; ++m) {
    out.amplitudes[m] *= std::polar(1.0, -e[m] * state.time);
  }
  out.picture = Picture::schrodinger;
  return out;
}

StateVector to_interaction(const StateVector& state, const ChainParameters& params) {
  if (state.picture == Picture::interaction) return state;
  StateVector out = state;
  const Probabilities e = spectrum(params);
  for (int m = 0; m < kNumStates; ++m) {
    out.amplitudes[m] *= std::polar(1.0, e[m] * state.time);
  }
  out.picture = Picture::interaction;
  return out;
}

StateVector lab_frame_reference(const StateVector& initial, std::span<const Pulse> pulses,
                                const ChainParameters& params, const LabFrameConfig& cfg) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<Complex, kNumStates>;

  if (!(cfg.max_phase_step > 0.0)) throw InvalidArgument("lab-frame phase step must be > 0");

  const StateVector start = to_schrodinger(initial, params);
  const Probabilities e = spectrum(params);
  const double max_energy = e.cwiseAbs().maxCoeff();

  State c;
  for (int m = 0; m < kNumStates; ++m) c[m] = start.amplitudes[m];
  double t = start.time;

  for (const auto& pulse : pulses) {
    pulse.validate();
    const double tau = pulse.duration();
    if (tau == 0.0) continue;
    const double fastest = max_energy + pulse.drive_frequency + pulse.rabi;
    const auto steps = static_cast<std::size_t>(std::ceil(tau * fastest / cfg.max_phase_step));
    const double h = tau / static_cast<double>(steps);
    const double half_rabi = 0.5 * pulse.rabi;

    // i dC/dt = E C + W C, with W_lu = -(Omega/2) z and W_ul = -(Omega/2) conj(z).
    auto rhs = [&](const State& x, State& dxdt, double time) {
      const Complex z = std::polar(1.0, pulse.drive_frequency * time + pulse.phase);
      for (int m = 0; m < kNumStates; ++m) dxdt[m] = Complex(0.0, -e[m]) * x[m];
      for (const auto& cp : kCouplings) {
        const int l = cp.lower.index();
        const int u = cp.upper.index();
        dxdt[l] += Complex(0.0, half_rabi) * z * x[u];
        dxdt[u] += Complex(0.0, half_rabi) * std::conj(z) * x[l];
      }
    };
    odeint::runge_kutta_fehlberg78<State, double, State, double> stepper;
    for (std::size_t n = 0; n < steps; ++n) {
      stepper.do_step(rhs, c, t + static_cast<double>(n) * h, h);
    }
    t += tau;
  }

  StateVector out;
  out.picture = Picture::schrodinger;
  out.time = t;
  for (int m = 0; m < kNumStates; ++m) out.amplitudes[m] = c[m];
  return out;
}

}  // namespace spinchain
