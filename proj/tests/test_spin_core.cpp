#include <cmath>
#include <limits>
#include <random>

#include <doctest.h>

#include "spinchain/spin_core.hpp"

using namespace spinchain;

namespace {

const ChainParameters kRef = ChainParameters::reference();

double energy_mhz(int index) { return to_mhz(energy(BasisState(index), kRef)); }

}  // namespace

TEST_CASE("unit conversion round-trips") {
  CHECK(mhz(1.0) == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(to_mhz(mhz(0.1234)) == doctest::Approx(0.1234).epsilon(1e-15));
}

TEST_CASE("reference parameters") {
  CHECK(to_mhz(kRef.larmor[0]) == doctest::Approx(100.0));
  CHECK(to_mhz(kRef.larmor[3]) == doctest::Approx(800.0));
  CHECK(to_mhz(kRef.j1) == doctest::Approx(10.0));
  CHECK(to_mhz(kRef.j2) == doctest::Approx(0.4));
  CHECK_NOTHROW(kRef.validate());
}

TEST_CASE("parameter validation") {
  ChainParameters p = kRef;
  p.larmor[2] = p.larmor[1];
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = kRef;
  p.j2 = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = kRef;
  p.larmor[0] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("basis indexing and registers") {
  const BasisState s(13);  // |11;01>
  CHECK(s.bit(0) == 1);
  CHECK(s.bit(1) == 0);
  CHECK(s.bit(2) == 1);
  CHECK(s.bit(3) == 1);
  CHECK(s.x_register() == 3);
  CHECK(s.y_register() == 1);
  CHECK(BasisState::from_registers(3, 1) == s);
  CHECK(s.flipped(1).index() == 15);
  CHECK_THROWS_AS(BasisState(16), InvalidArgument);
  CHECK_THROWS_AS(BasisState(-1), InvalidArgument);
  for (int m = 0; m < kNumStates; ++m) {
    const BasisState b(m);
    CHECK(BasisState::from_registers(b.x_register(), b.y_register()) == b);
  }
}

TEST_CASE("hamming distance and flipped qubit") {
  CHECK(hamming_distance(BasisState(0), BasisState(15)) == 4);
  CHECK(hamming_distance(BasisState(5), BasisState(7)) == 1);
  CHECK(flipped_qubit(BasisState(5), BasisState(7)) == 1);
  CHECK(flipped_qubit(BasisState(13), BasisState(5)) == 3);
  CHECK_FALSE(flipped_qubit(BasisState(0), BasisState(3)).has_value());
  CHECK_FALSE(flipped_qubit(BasisState(6), BasisState(6)).has_value());
}

TEST_CASE("frozen energies") {
  // Hand evaluation of the Ising energy at the reference parameters.
  CHECK(energy_mhz(0) == doctest::Approx(-765.4).epsilon(1e-12));
  CHECK(energy_mhz(1) == doctest::Approx(-655.0).epsilon(1e-12));
  CHECK(energy_mhz(4) == doctest::Approx(-345.0).epsilon(1e-12));
  CHECK(to_mhz(transition_frequency(BasisState(4), BasisState(0), kRef)) ==
        doctest::Approx(420.4).epsilon(1e-12));
  CHECK(to_mhz(transition_frequency(BasisState(1), BasisState(0), kRef)) ==
        doctest::Approx(110.4).epsilon(1e-12));
}

TEST_CASE("spectrum matches the operator form of H0") {
  const Operator h0 = assemble_h0(kRef);
  const Probabilities e = spectrum(kRef);
  CHECK((h0 - Operator(h0.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
  for (int m = 0; m < kNumStates; ++m) {
    CHECK(h0(m, m).real() == doctest::Approx(e[m]).epsilon(1e-13));
    CHECK(h0(m, m).imag() == 0.0);
  }

  ChainParameters other = ChainParameters::from_mhz({37.0, 151.0, 290.0, 733.0}, 3.3, -0.7);
  const Operator h1 = assemble_h0(other);
  for (int m = 0; m < kNumStates; ++m) {
    CHECK(h1(m, m).real() == doctest::Approx(energy(BasisState(m), other)).epsilon(1e-13));
  }
}

TEST_CASE("transition frequencies") {
  CHECK(transition_frequency(BasisState(3), BasisState(7), kRef) ==
        doctest::Approx(-transition_frequency(BasisState(7), BasisState(3), kRef)));
  CHECK(resonant_drive_frequency(BasisState(0), BasisState(4), kRef) ==
        doctest::Approx(mhz(420.4)));
  CHECK(resonant_drive_frequency(BasisState(4), BasisState(0), kRef) ==
        doctest::Approx(mhz(420.4)));
  CHECK_THROWS_AS(resonant_drive_frequency(BasisState(0), BasisState(3), kRef), InvalidArgument);
  CHECK_THROWS_AS(resonant_drive_frequency(BasisState(2), BasisState(2), kRef), InvalidArgument);
}

TEST_CASE("pulse validation") {
  const Pulse ok{mhz(420.4), 0.0, mhz(0.1), std::numbers::pi, std::nullopt};
  CHECK_NOTHROW(ok.validate());
  CHECK(ok.duration() == doctest::Approx(5.0));

  Pulse p = ok;
  p.rabi = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p.duration_override = 3.0;
  CHECK_NOTHROW(p.validate());
  CHECK(p.duration() == 3.0);

  p = ok;
  p.rabi = -1.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = ok;
  p.drive_frequency = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = ok;
  p.angle = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = ok;
  p.duration_override = -1.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("coupling elements match the operator form of W") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Pulse pulse{mhz(50.0 + 100.0 * u(rng)), u(rng), mhz(0.05 + 0.01 * u(rng)),
                      std::numbers::pi, std::nullopt};
    const double t = u(rng);
    const Operator w = assemble_w(pulse, t);
    CHECK((w - w.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    for (int m = 0; m < kNumStates; ++m) {
      for (int k = 0; k < kNumStates; ++k) {
        const Complex c = coupling_element(BasisState(m), BasisState(k), pulse, t);
        CHECK(std::abs(c - w(m, k)) < 1e-14);
        if (hamming_distance(BasisState(m), BasisState(k)) != 1) CHECK(c == Complex{});
      }
    }
  }
}

TEST_CASE("raising direction of the coupling") {
  const Pulse pulse{1.0, 0.25, 2.0, std::numbers::pi, std::nullopt};
  const double t = 0.5;
  // <0|W|1>: I^+ takes the excited bit down, phase e^{+i(wt+phi)}.
  const Complex up = coupling_element(BasisState(0), BasisState(1), pulse, t);
  CHECK(std::abs(up - (-1.0 * std::polar(1.0, 0.75))) < 1e-15);
  const Complex down = coupling_element(BasisState(1), BasisState(0), pulse, t);
  CHECK(std::abs(down - std::conj(up)) < 1e-15);
}
