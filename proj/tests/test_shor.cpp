#include <cmath>
#include <numeric>

#include <doctest.h>

#include "spinchain/shor.hpp"

using namespace spinchain;

namespace {

const ChainParameters kRef = ChainParameters::reference();
constexpr double kPi = std::numbers::pi;

ShorOutcome with_marginal(std::array<double, 4> marginal) {
  ShorOutcome o;
  o.marginal = marginal;
  return o;
}

}  // namespace

TEST_CASE("modular exponentiation") {
  CHECK(mod_exp(3, 0, 4) == 1);
  CHECK(mod_exp(3, 1, 4) == 3);
  CHECK(mod_exp(3, 2, 4) == 1);
  CHECK(mod_exp(7, 10, 15) == 4);
  CHECK(mod_exp(2, 62, 1000000007) == 145586002);
  CHECK_THROWS_AS(mod_exp(3, 1, 1), InvalidArgument);
  CHECK_THROWS_AS(mod_exp(3, -1, 4), InvalidArgument);
}

TEST_CASE("classical period") {
  CHECK(classical_period(3, 4) == 2);
  CHECK(classical_period(1, 9) == 1);
  CHECK(classical_period(2, 15) == 4);
  CHECK_THROWS_AS(classical_period(2, 4), InvalidArgument);
}

TEST_CASE("period agrees with the mod_exp cycle for every coprime pair up to 50") {
  for (long n = 2; n <= 50; ++n) {
    for (long q = 1; q < n; ++q) {
      if (std::gcd(q, n) != 1) continue;
      // Brute force: repeated multiplication until the orbit returns to 1.
      long value = q % n;
      long t = 1;
      while (value != 1) {
        value = (value * q) % n;
        ++t;
      }
      const long period = classical_period(q, n);
      CHECK(period == t);
      for (long x = 0; x < 2 * period; ++x) {
        CHECK(mod_exp(q, x + period, n) == mod_exp(q, x, n));
      }
    }
  }
}

TEST_CASE("factors from the period") {
  CHECK(factors_from_period(3, 2, 4) == std::pair<long, long>{2, 4});
  CHECK(factors_from_period(7, 4, 15) == std::pair<long, long>{3, 5});
  CHECK_THROWS_AS(factors_from_period(3, 1, 4), OddPeriod);
  CHECK_THROWS_AS(factors_from_period(2, 3, 7), OddPeriod);
}

TEST_CASE("protocol shape at the reference point") {
  const double rabi = mhz(0.1);
  const auto stages = build_protocol(kRef, rabi);
  REQUIRE(stages.size() == 3);
  CHECK(stages[0].name == StageName::superposition);
  CHECK(stages[1].name == StageName::oracle);
  CHECK(stages[2].name == StageName::fourier);
  CHECK(stages[0].pulses.size() == 3);
  CHECK(stages[1].pulses.size() == 4);
  CHECK(stages[2].pulses.size() == 5);
  CHECK(flatten(stages).size() == 12);

  const std::vector<std::pair<int, int>> superposition = {{0, 4}, {0, 8}, {4, 12}};
  const std::vector<std::pair<int, int>> oracle = {{0, 1}, {4, 5}, {5, 7}, {13, 15}};
  const std::vector<std::pair<int, int>> fourier = {{6, 7}, {2, 6}, {2, 3}, {14, 15}, {11, 15}};
  CHECK(stages[0].transitions == superposition);
  CHECK(stages[1].transitions == oracle);
  CHECK(stages[2].transitions == fourier);

  for (const auto& stage : stages) {
    const double angle = stage.name == StageName::superposition ? kPi / 2 : kPi;
    for (std::size_t i = 0; i < stage.pulses.size(); ++i) {
      const Pulse& p = stage.pulses[i];
      const auto [m, k] = stage.transitions[i];
      CHECK(p.angle == angle);
      CHECK(p.phase == 0.0);
      CHECK(p.rabi == rabi);
      CHECK(p.drive_frequency ==
            doctest::Approx(resonant_drive_frequency(BasisState(m), BasisState(k), kRef)));
    }
  }
  CHECK(to_mhz(stages[0].pulses[0].drive_frequency) == doctest::Approx(420.4).epsilon(1e-12));
  CHECK(stages[0].pulses[0].duration() == doctest::Approx(2.5));
  CHECK(stages[1].pulses[0].duration() == doctest::Approx(5.0));
}

TEST_CASE("drives are re-tuned with J'") {
  auto no_second = kRef;
  no_second.j2 = 0.0;
  const auto a = flatten(build_protocol(kRef, mhz(0.1)));
  const auto b = flatten(build_protocol(no_second, mhz(0.1)));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double shift = std::abs(to_mhz(a[i].drive_frequency - b[i].drive_frequency));
    CHECK(shift == doctest::Approx(0.4).epsilon(1e-9));
  }
}

TEST_CASE("addressability") {
  // Qubit 1 moved so that one of its lines sits 0.3 from the (0,1) drive.
  const auto crowded = ChainParameters::from_mhz({100.0, 110.3, 400.0, 800.0}, 10.0, 0.4);
  CHECK_THROWS_AS(build_protocol(crowded, mhz(0.1)), AddressabilityError);
  CHECK_NOTHROW(build_protocol(crowded, mhz(0.1), mhz(0.1)));
  CHECK_THROWS_AS(build_protocol(kRef, 0.0), InvalidArgument);
}

TEST_CASE("expected wavefunction") {
  const StateVector e = expected_wavefunction();
  CHECK(e.picture == Picture::schrodinger);
  CHECK(e.norm_squared() == doctest::Approx(1.0));
  for (int m = 0; m < kNumStates; ++m) {
    const bool in = m == 1 || m == 3 || m == 9 || m == 11;
    CHECK(e.amplitudes[m] == Complex(in ? 0.5 : 0.0, 0.0));
  }
  const auto marginal = x_marginal(e.probabilities());
  CHECK(marginal == std::array<double, 4>{0.5, 0.0, 0.5, 0.0});
}

TEST_CASE("peak analysis") {
  ShorOutcome two = with_marginal({0.49, 0.01, 0.49, 0.01});
  analyse_marginal(two);
  CHECK(two.peaks == std::vector<int>{0, 2});
  CHECK(two.peak_spacing == 2);
  CHECK(two.period == 2);
  REQUIRE(two.factors.has_value());
  CHECK(two.factors->first == 2);

  ShorOutcome uniform = with_marginal({0.25, 0.25, 0.25, 0.25});
  analyse_marginal(uniform);
  CHECK(uniform.period == 4);
  CHECK(uniform.factors == std::pair<long, long>{4, 2});

  ShorOutcome single = with_marginal({1.0, 0.0, 0.0, 0.0});
  analyse_marginal(single);
  CHECK(single.period == 1);
  CHECK_FALSE(single.factors.has_value());

  ShorOutcome uneven = with_marginal({0.4, 0.3, 0.0, 0.3});
  CHECK_THROWS_AS(analyse_marginal(uneven), ProtocolFailure);
  ShorOutcome odd = with_marginal({0.5, 0.0, 0.0, 0.5});
  CHECK_THROWS_AS(analyse_marginal(odd), ProtocolFailure);
  ShorOutcome empty = with_marginal({0.0, 0.0, 0.0, 0.0});
  CHECK_THROWS_AS(analyse_marginal(empty), ProtocolFailure);
}

TEST_CASE("measurement sampling") {
  const std::array<double, 4> marginal = {0.5, 0.0, 0.5, 0.0};
  const auto a = sample_measurements(marginal, 2000, 42);
  const auto b = sample_measurements(marginal, 2000, 42);
  CHECK(a == b);
  REQUIRE(a.size() == 2000);
  long zeros = 0;
  for (int x : a) {
    CHECK((x == 0 || x == 2));
    zeros += x == 0;
  }
  CHECK(std::abs(zeros - 1000) < 150);
  CHECK(sample_measurements(marginal, 0, 1).empty());
}

TEST_CASE("stage names") {
  CHECK(to_string(StageName::superposition) == "superposition");
  CHECK(to_string(StageName::oracle) == "oracle");
  CHECK(to_string(StageName::fourier) == "fourier");
}
