#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bellsim/chsh.hpp"
#include "bellsim/quantum.hpp"
#include "bellsim/rng.hpp"

using namespace bellsim;

namespace {

constexpr double kPi = kTwoPi / 2.0;

QuantumState random_pure_state(RngStream& rng) {
  QuantumState state;
  for (auto& a : state.amp) {
    a = Complex{rng.next_symmetric(), rng.next_symmetric()};
  }
  const double n = state.norm();
  for (auto& a : state.amp) a /= n;
  return state;
}

}  // namespace

TEST_CASE("singlet state amplitudes and norm") {
  const QuantumState s = singlet_state();
  CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.amp[0] == Complex{0.0});
  CHECK(s.amp[1].real() == doctest::Approx(0.70711).epsilon(1e-5));
  CHECK(s.amp[2].real() == doctest::Approx(-0.70711).epsilon(1e-5));
  CHECK(s.amp[3] == Complex{0.0});
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("state validation rejects non-normalized amplitudes") {
  QuantumState bad;
  bad.amp = {Complex{1.0}, Complex{1.0}, Complex{0.0}, Complex{0.0}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(correlator_qm(bad, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("observables at angle zero are the z components") {
  const Observable first = observable_from_angle(Wing::first, 0.0);
  const double diag_first[4] = {+1, +1, -1, -1};
  const Observable second = observable_from_angle(Wing::second, 0.0);
  const double diag_second[4] = {+1, -1, +1, -1};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const Complex expected_first = (i == j) ? Complex{diag_first[i]} : Complex{0.0};
      const Complex expected_second = (i == j) ? Complex{diag_second[i]} : Complex{0.0};
      CHECK(std::abs(first.matrix.at(i, j) - expected_first) <= 1e-15);
      CHECK(std::abs(second.matrix.at(i, j) - expected_second) <= 1e-15);
    }
  }
}

TEST_CASE("observables are Hermitian, square to identity, and are traceless") {
  // Hermitian + O^2 = 1 forces eigenvalues in {+1, -1}; zero trace makes it
  // two of each.
  RngStream rng = RngStream::from_seed(3);
  for (int i = 0; i < 200; ++i) {
    const Wing wing = (i % 2 == 0) ? Wing::first : Wing::second;
    const Observable o = observable_from_angle(wing, rng.next_symmetric() * 10.0);
    CHECK(hermiticity_residual(o.matrix) <= 1e-12);
    CHECK(frobenius_norm(sub(mul(o.matrix, o.matrix), identity4())) <= 1e-12);
    CHECK(std::abs(trace(o.matrix)) <= 1e-12);
  }
}

TEST_CASE("general unit directions extend the x-z plane convention") {
  RngStream rng = RngStream::from_seed(101);
  for (int i = 0; i < 50; ++i) {
    const double angle = rng.next_symmetric() * 7.0;
    const Mat2 planar = spin_direction(angle);
    const Mat2 general = spin_direction({std::sin(angle), 0.0, std::cos(angle)});
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(std::abs(planar.m[k] - general.m[k]) <= 1e-12);
    }
  }

  // sigma_y via the out-of-plane direction (0, 1, 0).
  const Observable y = observable_from_direction(Wing::second, {0.0, 1.0, 0.0});
  CHECK(hermiticity_residual(y.matrix) <= 1e-12);
  CHECK(frobenius_norm(sub(mul(y.matrix, y.matrix), identity4())) <= 1e-12);
  CHECK(std::abs(trace(y.matrix)) <= 1e-12);

  CHECK_THROWS_AS(spin_direction({1.0, 1.0, 0.0}), std::domain_error);
}

TEST_CASE("correlator_qm on the singlet equals -cos(alpha - beta)") {
  const QuantumState s = singlet_state();
  CHECK(correlator_qm(s, 0.3, 0.3).value == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(correlator_qm(s, kPi / 2.0, 0.0).value) <= 1e-12);
  CHECK(correlator_qm(s, kPi / 4.0, 0.0).value ==
        doctest::Approx(-1.0 / std::numbers::sqrt2).epsilon(1e-12));

  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const double alpha = i * kTwoPi / 100.0;
      const double beta = j * kTwoPi / 100.0;
      worst = std::max(worst,
                       std::abs(correlator_qm(s, alpha, beta).value + std::cos(alpha - beta)));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("singlet correlator depends only on the angle difference") {
  const QuantumState s = singlet_state();
  RngStream rng = RngStream::from_seed(19);
  for (int i = 0; i < 300; ++i) {
    const double alpha = rng.next_unit() * kTwoPi;
    const double beta = rng.next_unit() * kTwoPi;
    const double shift = rng.next_symmetric() * 5.0;
    CHECK(std::abs(correlator_qm(s, alpha + shift, beta + shift).value -
                   correlator_qm(s, alpha, beta).value) <= 1e-12);
  }
}

TEST_CASE("joint_outcome_distribution matches the closed form and correlator") {
  const QuantumState s = singlet_state();

  const auto equal_angles = joint_outcome_distribution(s, 0.7, 0.7);
  CHECK(equal_angles.prob(+1, -1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(equal_angles.prob(-1, +1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(equal_angles.prob(+1, +1)) <= 1e-12);
  CHECK(std::abs(equal_angles.prob(-1, -1)) <= 1e-12);

  RngStream rng = RngStream::from_seed(43);
  for (int i = 0; i < 300; ++i) {
    const double alpha = rng.next_unit() * kTwoPi;
    const double beta = rng.next_unit() * kTwoPi;
    const auto dist = joint_outcome_distribution(s, alpha, beta);
    double sum = 0.0;
    for (int a : kOutcomes) {
      for (int b : kOutcomes) {
        const double expected =
            (1.0 - static_cast<double>(a * b) * std::cos(alpha - beta)) / 4.0;
        CHECK(std::abs(dist.prob(a, b) - expected) <= 1e-12);
        CHECK(dist.prob(a, b) >= -kIneqTol);
        sum += dist.prob(a, b);
      }
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    // Consistency triangle: the distribution's correlator is correlator_qm.
    CHECK(std::abs(dist.correlator() - correlator_qm(s, alpha, beta).value) <= 1e-12);
    // Maximally mixed reduced state: uniform marginals.
    CHECK(dist.marginal_second()[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(dist.marginal_first()[0] == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("expectation values of spin observables are real") {
  RngStream rng = RngStream::from_seed(97);
  for (int i = 0; i < 200; ++i) {
    const QuantumState state = random_pure_state(rng);
    const double alpha = rng.next_unit() * kTwoPi;
    const double beta = rng.next_unit() * kTwoPi;
    const Complex e = expectation(state, kron(spin_direction(alpha), spin_direction(beta)));
    CHECK(std::abs(e.imag()) <= 1e-12);
    CHECK(std::abs(e.real()) <= 1.0 + kIneqTol);
  }
}

TEST_CASE("opposite-wing observables commute") {
  RngStream rng = RngStream::from_seed(47);
  for (int i = 0; i < 100; ++i) {
    const Observable a = observable_from_angle(Wing::first, rng.next_symmetric() * 7.0);
    const Observable b = observable_from_angle(Wing::second, rng.next_symmetric() * 7.0);
    CHECK(commutator_norm(a, b) <= 1e-12);
  }
}

TEST_CASE("same-wing commutators size as 2*sqrt(2)*|sin(difference)|") {
  const Observable a0 = observable_from_angle(Wing::first, 0.0);
  CHECK(commutator_norm(a0, observable_from_angle(Wing::first, 0.0)) <= 1e-12);

  const Observable a45 = observable_from_angle(Wing::first, kPi / 4.0);
  CHECK(commutator_norm(a0, a45) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(commutator_norm(a0, a45) > 0.0);

  RngStream rng = RngStream::from_seed(53);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.next_symmetric() * 5.0;
    const double y = rng.next_symmetric() * 5.0;
    const Observable b1 = observable_from_angle(Wing::second, x);
    const Observable b2 = observable_from_angle(Wing::second, y);
    const double expected = 2.0 * std::numbers::sqrt2 * std::abs(std::sin(x - y));
    CHECK(commutator_norm(b1, b2) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("chsh_qm reaches 2*sqrt(2) at the maximal-violation settings") {
  const QuantumState s = singlet_state();
  CHECK(chsh_qm(s, max_violation_settings()) ==
        doctest::Approx(2.0 * std::numbers::sqrt2).epsilon(1e-12));
  CHECK(chsh_qm(s, AngleSettings{0.4, 0.4, 0.4, 0.4}) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("product states obey the factorized bound") {
  QuantumState up_up;
  up_up.amp = {Complex{1.0}, Complex{0.0}, Complex{0.0}, Complex{0.0}};
  RngStream rng = RngStream::from_seed(59);
  for (int i = 0; i < 500; ++i) {
    const AngleSettings settings{rng.next_unit() * kTwoPi, rng.next_unit() * kTwoPi,
                                 rng.next_unit() * kTwoPi, rng.next_unit() * kTwoPi};
    // <uu| sigma.n_a (x) sigma.n_b |uu> = cos(a) * cos(b).
    const auto [a1, b1] = pair_angles(settings, SettingPair::ab);
    CHECK(correlator_qm(up_up, a1, b1).value ==
          doctest::Approx(std::cos(a1) * std::cos(b1)).epsilon(1e-12));
    const double b = chsh_qm(up_up, settings);
    const double oracle =
        q_quantity(std::cos(settings.alpha), std::cos(settings.alpha_prime),
                   std::cos(settings.beta), std::cos(settings.beta_prime));
    CHECK(b == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(b <= 2.0 + kIneqTol);
  }
}

TEST_CASE("chsh_qm stays below the quantum ceiling on random states and settings") {
  RngStream rng = RngStream::from_seed(61);
  double max_b = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const QuantumState state = random_pure_state(rng);
    const AngleSettings settings{rng.next_unit() * kTwoPi, rng.next_unit() * kTwoPi,
                                 rng.next_unit() * kTwoPi, rng.next_unit() * kTwoPi};
    max_b = std::max(max_b, chsh_qm(state, settings));
  }
  CHECK(max_b <= 2.0 * std::numbers::sqrt2 + 1e-9);
}
