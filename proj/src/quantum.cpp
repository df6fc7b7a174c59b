#include "bellsim/quantum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bellsim/chsh.hpp"

namespace bellsim {

Mat2 identity2() {
  Mat2 m{};
  m.at(0, 0) = 1.0;
  m.at(1, 1) = 1.0;
  return m;
}

Mat4 identity4() {
  Mat4 m{};
  for (int i = 0; i < 4; ++i) m.at(i, i) = 1.0;
  return m;
}

Mat4 mul(const Mat4& a, const Mat4& b) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 4; ++k) {
      const Complex aik = a.at(i, k);
      if (aik == Complex{}) continue;
      for (int j = 0; j < 4; ++j) r.at(i, j) += aik * b.at(k, j);
    }
  }
  return r;
}

Mat4 sub(const Mat4& a, const Mat4& b) {
  Mat4 r{};
  for (std::size_t i = 0; i < 16; ++i) r.m[i] = a.m[i] - b.m[i];
  return r;
}

Mat4 adjoint(const Mat4& a) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) r.at(i, j) = std::conj(a.at(j, i));
  }
  return r;
}

double frobenius_norm(const Mat4& a) {
  double sum = 0.0;
  for (const Complex& v : a.m) sum += std::norm(v);
  return std::sqrt(sum);
}

double hermiticity_residual(const Mat4& a) { return frobenius_norm(sub(a, adjoint(a))); }

Complex trace(const Mat4& a) {
  Complex t{};
  for (int i = 0; i < 4; ++i) t += a.at(i, i);
  return t;
}

Mat4 kron(const Mat2& first, const Mat2& second) {
  Mat4 r{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
          r.at(i * 2 + k, j * 2 + l) = first.at(i, j) * second.at(k, l);
        }
      }
    }
  }
  return r;
}

double QuantumState::norm() const {
  double sum = 0.0;
  for (const Complex& a : amp) sum += std::norm(a);
  return std::sqrt(sum);
}

void QuantumState::validate() const {
  for (const Complex& a : amp) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw std::invalid_argument("state amplitudes must be finite");
    }
  }
  if (std::abs(norm() - 1.0) > kIneqTol) {
    throw std::invalid_argument("state must be normalized");
  }
}

QuantumState singlet_state() {
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  return QuantumState{{Complex{0.0}, Complex{inv_sqrt2}, Complex{-inv_sqrt2}, Complex{0.0}}};
}

Mat2 spin_direction(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat2 m{};
  m.at(0, 0) = c;
  m.at(0, 1) = s;
  m.at(1, 0) = s;
  m.at(1, 1) = -c;
  return m;
}

Mat2 spin_direction(const std::array<double, 3>& direction) {
  const auto [x, y, z] = direction;
  const double length = std::sqrt(x * x + y * y + z * z);
  if (!std::isfinite(length) || std::abs(length - 1.0) > kIneqTol) {
    throw std::domain_error("measurement direction must be a unit vector");
  }
  Mat2 m{};
  m.at(0, 0) = z;
  m.at(0, 1) = Complex{x, -y};
  m.at(1, 0) = Complex{x, y};
  m.at(1, 1) = -z;
  return m;
}

namespace {

Observable make_observable(Wing wing, const Mat2& spin, double angle) {
  Observable o;
  o.matrix = (wing == Wing::first) ? kron(spin, identity2()) : kron(identity2(), spin);
  o.wing = wing;
  o.angle = angle;
  return o;
}

}  // namespace

Observable observable_from_angle(Wing wing, double angle) {
  return make_observable(wing, spin_direction(angle), angle);
}

Observable observable_from_direction(Wing wing, const std::array<double, 3>& direction) {
  return make_observable(wing, spin_direction(direction),
                         std::atan2(direction[0], direction[2]));
}

Complex expectation(const QuantumState& state, const Mat4& matrix) {
  Complex sum{};
  for (int i = 0; i < 4; ++i) {
    Complex row{};
    for (int j = 0; j < 4; ++j) {
      row += matrix.at(i, j) * state.amp[static_cast<std::size_t>(j)];
    }
    sum += std::conj(state.amp[static_cast<std::size_t>(i)]) * row;
  }
  return sum;
}

Correlator correlator_qm(const QuantumState& state, double alpha, double beta) {
  state.validate();
  const Complex e = expectation(state, kron(spin_direction(alpha), spin_direction(beta)));
  return Correlator{e.real()};
}

OutcomePairDistribution joint_outcome_distribution(const QuantumState& state, double alpha,
                                                   double beta) {
  state.validate();
  const Mat2 spin_a = spin_direction(alpha);
  const Mat2 spin_b = spin_direction(beta);
  const Mat2 id = identity2();

  // Pi_+- = (1 +- sigma.n) / 2, formed analytically.
  auto projector = [&id](const Mat2& spin, int outcome) {
    Mat2 p{};
    for (std::size_t i = 0; i < 4; ++i) {
      p.m[i] = 0.5 * (id.m[i] + static_cast<double>(outcome) * spin.m[i]);
    }
    return p;
  };

  OutcomePairDistribution dist{};
  for (int a : kOutcomes) {
    for (int b : kOutcomes) {
      const Complex e = expectation(state, kron(projector(spin_a, a), projector(spin_b, b)));
      dist.p[static_cast<std::size_t>(outcome_index(a))]
            [static_cast<std::size_t>(outcome_index(b))] = e.real();
    }
  }
  dist.validate();
  return dist;
}

double commutator_norm(const Observable& o1, const Observable& o2) {
  const Mat4 c = sub(mul(o1.matrix, o2.matrix), mul(o2.matrix, o1.matrix));
  return frobenius_norm(c) / std::numbers::sqrt2;
}

double chsh_qm(const QuantumState& state, const AngleSettings& settings) {
  settings.validate();
  auto xi = [&state, &settings](SettingPair pair) {
    const auto [a, b] = pair_angles(settings, pair);
    return correlator_qm(state, a, b);
  };
  return chsh_combination(xi(SettingPair::ab), xi(SettingPair::ab_prime),
                          xi(SettingPair::a_prime_b), xi(SettingPair::a_prime_b_prime));
}

}  // namespace bellsim
