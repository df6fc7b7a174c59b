#pragma once

#include <array>
#include <complex>

#include "bellsim/types.hpp"

namespace bellsim {

using Complex = std::complex<double>;

// Fixed-size complex matrices; all the linear algebra this problem needs.
struct Mat2 {
  std::array<Complex, 4> m{};  // row-major

  Complex& at(int r, int c) { return m[static_cast<std::size_t>(r * 2 + c)]; }
  const Complex& at(int r, int c) const { return m[static_cast<std::size_t>(r * 2 + c)]; }
};

struct Mat4 {
  std::array<Complex, 16> m{};  // row-major

  Complex& at(int r, int c) { return m[static_cast<std::size_t>(r * 4 + c)]; }
  const Complex& at(int r, int c) const { return m[static_cast<std::size_t>(r * 4 + c)]; }
};

Mat2 identity2();
Mat4 identity4();
Mat4 mul(const Mat4& a, const Mat4& b);
Mat4 sub(const Mat4& a, const Mat4& b);
Mat4 adjoint(const Mat4& a);
double frobenius_norm(const Mat4& a);
/// Frobenius norm of a - a^dagger.
double hermiticity_residual(const Mat4& a);
Complex trace(const Mat4& a);

/// Tensor product in wing-1-major basis order (uu, ud, du, dd):
/// out[2i+k, 2j+l] = first[i,j] * second[k,l].
Mat4 kron(const Mat2& first, const Mat2& second);

/// Two-qubit pure state, basis order (uu, ud, du, dd).
struct QuantumState {
  std::array<Complex, 4> amp{};

  double norm() const;
  void validate() const;  // throws std::invalid_argument unless |norm - 1| <= kIneqTol
};

/// (|ud> - |du>) / sqrt(2).
QuantumState singlet_state();

/// Spin component along the x-z plane direction with polar angle `angle`:
/// cos(angle) * sigma_z + sin(angle) * sigma_x. Real, symmetric, squares
/// to the identity.
Mat2 spin_direction(double angle);

/// Spin component along an arbitrary unit vector (x, y, z):
/// x*sigma_x + y*sigma_y + z*sigma_z. The scalar-angle form above is the
/// (sin a, 0, cos a) special case.
Mat2 spin_direction(const std::array<double, 3>& direction);

enum class Wing { first, second };

/// One-wing spin observable on the two-qubit space: sigma.n (x) 1 or
/// 1 (x) sigma.n. Hermitian with eigenvalues {+1, +1, -1, -1}.
struct Observable {
  Mat4 matrix{};
  Wing wing = Wing::first;
  double angle = 0.0;
};

Observable observable_from_angle(Wing wing, double angle);
Observable observable_from_direction(Wing wing, const std::array<double, 3>& direction);

/// <psi| M |psi>.
Complex expectation(const QuantumState& state, const Mat4& matrix);

/// <psi| sigma.n_alpha (x) sigma.n_beta |psi>. On the singlet this equals
/// -cos(alpha - beta).
Correlator correlator_qm(const QuantumState& state, double alpha, double beta);

/// P(a, b) = <psi| Pi_a(alpha) (x) Pi_b(beta) |psi> with the analytic
/// eigenprojectors Pi_+- = (1 +- sigma.n) / 2.
OutcomePairDistribution joint_outcome_distribution(const QuantumState& state,
                                                   double alpha, double beta);

/// Magnitude of [O1, O2], reported per acting wing: each observable is
/// M (x) 1 or 1 (x) M, so the 4x4 Frobenius norm carries a factor sqrt(2)
/// from the inert identity, which is divided out. Opposite-wing pairs give
/// 0; same-wing pairs give 2*sqrt(2)*|sin(angle difference)|.
double commutator_norm(const Observable& o1, const Observable& o2);

/// CHSH combination of the four quantum correlators at the given settings.
double chsh_qm(const QuantumState& state, const AngleSettings& settings);

}  // namespace bellsim
