#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace esqkd {

using Amplitude = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

// Tolerance used by structural invariants (unitarity, normalization).
inline constexpr double kStructTol = 1e-12;

/// A 2x2 unitary. Construction rejects matrices with U U^dag != I
/// beyond 1e-12, so every Gate2 in circulation is unitary.
class Gate2 {
 public:
  Gate2(Amplitude a00, Amplitude a01, Amplitude a10, Amplitude a11)
      : m_{a00, a01, a10, a11} {
    check_unitary();
  }

  Amplitude at(int row, int col) const { return m_[row * 2 + col]; }

  friend Gate2 operator*(const Gate2& a, const Gate2& b) {
    return Gate2(a.at(0, 0) * b.at(0, 0) + a.at(0, 1) * b.at(1, 0),
                 a.at(0, 0) * b.at(0, 1) + a.at(0, 1) * b.at(1, 1),
                 a.at(1, 0) * b.at(0, 0) + a.at(1, 1) * b.at(1, 0),
                 a.at(1, 0) * b.at(0, 1) + a.at(1, 1) * b.at(1, 1));
  }

  double max_entry_distance(const Gate2& other) const {
    double d = 0.0;
    for (int i = 0; i < 4; ++i) d = std::max(d, std::abs(m_[i] - other.m_[i]));
    return d;
  }

 private:
  void check_unitary() const {
    // rows of U form an orthonormal pair
    const Amplitude r00 = m_[0] * std::conj(m_[0]) + m_[1] * std::conj(m_[1]);
    const Amplitude r11 = m_[2] * std::conj(m_[2]) + m_[3] * std::conj(m_[3]);
    const Amplitude r01 = m_[0] * std::conj(m_[2]) + m_[1] * std::conj(m_[3]);
    if (std::abs(r00 - 1.0) > kStructTol || std::abs(r11 - 1.0) > kStructTol ||
        std::abs(r01) > kStructTol) {
      throw std::invalid_argument("Gate2: matrix is not unitary");
    }
  }

  std::array<Amplitude, 4> m_;
};

inline Gate2 identity_gate() { return Gate2(1.0, 0.0, 0.0, 1.0); }

inline Gate2 pauli_x() { return Gate2(0.0, 1.0, 1.0, 0.0); }

inline Gate2 pauli_z() { return Gate2(1.0, 0.0, 0.0, -1.0); }

// Rotation about the X axis: [[cos t/2, -i sin t/2], [-i sin t/2, cos t/2]].
inline Gate2 rot_x(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("rot_x: non-finite angle");
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return Gate2(c, Amplitude(0, -s), Amplitude(0, -s), c);
}

// Rotation about the Y axis. Not used by the protocol; provided for completeness.
inline Gate2 rot_y(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("rot_y: non-finite angle");
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return Gate2(c, -s, s, c);
}

// Rotation about the Z axis: diag(e^{-it/2}, e^{it/2}).
inline Gate2 rot_z(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("rot_z: non-finite angle");
  return Gate2(std::polar(1.0, -theta / 2), 0.0, 0.0, std::polar(1.0, theta / 2));
}

/// General Z->X basis change T_x(theta, phi) = e^{i phi} Rz(phi) Rx(theta) Rz(phi),
/// written out as [[cos t/2, -i e^{i phi} sin t/2], [-i e^{i phi} sin t/2, e^{2i phi} cos t/2]].
/// The global e^{i phi} prefactor is kept; it cancels in every probability.
inline Gate2 basis_transform(double theta, double phi) {
  if (!std::isfinite(theta) || !std::isfinite(phi)) {
    throw std::invalid_argument("basis_transform: non-finite angle");
  }
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const Amplitude eip = std::polar(1.0, phi);
  const Amplitude off = Amplitude(0, -1) * eip * s;
  return Gate2(c, off, off, eip * eip * c);
}

// Hadamard = T_x(pi/2, pi/2), the usual (1/sqrt 2) [[1,1],[1,-1]].
inline Gate2 hadamard() {
  const double r = 1.0 / std::sqrt(2.0);
  return Gate2(r, r, r, -r);
}

inline Gate2 dagger(const Gate2& g) {
  return Gate2(std::conj(g.at(0, 0)), std::conj(g.at(1, 0)),
               std::conj(g.at(0, 1)), std::conj(g.at(1, 1)));
}

// Wrap an angle into (-pi, pi].
inline double wrap_angle(double x) {
  double m = std::fmod(x + kPi, 2 * kPi);
  if (m <= 0) m += 2 * kPi;
  return m - kPi;
}

/// The four transformation parameters (theta_A, phi_A, theta_B, phi_B), radians.
/// Evaluation always uses the stored values verbatim; canonical() is for
/// reporting only.
struct AngleSet {
  double theta_a = 0.0;
  double phi_a = 0.0;
  double theta_b = 0.0;
  double phi_b = 0.0;

  AngleSet canonical() const {
    return {wrap_angle(theta_a), wrap_angle(phi_a), wrap_angle(theta_b), wrap_angle(phi_b)};
  }
};

}  // namespace esqkd
