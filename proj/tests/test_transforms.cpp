#include <random>

#include "doctest.h"
#include "esqkd/transforms.hpp"

using namespace esqkd;

namespace {

double gate_distance(const Gate2& a, const Gate2& b) { return a.max_entry_distance(b); }

std::mt19937_64 rng(20240811);

double rand_angle() {
  std::uniform_real_distribution<double> d(-kPi, kPi);
  return d(rng);
}

}  // namespace

TEST_CASE("rot_x basics") {
  CHECK(gate_distance(rot_x(0), identity_gate()) < 1e-12);
  // rot_x(pi) = -i X
  const Gate2 g = rot_x(kPi);
  CHECK(std::abs(g.at(0, 1) - Amplitude(0, -1)) < 1e-12);
  CHECK(std::abs(g.at(1, 0) - Amplitude(0, -1)) < 1e-12);
  CHECK(std::abs(g.at(0, 0)) < 1e-12);
  for (int i = 0; i < 20; ++i) {
    const double t = rand_angle();
    CHECK(gate_distance(rot_x(t) * rot_x(-t), identity_gate()) < 1e-12);
  }
}

TEST_CASE("rot_z basics") {
  CHECK(gate_distance(rot_z(0), identity_gate()) < 1e-12);
  const Gate2 g = rot_z(kPi);
  CHECK(std::abs(g.at(0, 0) - Amplitude(0, -1)) < 1e-12);
  CHECK(std::abs(g.at(1, 1) - Amplitude(0, 1)) < 1e-12);
  for (int i = 0; i < 20; ++i) {
    const double a = rand_angle(), b = rand_angle();
    CHECK(gate_distance(rot_z(a) * rot_z(b), rot_z(a + b)) < 1e-12);
  }
}

TEST_CASE("rot_y basics") {
  CHECK(gate_distance(rot_y(0), identity_gate()) < 1e-12);
  const Gate2 g = rot_y(kPi / 2);
  const double r = 1 / std::sqrt(2.0);
  CHECK(std::abs(g.at(0, 0) - Amplitude(r)) < 1e-12);
  CHECK(std::abs(g.at(1, 0) - Amplitude(r)) < 1e-12);
  for (int i = 0; i < 20; ++i) {
    CHECK_NOTHROW(rot_y(rand_angle()));  // ctor enforces unitarity
  }
}

TEST_CASE("basis_transform matrix form and special cases") {
  CHECK(gate_distance(basis_transform(kPi / 2, kPi / 2), hadamard()) < 1e-12);
  CHECK(gate_distance(basis_transform(0, 0), identity_gate()) < 1e-12);

  // column action on |0>: cos(t/2)|0> - i e^{i phi} sin(t/2)|1>
  const double t = 1.234, f = -0.618;
  const Gate2 g = basis_transform(t, f);
  CHECK(std::abs(g.at(0, 0) - Amplitude(std::cos(t / 2))) < 1e-12);
  CHECK(std::abs(g.at(1, 0) - Amplitude(0, -1) * std::polar(1.0, f) * std::sin(t / 2)) < 1e-12);
  CHECK(std::abs(g.at(1, 1) - std::polar(1.0, 2 * f) * std::cos(t / 2)) < 1e-12);
}

TEST_CASE("basis_transform equals its rotation factorization") {
  for (int i = 0; i < 100; ++i) {
    const double t = rand_angle(), f = rand_angle();
    Gate2 product = rot_z(f) * rot_x(t) * rot_z(f);
    const Amplitude pre = std::polar(1.0, f);
    // multiply the global phase in by hand
    Gate2 scaled(pre * product.at(0, 0), pre * product.at(0, 1),
                 pre * product.at(1, 0), pre * product.at(1, 1));
    CHECK(gate_distance(basis_transform(t, f), scaled) < 1e-12);
  }
}

TEST_CASE("basis_transform periodicity") {
  for (int i = 0; i < 25; ++i) {
    const double t = rand_angle(), f = rand_angle();
    CHECK(gate_distance(basis_transform(t + 4 * kPi, f), basis_transform(t, f)) < 1e-11);
    CHECK(gate_distance(basis_transform(t, f + 2 * kPi), basis_transform(t, f)) < 1e-11);
  }
}

TEST_CASE("dagger inverts") {
  CHECK(gate_distance(dagger(identity_gate()), identity_gate()) < 1e-12);
  for (int i = 0; i < 50; ++i) {
    const Gate2 g = basis_transform(rand_angle(), rand_angle());
    CHECK(gate_distance(dagger(g) * g, identity_gate()) < 1e-12);
    CHECK(gate_distance(dagger(dagger(g)), g) < 1e-12);
  }
}

TEST_CASE("non-unitary construction is rejected") {
  CHECK_THROWS_AS(Gate2(1.0, 0.0, 0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(rot_x(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
}

TEST_CASE("angle canonicalization wraps to (-pi, pi]") {
  const AngleSet a{3 * kPi, -kPi, kPi, 2.5 * kPi};
  const AngleSet c = a.canonical();
  CHECK(c.theta_a == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(c.phi_a == doctest::Approx(kPi).epsilon(1e-12));  // -pi maps to pi
  CHECK(c.theta_b == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(c.phi_b == doctest::Approx(kPi / 2).epsilon(1e-12));
}
