#include <random>

#include "doctest.h"
#include "esqkd/qstate.hpp"

using namespace esqkd;

namespace {

std::mt19937_64 rng(777001);

double rand_angle() {
  std::uniform_real_distribution<double> d(-kPi, kPi);
  return d(rng);
}

// Haar-ish random state over the given labels, good enough for property tests.
PureState random_state(const std::vector<std::string>& labels) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Amplitude> a(std::size_t{1} << labels.size());
  double n2 = 0.0;
  for (auto& v : a) {
    v = Amplitude(g(rng), g(rng));
    n2 += std::norm(v);
  }
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& v : a) v *= inv;
  return PureState(labels, std::move(a));
}

}  // namespace

TEST_CASE("bell_state amplitudes") {
  const double r = 1 / std::sqrt(2.0);
  auto phip = bell_state(BellOutcome::PhiPlus);
  CHECK(phip.amplitudes()[0] == Amplitude(r));
  CHECK(phip.amplitudes()[1] == Amplitude(0));
  CHECK(phip.amplitudes()[2] == Amplitude(0));
  CHECK(phip.amplitudes()[3] == Amplitude(r));
  auto psim = bell_state(BellOutcome::PsiMinus);
  CHECK(psim.amplitudes()[1] == Amplitude(r));
  CHECK(psim.amplitudes()[2] == Amplitude(-r));
  for (BellOutcome o : kBellOutcomes) CHECK(norm(bell_state(o)) == doctest::Approx(1.0));
}

TEST_CASE("tensor basics") {
  auto z0 = PureState::basis("a", 0);
  auto z1 = PureState::basis("b", 0);
  auto t = tensor(z0, z1);
  CHECK(t.dim() == 4);
  CHECK(t.amplitudes()[0] == Amplitude(1));

  auto two_pairs = tensor(bell_state(BellOutcome::PhiPlus, "1", "2"),
                          bell_state(BellOutcome::PhiPlus, "3", "4"));
  CHECK(two_pairs.dim() == 16);
  for (std::size_t idx : {std::size_t{0}, std::size_t{3}, std::size_t{12}, std::size_t{15}}) {
    CHECK(std::abs(two_pairs.amplitudes()[idx] - Amplitude(0.5)) < 1e-15);
  }
  CHECK(norm(two_pairs) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(tensor(z0, PureState::basis("a", 1)), std::invalid_argument);
}

TEST_CASE("apply_gate matches the transformed Bell state") {
  // T on qubit 1 of Phi+ gives cos(t/2)(|00>+e^{2if}|11>)/sqrt2
  //                           - i e^{if} sin(t/2)(|01>+|10>)/sqrt2
  const double t = 0.83, f = 1.91;
  auto out = apply_gate(bell_state(BellOutcome::PhiPlus, "1", "2"),
                        basis_transform(t, f), "1");
  const double r = 1 / std::sqrt(2.0);
  const Amplitude c = std::cos(t / 2), s = std::sin(t / 2);
  const Amplitude mie = Amplitude(0, -1) * std::polar(1.0, f);
  CHECK(std::abs(out.amplitudes()[0] - r * c) < 1e-12);
  CHECK(std::abs(out.amplitudes()[1] - r * mie * s) < 1e-12);
  CHECK(std::abs(out.amplitudes()[2] - r * mie * s) < 1e-12);
  CHECK(std::abs(out.amplitudes()[3] - r * std::polar(1.0, 2 * f) * c) < 1e-12);
}

TEST_CASE("apply_gate identity and involution") {
  auto s = random_state({"x", "y", "z"});
  auto same = apply_gate(s, identity_gate(), "y");
  for (std::size_t i = 0; i < s.dim(); ++i) {
    CHECK(std::abs(same.amplitudes()[i] - s.amplitudes()[i]) < 1e-15);
  }
  auto twice = apply_gate(apply_gate(s, pauli_x(), "z"), pauli_x(), "z");
  for (std::size_t i = 0; i < s.dim(); ++i) {
    CHECK(std::abs(twice.amplitudes()[i] - s.amplitudes()[i]) < 1e-15);
  }
  CHECK_THROWS_AS(apply_gate(s, pauli_x(), "nope"), std::invalid_argument);
}

TEST_CASE("norm preserved through random gate sequences") {
  for (int rep = 0; rep < 20; ++rep) {
    auto s = random_state({"a", "b", "c", "d"});
    for (int k = 0; k < 8; ++k) {
      const std::string label(1, static_cast<char>('a' + (rng() % 4)));
      s = apply_gate(s, basis_transform(rand_angle(), rand_angle()), label);
    }
    CHECK(std::abs(norm(s) - 1.0) < 1e-12);
  }
}

TEST_CASE("bell_project swaps entanglement") {
  auto two_pairs = tensor(bell_state(BellOutcome::PhiPlus, "1", "2"),
                          bell_state(BellOutcome::PhiPlus, "3", "4"));
  auto branches = bell_project(two_pairs, {"1", "3"});
  for (const auto& br : branches) {
    CHECK(br.probability == doctest::Approx(0.25).epsilon(1e-12));
    REQUIRE(br.post_state.has_value());
    // the remaining pair (2,4) is in the same Bell state as the outcome
    auto expect = bell_state(br.outcome, "2", "4");
    CHECK(std::abs(std::abs(inner_product(expect, *br.post_state)) - 1.0) < 1e-12);
  }
}

TEST_CASE("bell_project of |00>") {
  auto s = tensor(PureState::basis("1", 0), PureState::basis("2", 0));
  auto branches = bell_project(s, {"1", "2"});
  CHECK(branches[0].probability == doctest::Approx(0.5));
  CHECK(branches[1].probability == doctest::Approx(0.5));
  CHECK(branches[2].probability == doctest::Approx(0.0));
  CHECK(branches[3].probability == doctest::Approx(0.0));
  CHECK_FALSE(branches[2].post_state.has_value());
}

TEST_CASE("bell_project completeness on random states") {
  for (int rep = 0; rep < 100; ++rep) {
    auto s = random_state({"p", "q", "r"});
    auto branches = bell_project(s, {"p", "r"});
    double total = 0.0;
    for (const auto& br : branches) total += br.probability;
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
}

TEST_CASE("projection branches reproduce a second commuting measurement") {
  for (int rep = 0; rep < 25; ++rep) {
    auto s = random_state({"a", "b", "c", "d"});
    auto direct = bell_project(s, {"c", "d"});
    auto first = bell_project(s, {"a", "b"});
    for (std::size_t k = 0; k < 4; ++k) {
      double total = 0.0;
      for (const auto& br : first) {
        if (!br.post_state) continue;
        total += br.probability *
                 bell_project(*br.post_state, {"c", "d"})[k].probability;
      }
      CHECK(std::abs(total - direct[k].probability) < 1e-12);
    }
  }
}

TEST_CASE("inner_product") {
  auto phip = bell_state(BellOutcome::PhiPlus);
  auto psim = bell_state(BellOutcome::PsiMinus);
  CHECK(std::abs(inner_product(phip, phip) - Amplitude(1)) < 1e-15);
  CHECK(std::abs(inner_product(phip, psim)) < 1e-15);

  // <0|x+> = 1/sqrt2
  const double r = 1 / std::sqrt(2.0);
  PureState xplus({"q"}, {r, r});
  CHECK(std::abs(inner_product(PureState::basis("q", 0), xplus) - Amplitude(r)) < 1e-15);

  CHECK_THROWS_AS(inner_product(phip, PureState::basis("q", 0)), std::invalid_argument);
  // same labels, different order is a mismatch too
  auto swapped = phip.reordered({"2", "1"});
  CHECK_THROWS_AS(inner_product(phip, swapped), std::invalid_argument);
}

TEST_CASE("reordered permutes amplitudes consistently") {
  auto s = random_state({"a", "b", "c"});
  auto r = s.reordered({"c", "a", "b"});
  CHECK(r.labels() == std::vector<std::string>{"c", "a", "b"});
  // round trip
  auto back = r.reordered({"a", "b", "c"});
  for (std::size_t i = 0; i < s.dim(); ++i) {
    CHECK(std::abs(back.amplitudes()[i] - s.amplitudes()[i]) < 1e-15);
  }
  // a marked basis vector lands where it should: |a=1,b=0,c=1>
  PureState basis101({"a", "b", "c"}, {0, 0, 0, 0, 0, 1, 0, 0});
  auto perm = basis101.reordered({"c", "a", "b"});
  // expect |c=1,a=1,b=0> = index 110b = 6
  CHECK(std::abs(perm.amplitudes()[6] - Amplitude(1)) < 1e-15);
}

TEST_CASE("PureState invariants are enforced") {
  CHECK_THROWS_AS(PureState({"a", "a"}, std::vector<Amplitude>(4, 0.5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(PureState({"a"}, std::vector<Amplitude>{1.0, 0.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(PureState({"a"}, std::vector<Amplitude>{0.9, 0.0}),
                  std::invalid_argument);
}
