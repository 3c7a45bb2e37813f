#include "doctest.h"
#include "esqkd/attack.hpp"

using namespace esqkd;

TEST_CASE("default aux markers are orthonormal Bell states") {
  const AuxAssignment aux = default_aux();
  CHECK_NOTHROW(validate(aux));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(norm(aux.states[i]) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t j = 0; j < 4; ++j) {
      const double overlap = std::abs(inner_product(aux.states[i], aux.states[j]));
      CHECK(overlap == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    }
  }
  CHECK(std::abs(std::abs(inner_product(aux.states[0],
                                        bell_state(BellOutcome::PhiPlus, "T", "U"))) -
                 1.0) < 1e-12);
}

TEST_CASE("non-orthogonal aux is rejected") {
  const double r = 1 / std::sqrt(2.0);
  PureState tilted({"T", "U"}, {r, 0.0, 0.0, r});  // equals phi_1
  AuxAssignment bad{{tilted, bell_state(BellOutcome::PhiMinus, "T", "U"),
                     bell_state(BellOutcome::PsiPlus, "T", "U"),
                     bell_state(BellOutcome::PhiPlus, "T", "U")}};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  CHECK_THROWS_AS(delta_state(bad), std::invalid_argument);

  AuxAssignment wrong_labels{{bell_state(BellOutcome::PhiPlus, "T", "X"),
                              bell_state(BellOutcome::PhiMinus, "T", "X"),
                              bell_state(BellOutcome::PsiPlus, "T", "X"),
                              bell_state(BellOutcome::PsiMinus, "T", "X")}};
  CHECK_THROWS_AS(validate(wrong_labels), std::invalid_argument);
}

TEST_CASE("delta state is normalized on the fixed label order") {
  const PureState delta = delta_state();
  CHECK(delta.labels() == attack_labels());
  CHECK(std::abs(norm(delta) - 1.0) < 1e-12);
}

TEST_CASE("Alice's measurement on (1,R) is uniform and steers (Q,4) and (T,U)") {
  const PureState delta = delta_state();
  auto branches = bell_project(delta, {"1", "R"});
  for (const auto& br : branches) {
    CHECK(br.probability == doctest::Approx(0.25).epsilon(1e-12));
    REQUIRE(br.post_state.has_value());
    // remaining state is B_outcome on (Q,4) tensor phi_outcome on (T,U)
    auto expect = tensor(bell_state(br.outcome, "Q", "4"),
                         default_aux().states[bell_index(br.outcome)]);
    CHECK(std::abs(std::abs(inner_product(expect, *br.post_state)) - 1.0) < 1e-12);
  }
}

TEST_CASE("all three measurements produce one deterministic triple per branch") {
  // brute force over the 4x4x4 outcome triples: only (j, j, j) survives
  const PureState delta = delta_state();
  const AuxAssignment aux = default_aux();
  for (const auto& a : bell_project(delta, {"1", "R"})) {
    REQUIRE(a.post_state.has_value());
    for (const auto& b : bell_project(*a.post_state, {"Q", "4"})) {
      const double pab = a.probability * b.probability;
      if (!b.post_state) {
        CHECK(b.probability <= 1e-15);
        continue;
      }
      for (std::size_t e = 0; e < 4; ++e) {
        const double p =
            pab * std::norm(inner_product(aux.states[e], *b.post_state));
        const bool diagonal =
            b.outcome == a.outcome && e == bell_index(a.outcome);
        CHECK(std::abs(p - (diagonal ? 0.25 : 0.0)) < 1e-12);
      }
    }
  }
}
