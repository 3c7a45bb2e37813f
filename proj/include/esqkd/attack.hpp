#pragma once

#include <array>
#include <vector>

#include "qstate.hpp"

namespace esqkd {

// Qubit names of the attacked run, fixed by the protocol wiring:
// Alice holds (1, R), Bob holds (Q, 4), the adversary keeps (T, U).
inline const std::vector<std::string>& attack_labels() {
  static const std::vector<std::string> labels = {"1", "Q", "R", "4", "T", "U"};
  return labels;
}

/// The adversary's four marker states on (T, U), indexed 0..3. They must be
/// pairwise orthogonal and normalized so that a single measurement on (T, U)
/// identifies the branch exactly.
struct AuxAssignment {
  std::array<PureState, 4> states;
};

inline void validate(const AuxAssignment& aux) {
  const std::vector<std::string> tu = {"T", "U"};
  for (const auto& s : aux.states) {
    if (s.labels() != tu) {
      throw std::invalid_argument("AuxAssignment: states must live on labels (T, U)");
    }
  }
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (std::abs(inner_product(aux.states[i], aux.states[j])) > kStructTol) {
        throw std::invalid_argument("AuxAssignment: states are not orthogonal");
      }
    }
  }
}

// Bell markers: phi_1..phi_4 = Phi+, Phi-, Psi+, Psi- on (T, U), so the
// adversary's final measurement is an ordinary Bell measurement.
inline AuxAssignment default_aux() {
  return AuxAssignment{{bell_state(BellOutcome::PhiPlus, "T", "U"),
                        bell_state(BellOutcome::PhiMinus, "T", "U"),
                        bell_state(BellOutcome::PsiPlus, "T", "U"),
                        bell_state(BellOutcome::PsiMinus, "T", "U")}};
}

/// The six-qubit substitute state (1/2) sum_i |B_i>_{1R} |B_i>_{Q4} |phi_i>_{TU}.
/// It reproduces the honest swapping correlations exactly while the marker
/// subsystem records Alice's outcome.
inline PureState delta_state(const AuxAssignment& aux = default_aux()) {
  validate(aux);
  std::vector<Amplitude> acc(64, 0.0);
  for (std::size_t i = 0; i < 4; ++i) {
    const BellOutcome o = kBellOutcomes[i];
    PureState term = tensor(tensor(bell_state(o, "1", "R"), bell_state(o, "Q", "4")),
                            aux.states[i])
                         .reordered(attack_labels());
    for (std::size_t k = 0; k < 64; ++k) acc[k] += 0.5 * term.amplitudes()[k];
  }
  return PureState(attack_labels(), std::move(acc));
}

}  // namespace esqkd
