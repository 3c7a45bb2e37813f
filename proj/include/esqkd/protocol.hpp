#pragma once

#include <array>
#include <string>
#include <vector>

#include "attack.hpp"

namespace esqkd {

enum class Mode { SingleAlice, SingleBob, Combined };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::SingleAlice: return "single-alice";
    case Mode::SingleBob: return "single-bob";
    case Mode::Combined: return "combined";
  }
  return "?";
}

/// One assignment of which parties applied their transformation in a round,
/// with the probability of that assignment.
struct Scenario {
  bool alice_applies = false;
  bool bob_applies = false;
  double weight = 1.0;
};

// Parties toss independent fair coins, so single modes weight each branch
// 1/2 and the combined mode weights each of the four branches 1/4.
inline std::vector<Scenario> scenario_set(Mode mode) {
  switch (mode) {
    case Mode::SingleAlice:
      return {{false, false, 0.5}, {true, false, 0.5}};
    case Mode::SingleBob:
      return {{false, false, 0.5}, {false, true, 0.5}};
    case Mode::Combined:
      return {{false, false, 0.25}, {true, false, 0.25},
              {false, true, 0.25}, {true, true, 0.25}};
  }
  throw std::invalid_argument("scenario_set: bad mode");
}

enum class UndoOrder { UndoThenTransform, TransformThenUndo };

/// Placement of the reversal operations. Alice undoes Bob's transformation on
/// one of her qubits (1 or R) before measuring; when it lands on her own
/// transformed qubit 1 the relative order matters. Bob undoes Alice's
/// transformation on Q or 4. Eight candidates in total.
struct Convention {
  char alice_undo_target = 'R';  // '1' or 'R'
  char bob_undo_target = 'Q';    // 'Q' or '4'
  UndoOrder alice_order = UndoOrder::TransformThenUndo;

  std::string id() const {
    if (alice_undo_target == 'R') return std::string("R") + bob_undo_target;
    return std::string("1") +
           (alice_order == UndoOrder::UndoThenTransform ? "u" : "t") +
           bob_undo_target;
  }

  // order-explicit form, distinct for all eight candidates
  std::string full_id() const {
    return std::string(1, alice_undo_target) +
           (alice_order == UndoOrder::UndoThenTransform ? "u" : "t") +
           bob_undo_target;
  }

  static Convention from_id(const std::string& id) {
    for (const auto& c : all()) {
      if (c.id() == id) return c;
    }
    // accept the explicit order suffix for the R target too
    if (id == "RuQ" || id == "RtQ") return {'R', 'Q', UndoOrder::TransformThenUndo};
    if (id == "Ru4" || id == "Rt4") return {'R', '4', UndoOrder::TransformThenUndo};
    throw std::invalid_argument("Convention: unknown id '" + id + "'");
  }

  static std::array<Convention, 8> all() {
    std::array<Convention, 8> out;
    std::size_t k = 0;
    for (char a : {'1', 'R'})
      for (UndoOrder o : {UndoOrder::UndoThenTransform, UndoOrder::TransformThenUndo})
        for (char b : {'Q', '4'}) out[k++] = Convention{a, b, o};
    return out;
  }
};

/// Exact joint probabilities over (Alice outcome, Bob outcome, marker index)
/// for one scenario. Marker indices are 0-based: index i is phi_{i+1}.
class JointDistribution {
 public:
  JointDistribution(std::array<double, 64> p, Scenario s) : p_(p), scenario_(s) {
    double total = 0.0;
    for (double v : p_) {
      if (v < -kStructTol) throw std::invalid_argument("JointDistribution: negative probability");
      total += v;
    }
    if (std::abs(total - 1.0) > kStructTol) {
      throw std::invalid_argument("JointDistribution: probabilities do not sum to 1");
    }
    for (std::size_t a = 0; a < 4; ++a) {
      if (std::abs(alice_marginal(bell_outcome(a)) - 0.25) > kStructTol) {
        throw std::invalid_argument("JointDistribution: Alice marginal is not uniform");
      }
    }
  }

  double at(BellOutcome a, BellOutcome b, std::size_t eve) const {
    return p_[bell_index(a) * 16 + bell_index(b) * 4 + eve];
  }

  double alice_marginal(BellOutcome a) const {
    double s = 0.0;
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t e = 0; e < 4; ++e) s += p_[bell_index(a) * 16 + b * 4 + e];
    return s;
  }

  // P(eve = e | alice = a)
  std::array<double, 4> eve_given_alice(BellOutcome a) const {
    std::array<double, 4> out{};
    const double pa = alice_marginal(a);
    for (std::size_t e = 0; e < 4; ++e) {
      double s = 0.0;
      for (std::size_t b = 0; b < 4; ++b) s += p_[bell_index(a) * 16 + b * 4 + e];
      out[e] = s / pa;
    }
    return out;
  }

  double error_probability() const {
    double s = 0.0;
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b)
        for (std::size_t e = 0; e < 4; ++e)
          if (a != b) s += p_[a * 16 + b * 4 + e];
    return s;
  }

  double error_given_alice(BellOutcome a) const {
    double err = 0.0;
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t e = 0; e < 4; ++e)
        if (b != bell_index(a)) err += p_[bell_index(a) * 16 + b * 4 + e];
    return err / alice_marginal(a);
  }

  const Scenario& scenario() const { return scenario_; }

  bool equals(const JointDistribution& other, double tol) const {
    for (std::size_t i = 0; i < 64; ++i)
      if (std::abs(p_[i] - other.p_[i]) > tol) return false;
    return true;
  }

 private:
  std::array<double, 64> p_;
  Scenario scenario_;
};

/// Joint probabilities over (Alice outcome, Bob outcome) for honest runs.
struct PairDistribution {
  std::array<double, 16> p{};
  double at(BellOutcome a, BellOutcome b) const {
    return p[bell_index(a) * 4 + bell_index(b)];
  }
  double agreement() const {
    double s = 0.0;
    for (std::size_t a = 0; a < 4; ++a) s += p[a * 4 + a];
    return s;
  }
};

/// Honest entanglement swapping: Phi+ pairs (1,2) and (3,4), Alice transforms
/// qubit 1 and measures (1,3); Bob optionally reverses on qubit 2 and
/// measures (2,4).
inline PairDistribution honest_run(double theta, double phi, bool reverse) {
  PureState state = tensor(bell_state(BellOutcome::PhiPlus, "1", "2"),
                           bell_state(BellOutcome::PhiPlus, "3", "4"));
  const Gate2 t = basis_transform(theta, phi);
  state = apply_gate(state, t, "1");
  if (reverse) state = apply_gate(state, dagger(t), "2");
  PairDistribution dist;
  for (const auto& a : bell_project(state, {"1", "3"})) {
    if (!a.post_state) continue;
    for (const auto& b : bell_project(*a.post_state, {"2", "4"})) {
      dist.p[bell_index(a.outcome) * 4 + bell_index(b.outcome)] +=
          a.probability * b.probability;
    }
  }
  return dist;
}

/// One attacked round, exactly. Starting from the substitute state:
/// Alice applies T(theta_a, phi_a) on 1 and Bob T(theta_b, phi_b) on 4 per the
/// scenario; each party then reverses the other's transformation on the
/// convention's target before measuring. Alice measures (1, R), Bob (Q, 4),
/// and the adversary measures (T, U) in the marker basis.
inline JointDistribution attacked_run(const AngleSet& angles, const Scenario& scenario,
                                      const Convention& conv,
                                      const AuxAssignment& aux = default_aux()) {
  if (conv.alice_undo_target != '1' && conv.alice_undo_target != 'R') {
    throw std::invalid_argument("attacked_run: alice_undo_target must be 1 or R");
  }
  if (conv.bob_undo_target != 'Q' && conv.bob_undo_target != '4') {
    throw std::invalid_argument("attacked_run: bob_undo_target must be Q or 4");
  }
  PureState state = delta_state(aux);
  const Gate2 ta = basis_transform(angles.theta_a, angles.phi_a);
  const Gate2 tb = basis_transform(angles.theta_b, angles.phi_b);
  const std::string alice_undo(1, conv.alice_undo_target);
  const std::string bob_undo(1, conv.bob_undo_target);

  if (scenario.bob_applies) state = apply_gate(state, tb, "4");
  if (scenario.alice_applies && scenario.bob_applies) {
    if (conv.alice_order == UndoOrder::UndoThenTransform) {
      state = apply_gate(state, dagger(tb), alice_undo);
      state = apply_gate(state, ta, "1");
    } else {
      state = apply_gate(state, ta, "1");
      state = apply_gate(state, dagger(tb), alice_undo);
    }
  } else if (scenario.alice_applies) {
    state = apply_gate(state, ta, "1");
  } else if (scenario.bob_applies) {
    state = apply_gate(state, dagger(tb), alice_undo);
  }
  if (scenario.alice_applies) state = apply_gate(state, dagger(ta), bob_undo);

  std::array<double, 64> p{};
  for (const auto& a : bell_project(state, {"1", "R"})) {
    if (!a.post_state) continue;
    for (const auto& b : bell_project(*a.post_state, {"Q", "4"})) {
      if (!b.post_state) continue;
      for (std::size_t e = 0; e < 4; ++e) {
        const double pe = std::norm(inner_product(aux.states[e], *b.post_state));
        p[bell_index(a.outcome) * 16 + bell_index(b.outcome) * 4 + e] +=
            a.probability * b.probability * pe;
      }
    }
  }
  return JointDistribution(p, scenario);
}

}  // namespace esqkd
