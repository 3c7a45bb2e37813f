#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "transforms.hpp"

namespace esqkd {

enum class BellOutcome { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

inline constexpr std::array<BellOutcome, 4> kBellOutcomes = {
    BellOutcome::PhiPlus, BellOutcome::PhiMinus, BellOutcome::PsiPlus,
    BellOutcome::PsiMinus};

inline std::size_t bell_index(BellOutcome o) { return static_cast<std::size_t>(o); }

inline BellOutcome bell_outcome(std::size_t i) {
  if (i >= 4) throw std::invalid_argument("bell_outcome: index out of range");
  return kBellOutcomes[i];
}

inline const char* to_string(BellOutcome o) {
  switch (o) {
    case BellOutcome::PhiPlus: return "Phi+";
    case BellOutcome::PhiMinus: return "Phi-";
    case BellOutcome::PsiPlus: return "Psi+";
    case BellOutcome::PsiMinus: return "Psi-";
  }
  return "?";
}

// Outcomes with probability at or below this carry a null post state.
inline constexpr double kNullBranchProb = 1e-15;

/// Normalized complex state vector over named qubits. Ordering is big-endian
/// by label position: the first label is the most significant bit of the
/// amplitude index. Immutable once built; every operation returns a new state.
class PureState {
 public:
  PureState(std::vector<std::string> labels, std::vector<Amplitude> amplitudes)
      : labels_(std::move(labels)), amps_(std::move(amplitudes)) {
    if (labels_.empty()) throw std::invalid_argument("PureState: no qubits");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      for (std::size_t j = i + 1; j < labels_.size(); ++j) {
        if (labels_[i] == labels_[j]) {
          throw std::invalid_argument("PureState: duplicate label " + labels_[i]);
        }
      }
    }
    if (amps_.size() != (std::size_t{1} << labels_.size())) {
      throw std::invalid_argument("PureState: amplitude count is not 2^n");
    }
    double n2 = 0.0;
    for (const auto& a : amps_) {
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
        throw std::invalid_argument("PureState: non-finite amplitude");
      }
      n2 += std::norm(a);
    }
    if (std::abs(n2 - 1.0) > kStructTol) {
      throw std::invalid_argument("PureState: not normalized");
    }
  }

  static PureState basis(const std::string& label, int bit) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("basis: bit must be 0 or 1");
    std::vector<Amplitude> a(2, 0.0);
    a[static_cast<std::size_t>(bit)] = 1.0;
    return PureState({label}, std::move(a));
  }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Amplitude>& amplitudes() const { return amps_; }
  std::size_t num_qubits() const { return labels_.size(); }
  std::size_t dim() const { return amps_.size(); }

  std::size_t position_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
      throw std::invalid_argument("PureState: unknown label " + label);
    }
    return static_cast<std::size_t>(it - labels_.begin());
  }

  /// Same state with qubits stored in the given label order.
  PureState reordered(const std::vector<std::string>& new_order) const {
    if (new_order.size() != labels_.size()) {
      throw std::invalid_argument("reordered: label count mismatch");
    }
    std::vector<std::size_t> src(new_order.size());
    for (std::size_t i = 0; i < new_order.size(); ++i) src[i] = position_of(new_order[i]);
    const std::size_t n = labels_.size();
    std::vector<Amplitude> out(amps_.size(), 0.0);
    for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
      std::size_t nidx = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t bit = (idx >> (n - 1 - src[i])) & 1u;
        nidx |= bit << (n - 1 - i);
      }
      out[nidx] = amps_[idx];
    }
    return PureState(new_order, std::move(out));
  }

 private:
  std::vector<std::string> labels_;
  std::vector<Amplitude> amps_;
};

inline double norm(const PureState& s) {
  double n2 = 0.0;
  for (const auto& a : s.amplitudes()) n2 += std::norm(a);
  return std::sqrt(n2);
}

/// Canonical two-qubit Bell state: Phi± = (|00> ± |11>)/sqrt2,
/// Psi± = (|01> ± |10>)/sqrt2.
inline PureState bell_state(BellOutcome o, const std::string& la = "1",
                            const std::string& lb = "2") {
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<Amplitude> a(4, 0.0);
  switch (o) {
    case BellOutcome::PhiPlus: a[0] = r; a[3] = r; break;
    case BellOutcome::PhiMinus: a[0] = r; a[3] = -r; break;
    case BellOutcome::PsiPlus: a[1] = r; a[2] = r; break;
    case BellOutcome::PsiMinus: a[1] = r; a[2] = -r; break;
  }
  return PureState({la, lb}, std::move(a));
}

// Kronecker product; a's labels first. Label sets must be disjoint.
inline PureState tensor(const PureState& a, const PureState& b) {
  std::vector<std::string> labels = a.labels();
  for (const auto& l : b.labels()) {
    if (std::find(labels.begin(), labels.end(), l) != labels.end()) {
      throw std::invalid_argument("tensor: overlapping label " + l);
    }
    labels.push_back(l);
  }
  std::vector<Amplitude> out;
  out.reserve(a.dim() * b.dim());
  for (const auto& x : a.amplitudes())
    for (const auto& y : b.amplitudes()) out.push_back(x * y);
  return PureState(std::move(labels), std::move(out));
}

// Apply a single-qubit gate to the addressed qubit, identity elsewhere.
inline PureState apply_gate(const PureState& state, const Gate2& gate,
                            const std::string& label) {
  const std::size_t pos = state.position_of(label);
  const std::size_t n = state.num_qubits();
  const std::size_t shift = n - 1 - pos;
  const std::size_t mask = std::size_t{1} << shift;
  std::vector<Amplitude> out(state.dim(), 0.0);
  const auto& in = state.amplitudes();
  for (std::size_t idx = 0; idx < in.size(); ++idx) {
    if (idx & mask) continue;  // handle each (|0>,|1>) pair once
    const Amplitude a0 = in[idx];
    const Amplitude a1 = in[idx | mask];
    out[idx] = gate.at(0, 0) * a0 + gate.at(0, 1) * a1;
    out[idx | mask] = gate.at(1, 0) * a0 + gate.at(1, 1) * a1;
  }
  return PureState(state.labels(), std::move(out));
}

// <a|b> with conjugation on a. Labels must match in the same order.
inline Amplitude inner_product(const PureState& a, const PureState& b) {
  if (a.labels() != b.labels()) {
    throw std::invalid_argument("inner_product: label mismatch");
  }
  Amplitude acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    acc += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
  }
  return acc;
}

struct BellProjection {
  BellOutcome outcome;
  double probability;
  std::optional<PureState> post_state;  // null when probability <= 1e-15
};

/// Project a qubit pair onto the Bell basis. Returns all four branches;
/// probabilities sum to 1 and each surviving post state is normalized over
/// the remaining labels (original order, measured pair removed). Branches at
/// or below 1e-15 probability, and projections that consume the whole state,
/// carry a null post state.
inline std::array<BellProjection, 4> bell_project(
    const PureState& state, const std::pair<std::string, std::string>& pair) {
  if (pair.first == pair.second) {
    throw std::invalid_argument("bell_project: pair labels must be distinct");
  }
  const std::size_t pa = state.position_of(pair.first);
  const std::size_t pb = state.position_of(pair.second);
  const std::size_t n = state.num_qubits();
  if (n < 2) throw std::invalid_argument("bell_project: need at least 2 qubits");
  const std::size_t sa = n - 1 - pa, sb = n - 1 - pb;

  std::vector<std::string> rest;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != pa && i != pb) rest.push_back(state.labels()[i]);
  }

  // reduced index: drop the two measured bit positions, keep relative order
  auto reduce = [&](std::size_t idx) {
    std::size_t out = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == pa || i == pb) continue;
      out = (out << 1) | ((idx >> (n - 1 - i)) & 1u);
    }
    return out;
  };

  const double r = 1.0 / std::sqrt(2.0);
  // bell coefficient for (bit of first label, bit of second label)
  auto coeff = [&](BellOutcome o, std::size_t xa, std::size_t xb) -> double {
    switch (o) {
      case BellOutcome::PhiPlus: return (xa == xb) ? r : 0.0;
      case BellOutcome::PhiMinus: return (xa == xb) ? (xa ? -r : r) : 0.0;
      case BellOutcome::PsiPlus: return (xa != xb) ? r : 0.0;
      case BellOutcome::PsiMinus: return (xa != xb) ? (xa ? -r : r) : 0.0;
    }
    return 0.0;
  };

  const std::size_t rest_dim = state.dim() >> 2;
  std::array<BellProjection, 4> result = {
      BellProjection{BellOutcome::PhiPlus, 0.0, std::nullopt},
      BellProjection{BellOutcome::PhiMinus, 0.0, std::nullopt},
      BellProjection{BellOutcome::PsiPlus, 0.0, std::nullopt},
      BellProjection{BellOutcome::PsiMinus, 0.0, std::nullopt}};

  for (std::size_t oi = 0; oi < 4; ++oi) {
    const BellOutcome o = kBellOutcomes[oi];
    std::vector<Amplitude> red(rest_dim, 0.0);
    for (std::size_t idx = 0; idx < state.dim(); ++idx) {
      const Amplitude amp = state.amplitudes()[idx];
      if (amp == Amplitude(0.0)) continue;
      const std::size_t xa = (idx >> sa) & 1u, xb = (idx >> sb) & 1u;
      const double c = coeff(o, xa, xb);
      if (c != 0.0) red[reduce(idx)] += c * amp;
    }
    double p = 0.0;
    for (const auto& v : red) p += std::norm(v);
    result[oi].probability = p;
    if (p > kNullBranchProb && !rest.empty()) {
      const double inv = 1.0 / std::sqrt(p);
      for (auto& v : red) v *= inv;
      result[oi].post_state = PureState(rest, std::move(red));
    }
  }
  return result;
}

}  // namespace esqkd
