#pragma once

#include <optional>
#include <vector>

#include "protocol.hpp"

namespace esqkd {

// h(x) = -x log2 x - (1-x) log2 (1-x), with 0 log2 0 = 0.
inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("binary_entropy: argument outside [0, 1]");
  }
  double h = 0.0;
  if (x > 0.0) h -= x * std::log2(x);
  if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

inline void check_weights(const std::vector<JointDistribution>& dists) {
  double w = 0.0;
  for (const auto& d : dists) w += d.scenario().weight;
  if (std::abs(w - 1.0) > kStructTol) {
    throw std::invalid_argument("scenario weights do not sum to 1");
  }
}

// <P_e>: scenario-weighted probability that Bob's outcome differs from Alice's.
inline double error_from_dist(const std::vector<JointDistribution>& dists) {
  check_weights(dists);
  double e = 0.0;
  for (const auto& d : dists) e += d.scenario().weight * d.error_probability();
  return e;
}

// <P_c>: scenario-weighted index of coincidence (sum of squares) of the
// adversary's outcome distribution conditioned on Alice's outcome.
inline double collision_from_dist(const std::vector<JointDistribution>& dists) {
  check_weights(dists);
  double c = 0.0;
  for (const auto& d : dists) {
    double cs = 0.0;
    for (BellOutcome a : kBellOutcomes) {
      double inner = 0.0;
      for (double pe : d.eve_given_alice(a)) inner += pe * pe;
      cs += d.alice_marginal(a) * inner;
    }
    c += d.scenario().weight * cs;
  }
  return c;
}

// H: scenario-weighted conditional Shannon entropy (bits) of the adversary's
// outcome given Alice's outcome.
inline double entropy_from_dist(const std::vector<JointDistribution>& dists) {
  check_weights(dists);
  double h = 0.0;
  for (const auto& d : dists) {
    double hs = 0.0;
    for (BellOutcome a : kBellOutcomes) {
      double ha = 0.0;
      for (double pe : d.eve_given_alice(a)) {
        if (pe > 0.0) ha -= pe * std::log2(pe);
      }
      hs += d.alice_marginal(a) * ha;
    }
    h += d.scenario().weight * hs;
  }
  return h;
}

// ---- closed forms (single transformation, general angles) ----

inline double cf_error_single(double theta, double phi) {
  const double s = std::sin(theta), c = std::cos(theta / 2);
  const double s2p = std::sin(2 * phi);
  return 0.25 * (s * s + c * c * c * c * s2p * s2p);
}

inline double cf_collision_single(double theta, double phi) {
  const double c = std::cos(theta / 2);
  return (53.0 - 4.0 * std::cos(theta) + 7.0 * std::cos(2 * theta) +
          8.0 * c * c * c * c * std::cos(4 * phi)) /
         64.0;
}

inline double cf_entropy_single(double theta, double phi) {
  const double x = std::cos(theta / 2) * std::cos(theta / 2);
  const double cp = std::cos(phi);
  return 0.5 * (binary_entropy(x) + x * binary_entropy(cp * cp));
}

// ---- closed forms (combined transformations) ----
// Four-term weighted sums over the scenario branches; the cross branches use
// the sum and difference angles. Exact for phi_a, phi_b at odd multiples of
// pi/2; for other phase angles they deviate from the exact simulation (see
// README, "Model notes").

namespace detail {
inline double pe_term(double theta, double phi) {
  const double s = std::sin(theta), c = std::cos(theta / 2);
  const double s2p = std::sin(2 * phi);
  return s * s + c * c * c * c * s2p * s2p;
}
inline double h_term(double theta, double phi) {
  const double x = std::cos(theta / 2) * std::cos(theta / 2);
  const double cp = std::cos(phi);
  return binary_entropy(x) + x * binary_entropy(cp * cp);
}
}  // namespace detail

inline double cf_error_combined(const AngleSet& a) {
  return detail::pe_term(a.theta_a, a.phi_a) / 8.0 +
         detail::pe_term(a.theta_b, a.phi_b) / 8.0 +
         detail::pe_term(a.theta_a + a.theta_b, a.phi_a + a.phi_b) / 16.0 +
         detail::pe_term(a.theta_a - a.theta_b, a.phi_a - a.phi_b) / 16.0;
}

inline double cf_entropy_combined(const AngleSet& a) {
  return detail::h_term(a.theta_a, a.phi_a) / 4.0 +
         detail::h_term(a.theta_b, a.phi_b) / 4.0 +
         detail::h_term(a.theta_a + a.theta_b, a.phi_a + a.phi_b) / 8.0 +
         detail::h_term(a.theta_a - a.theta_b, a.phi_a - a.phi_b) / 8.0;
}

// mode-dispatching helpers; single modes use the active party's angles
inline double cf_error(Mode mode, const AngleSet& a) {
  switch (mode) {
    case Mode::SingleAlice: return cf_error_single(a.theta_a, a.phi_a);
    case Mode::SingleBob: return cf_error_single(a.theta_b, a.phi_b);
    case Mode::Combined: return cf_error_combined(a);
  }
  throw std::invalid_argument("cf_error: bad mode");
}

inline double cf_entropy(Mode mode, const AngleSet& a) {
  switch (mode) {
    case Mode::SingleAlice: return cf_entropy_single(a.theta_a, a.phi_a);
    case Mode::SingleBob: return cf_entropy_single(a.theta_b, a.phi_b);
    case Mode::Combined: return cf_entropy_combined(a);
  }
  throw std::invalid_argument("cf_entropy: bad mode");
}

inline std::optional<double> cf_collision(Mode mode, const AngleSet& a) {
  switch (mode) {
    case Mode::SingleAlice: return cf_collision_single(a.theta_a, a.phi_a);
    case Mode::SingleBob: return cf_collision_single(a.theta_b, a.phi_b);
    case Mode::Combined: return std::nullopt;  // no closed form exists for this one
  }
  throw std::invalid_argument("cf_collision: bad mode");
}

enum class Source { ClosedForm, Simulation };

struct MetricsReport {
  double expected_error = 0.0;
  std::optional<double> expected_collision;
  double shannon_entropy = 0.0;
  double mutual_information = 0.0;  // always 1 - shannon_entropy
  Source source = Source::ClosedForm;
  Mode mode = Mode::SingleAlice;
  AngleSet angles;
};

struct ReportDeltas {
  double expected_error = 0.0;
  double shannon_entropy = 0.0;
  std::optional<double> expected_collision;
};

struct ReportPair {
  MetricsReport closed_form;
  MetricsReport simulation;
  ReportDeltas delta;
};

inline std::vector<JointDistribution> simulate_mode(
    const AngleSet& angles, Mode mode, const Convention& conv,
    const AuxAssignment& aux = default_aux()) {
  std::vector<JointDistribution> dists;
  for (const Scenario& s : scenario_set(mode)) {
    dists.push_back(attacked_run(angles, s, conv, aux));
  }
  return dists;
}

/// Paired closed-form and simulation metrics with per-metric deltas.
inline ReportPair report(const AngleSet& angles, Mode mode, const Convention& conv) {
  ReportPair out;
  out.closed_form = MetricsReport{cf_error(mode, angles), cf_collision(mode, angles),
                                  cf_entropy(mode, angles), 0.0,
                                  Source::ClosedForm, mode, angles};
  out.closed_form.mutual_information = 1.0 - out.closed_form.shannon_entropy;

  const auto dists = simulate_mode(angles, mode, conv);
  out.simulation = MetricsReport{error_from_dist(dists), collision_from_dist(dists),
                                 entropy_from_dist(dists), 0.0,
                                 Source::Simulation, mode, angles};
  out.simulation.mutual_information = 1.0 - out.simulation.shannon_entropy;

  out.delta.expected_error =
      std::abs(out.closed_form.expected_error - out.simulation.expected_error);
  out.delta.shannon_entropy =
      std::abs(out.closed_form.shannon_entropy - out.simulation.shannon_entropy);
  if (out.closed_form.expected_collision) {
    out.delta.expected_collision = std::abs(*out.closed_form.expected_collision -
                                            *out.simulation.expected_collision);
  }
  return out;
}

}  // namespace esqkd
