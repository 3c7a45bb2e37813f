#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "metrics.hpp"

namespace esqkd {

enum class Objective { Error, Entropy };

inline const char* to_string(Objective o) {
  return o == Objective::Error ? "error" : "entropy";
}

enum class Evaluator { ClosedForm, Simulation };

/// One angle axis of a sweep: either swept over [lo, hi] with `steps` points
/// (endpoints included) or pinned to a fixed value.
struct AxisSpec {
  double lo = -kPi;
  double hi = kPi;
  int steps = 2;
  std::optional<double> pin;

  bool swept() const { return !pin.has_value(); }
};

struct SweepSpec {
  Mode mode = Mode::SingleAlice;
  Objective objective = Objective::Error;
  // axis order: theta_a, phi_a, theta_b, phi_b
  std::array<AxisSpec, 4> axes;
  Evaluator evaluator = Evaluator::ClosedForm;
  std::optional<Convention> convention;  // required for the simulation evaluator
};

struct SweepPoint {
  AngleSet angles;
  double value;
};

inline double evaluate_objective(Mode mode, Objective obj, const AngleSet& a,
                                 Evaluator ev = Evaluator::ClosedForm,
                                 const Convention* conv = nullptr) {
  if (ev == Evaluator::ClosedForm) {
    return obj == Objective::Error ? cf_error(mode, a) : cf_entropy(mode, a);
  }
  if (conv == nullptr) {
    throw std::invalid_argument("evaluate_objective: simulation evaluator needs a convention");
  }
  const auto dists = simulate_mode(a, mode, *conv);
  return obj == Objective::Error ? error_from_dist(dists) : entropy_from_dist(dists);
}

namespace detail {

inline std::vector<double> axis_points(const AxisSpec& ax) {
  if (ax.pin) return {*ax.pin};
  if (!(ax.lo < ax.hi)) throw std::invalid_argument("grid_sweep: axis needs lo < hi");
  if (ax.steps < 2) throw std::invalid_argument("grid_sweep: swept axis needs >= 2 steps");
  std::vector<double> pts(static_cast<std::size_t>(ax.steps));
  for (int i = 0; i < ax.steps; ++i) {
    pts[static_cast<std::size_t>(i)] = ax.lo + (ax.hi - ax.lo) * i / (ax.steps - 1);
  }
  return pts;
}

// angles wrapped into [0, 2pi) compare lexicographically; prefers small
// non-negative angles (pi/4 beats 3pi/4 beats -pi/4) among tied maxima
inline std::array<double, 4> canonical_key(const AngleSet& a) {
  auto key = [](double x) {
    double w = wrap_angle(x);
    if (w < -1e-12) w += 2 * kPi;
    return w < 0 ? 0.0 : w;
  };
  return {key(a.theta_a), key(a.phi_a), key(a.theta_b), key(a.phi_b)};
}

inline bool key_less(const AngleSet& a, const AngleSet& b) {
  return canonical_key(a) < canonical_key(b);
}

inline double& axis_ref(AngleSet& a, std::size_t i) {
  switch (i) {
    case 0: return a.theta_a;
    case 1: return a.phi_a;
    case 2: return a.theta_b;
    default: return a.phi_b;
  }
}

// golden-section maximization on [lo, hi]; f assumed unimodal there
inline double golden_max(const std::function<double(double)>& f, double lo, double hi,
                         double xtol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a); fd = f(d);
    }
  }
  return (a + b) / 2;
}

}  // namespace detail

/// Evaluate the objective at every grid point, row-major over the axes in
/// (theta_a, phi_a, theta_b, phi_b) order.
inline std::vector<SweepPoint> grid_sweep(const SweepSpec& spec) {
  const Convention* conv = spec.convention ? &*spec.convention : nullptr;
  std::array<std::vector<double>, 4> pts;
  for (std::size_t i = 0; i < 4; ++i) pts[i] = detail::axis_points(spec.axes[i]);
  std::vector<SweepPoint> out;
  out.reserve(pts[0].size() * pts[1].size() * pts[2].size() * pts[3].size());
  for (double ta : pts[0])
    for (double fa : pts[1])
      for (double tb : pts[2])
        for (double fb : pts[3]) {
          const AngleSet a{ta, fa, tb, fb};
          out.push_back({a, evaluate_objective(spec.mode, spec.objective, a,
                                               spec.evaluator, conv)});
        }
  return out;
}

struct TraceEntry {
  AngleSet angles;
  double value;
};

struct OptimumReport {
  AngleSet best_angles;
  double best_value = 0.0;
  Objective objective = Objective::Error;
  Mode mode = Mode::SingleAlice;
  std::vector<TraceEntry> refinement_trace;
  int grid_resolution_used = 0;
  std::vector<AngleSet> maxima_found;
};

/// Coordinate-wise ascent: each cycle scans every free angle coarsely, then
/// polishes it by golden section inside the bracketing scan cell. Stops when a
/// full cycle improves the objective by less than `tolerance` (cap 200 cycles).
inline OptimumReport refine(Objective obj, Mode mode, const AngleSet& start,
                            double tolerance,
                            const std::array<AxisSpec, 4>& box,
                            Evaluator ev = Evaluator::ClosedForm,
                            const Convention* conv = nullptr) {
  if (!(tolerance > 0)) throw std::invalid_argument("refine: tolerance must be > 0");
  std::vector<std::size_t> free_axes;
  AngleSet x = start;
  for (std::size_t i = 0; i < 4; ++i) {
    if (box[i].pin) {
      detail::axis_ref(x, i) = *box[i].pin;
    } else {
      free_axes.push_back(i);
    }
  }
  auto eval = [&](const AngleSet& a) {
    return evaluate_objective(mode, obj, a, ev, conv);
  };
  OptimumReport rep;
  rep.objective = obj;
  rep.mode = mode;
  double best = eval(x);
  rep.refinement_trace.push_back({x, best});
  constexpr int kMaxCycles = 200;
  constexpr int kScanPoints = 65;
  for (int cycle = 0; cycle < kMaxCycles; ++cycle) {
    const double before = best;
    for (std::size_t ax : free_axes) {
      const double lo = box[ax].lo, hi = box[ax].hi;
      const double step = (hi - lo) / (kScanPoints - 1);
      const double here = detail::axis_ref(x, ax);
      double scan_best_x = here;
      AngleSet probe = x;
      double scan_best_v = best;
      for (int i = 0; i < kScanPoints; ++i) {
        const double xi = lo + step * i;
        detail::axis_ref(probe, ax) = xi;
        const double v = eval(probe);
        // ties go to the point nearest the current position: this is a local
        // ascent, symmetric twin maxima must not capture it
        if (v > scan_best_v + 1e-15 ||
            (v > scan_best_v - 1e-15 && std::abs(xi - here) < std::abs(scan_best_x - here))) {
          scan_best_v = std::max(scan_best_v, v);
          scan_best_x = xi;
        }
      }
      const double blo = std::max(lo, scan_best_x - step);
      const double bhi = std::min(hi, scan_best_x + step);
      const double xb = detail::golden_max(
          [&](double t) {
            AngleSet p = x;
            detail::axis_ref(p, ax) = t;
            return eval(p);
          },
          blo, bhi, 1e-12);
      AngleSet cand = x;
      detail::axis_ref(cand, ax) = xb;
      const double vb = eval(cand);
      if (vb >= best) {
        x = cand;
        best = vb;
      } else if (scan_best_v > best) {
        detail::axis_ref(x, ax) = scan_best_x;
        best = scan_best_v;
      }
    }
    rep.refinement_trace.push_back({x, best});
    if (best - before < tolerance) break;
  }
  rep.best_angles = x;
  rep.best_value = best;
  rep.maxima_found = {x};
  return rep;
}

inline std::array<AxisSpec, 4> mode_box(Mode mode,
                                        const std::array<std::optional<double>, 4>& pins);

/// Convenience overload over the full (-pi, pi] box of the mode's free angles.
inline OptimumReport refine(Objective obj, Mode mode, const AngleSet& start,
                            double tolerance);

inline std::array<AxisSpec, 4> mode_box(Mode mode,
                                        const std::array<std::optional<double>, 4>& pins = {}) {
  std::array<AxisSpec, 4> box;
  for (std::size_t i = 0; i < 4; ++i) {
    box[i] = AxisSpec{-kPi, kPi, 2, pins[i]};
  }
  // inactive party's angles are pinned to zero in single modes
  if (mode == Mode::SingleAlice) {
    box[2].pin = box[2].pin.value_or(0.0);
    box[3].pin = box[3].pin.value_or(0.0);
  } else if (mode == Mode::SingleBob) {
    box[0].pin = box[0].pin.value_or(0.0);
    box[1].pin = box[1].pin.value_or(0.0);
  }
  return box;
}

inline OptimumReport refine(Objective obj, Mode mode, const AngleSet& start,
                            double tolerance) {
  return refine(obj, mode, start, tolerance, mode_box(mode));
}

/// Coarse grid over (-pi, pi] per free axis, then golden-section refinement
/// from the five best grid points. Ties are broken by canonical angle order.
/// All distinct refined maxima are reported; no completeness claim is made.
inline OptimumReport find_optima(Mode mode, Objective obj,
                                 const std::array<std::optional<double>, 4>& pins = {},
                                 int grid_points = 33,
                                 Evaluator ev = Evaluator::ClosedForm,
                                 const Convention* conv = nullptr) {
  if (grid_points < 2) throw std::invalid_argument("find_optima: grid too small");
  const auto box = mode_box(mode, pins);
  std::array<std::vector<double>, 4> pts;
  for (std::size_t i = 0; i < 4; ++i) {
    if (box[i].pin) {
      pts[i] = {*box[i].pin};
    } else {
      // sample (-pi, pi]: exclude -pi, include pi
      pts[i].resize(static_cast<std::size_t>(grid_points));
      for (int k = 1; k <= grid_points; ++k) {
        pts[i][static_cast<std::size_t>(k - 1)] = -kPi + 2 * kPi * k / grid_points;
      }
    }
  }
  auto eval = [&](const AngleSet& a) {
    return evaluate_objective(mode, obj, a, ev, conv);
  };

  struct Seed {
    AngleSet angles;
    double value;
  };
  std::vector<Seed> top;  // five best, descending
  auto offer = [&](const AngleSet& a, double v) {
    constexpr std::size_t kStarts = 5;
    if (top.size() == kStarts && v <= top.back().value) return;
    Seed s{a, v};
    auto it = std::upper_bound(top.begin(), top.end(), v,
                               [](double x, const Seed& e) { return x > e.value; });
    top.insert(it, s);
    if (top.size() > kStarts) top.pop_back();
  };
  for (double ta : pts[0])
    for (double fa : pts[1])
      for (double tb : pts[2])
        for (double fb : pts[3]) {
          const AngleSet a{ta, fa, tb, fb};
          offer(a, eval(a));
        }

  OptimumReport best_rep;
  bool have = false;
  std::vector<AngleSet> maxima;
  for (const Seed& seed : top) {
    OptimumReport r = refine(obj, mode, seed.angles, 1e-10, box, ev, conv);
    bool duplicate = false;
    for (const AngleSet& m : maxima) {
      const AngleSet c1 = r.best_angles.canonical(), c2 = m.canonical();
      if (std::abs(c1.theta_a - c2.theta_a) < 1e-6 && std::abs(c1.phi_a - c2.phi_a) < 1e-6 &&
          std::abs(c1.theta_b - c2.theta_b) < 1e-6 && std::abs(c1.phi_b - c2.phi_b) < 1e-6) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) maxima.push_back(r.best_angles);
    const bool better =
        !have || r.best_value > best_rep.best_value + 1e-12 ||
        (std::abs(r.best_value - best_rep.best_value) <= 1e-12 &&
         detail::key_less(r.best_angles, best_rep.best_angles));
    if (better) {
      best_rep = std::move(r);
      have = true;
    }
  }
  best_rep.grid_resolution_used = grid_points;
  best_rep.maxima_found = std::move(maxima);
  return best_rep;
}

}  // namespace esqkd
