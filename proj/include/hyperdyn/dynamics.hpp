#pragma once

#include "hyperdyn/continuum.hpp"
#include "hyperdyn/pl_map.hpp"
#include "hyperdyn/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hyperdyn {

struct OrbitOptions {
  /// Every step is kept when the horizon is below this; otherwise only steps
  /// below it, powers of two, and the last step.
  std::size_t keep_all_below = 10000;
  /// ResourceCap when one iterate has more intervals than this.
  std::size_t interval_cap = 10000;
  /// Intersecting pairs are listed only for horizons up to this.
  std::size_t pairs_max_horizon = 256;
};

/// The f~-orbit A, f(A), f^2(A), ... up to a horizon.
struct OrbitReport {
  std::size_t horizon = 0;
  std::vector<std::pair<std::size_t, Continuum>> snapshots;  // (n, f^n(A)); snapshots[0] is A
  std::vector<Rational> diameters;                           // diam f^n(A) for every n <= horizon
  /// Pairs j < k with f^j(A) and f^k(A) intersecting; filled for small horizons only.
  std::vector<std::pair<std::size_t, std::size_t>> intersecting_pairs;
  bool pairs_recorded = false;

  const Continuum& initial() const { return snapshots.front().second; }
};

OrbitReport iterate_orbit(const PLMap& f, const Continuum& a, std::size_t horizon, const OrbitOptions& options = {});

struct PeriodInfo {
  std::size_t preperiod = 0;
  std::size_t period = 0;
  friend bool operator==(const PeriodInfo& a, const PeriodInfo& b) { return a.preperiod == b.preperiod && a.period == b.period; }
};

/// Minimal (m, p) with f~^{m+p}(A) = f~^m(A) and m + p <= horizon.
std::optional<PeriodInfo> detect_exact_period(const PLMap& f, const Continuum& a, std::size_t horizon);

struct AsymptoticInfo {
  std::size_t period = 0;
  std::vector<Continuum> limit_cycle;
  std::size_t cycle_start = 0;  // orbit index of limit_cycle[0]
  Rational residual;
};

/// Smallest p <= period_cap with dist_H(f^{n+p}(A), f^n(A)) < tol for every n in
/// the last quarter of the horizon. Numeric evidence, not a proof.
std::optional<AsymptoticInfo> detect_asymptotic_periodicity(const PLMap& f, const Continuum& a, std::size_t horizon,
                                                            const Rational& tol, std::size_t period_cap = 64);

enum class Verdict { ExactlyPeriodic, AsymptoticallyPeriodic, AsymptoticallyDegenerate, WanderingWitnessed, Inconclusive };

std::string verdict_name(Verdict v);

struct ClassifyOptions {
  std::size_t horizon = 2000;
  Rational tol = Rational(1, 1000000);
  std::size_t period_cap = 64;
};

struct Classification {
  Verdict verdict = Verdict::Inconclusive;
  std::size_t horizon = 0;
  std::size_t steps = 0;  // iterates actually computed
  std::size_t period = 0;
  std::size_t preperiod = 0;
  std::vector<Continuum> limit_cycle;
  std::size_t cycle_start = 0;
  Rational residual;
  Rational final_diameter;
  std::string note;
};

/// Exact periodicity, then asymptotic periodicity (refined to degenerate when the
/// limit continua are below tol in diameter), then pairwise disjointness up to the
/// horizon, else Inconclusive. An orbit that lands exactly on a cycle of points
/// after a positive preperiod from a nondegenerate start is reported as
/// AsymptoticallyDegenerate.
Classification classify(const PLMap& f, const Continuum& a, const ClassifyOptions& options = {});

/// Distinct points of f^n(x), burn_in <= n < burn_in + samples, merged when
/// closer than tol. A heuristic picture of the omega-limit set.
std::vector<PointOnGraph> omega_limit_points(const PLMap& f, const PointOnGraph& x, std::size_t burn_in, std::size_t samples,
                                             const Rational& tol);

}  // namespace hyperdyn
