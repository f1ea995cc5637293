#pragma once

#include "hyperdyn/continuum.hpp"
#include "hyperdyn/dynamics.hpp"
#include "hyperdyn/markov.hpp"
#include "hyperdyn/pl_map.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hyperdyn {

enum class CheckStatus { Pass, Fail, PreconditionUnmet };

std::string status_name(CheckStatus s);

/// Everything needed to replay a failed check from text.
struct Counterexample {
  std::string graph_text;
  std::string map_text;
  std::vector<std::string> continua;  // literals
  std::vector<std::size_t> periods;
  std::vector<std::string> parameters;  // rationals such as eps or tol, as "p/q"
};

struct CheckOutcome {
  std::string theorem;
  CheckStatus status = CheckStatus::Pass;
  std::string message;
  std::optional<Counterexample> counterexample;
  std::uint64_t seed = 0;

  bool passed() const { return status != CheckStatus::Fail; }
};

/// Re-runs the predicate recorded in a Fail outcome from its payload alone.
CheckOutcome recheck(const CheckOutcome& failed);

/// K, f(K), ..., f^{k-1}(K) pairwise disjoint and f^k(K) = K.
CheckOutcome verify_cycle_of_graphs(const PLMap& f, const Continuum& k, std::size_t period);

/// A periodic (preperiod 0) subtree of a tree containing a fixed point has a
/// period dividing lcm{1..|End|}.
CheckOutcome check_period_bound(const PLMap& f, const Continuum& a, std::size_t horizon = 5000);

/// For periodic P1, P2 of a tree with P1 meeting P2 and p1 > m p2,
/// m = lcm{1..|End|}: P1 is inside P2.
CheckOutcome check_nesting(const PLMap& f, const Continuum& p1, const Continuum& p2, std::size_t horizon = 5000);

struct PeriodicSubtree {
  AlignedElement element;
  Continuum continuum;
  std::size_t period;
};

/// Every partition-aligned continuum (points and connected unions of cells)
/// that is periodic under f~ with period <= period_cap, in a fixed order.
std::vector<PeriodicSubtree> enumerate_periodic_subtrees(const PLMap& f, const MarkovData& m, std::size_t period_cap = 64,
                                                         std::size_t element_cap = 200000);

/// Same checks with the exact periods already known from enumeration.
CheckOutcome check_period_bound(const PLMap& f, const PeriodicSubtree& p, const FixedPointSet& fixed);
CheckOutcome check_nesting(const PLMap& f, const PeriodicSubtree& p1, const PeriodicSubtree& p2);
/// Nesting over every ordered pair that meets the period hypothesis and intersects.
std::vector<CheckOutcome> check_nesting_all(const PLMap& f, const std::vector<PeriodicSubtree>& all);

/// Nondegenerate aligned continua that come back within tol of themselves
/// along their orbit must be periodic.
CheckOutcome check_recurrence_characterization(const PLMap& f, const MarkovData& m, std::size_t horizon = 5000,
                                               const Rational& tol = Rational(1, 10000), std::size_t element_cap = 200000);

struct GeneratingChain {
  std::vector<PeriodicSubtree> levels;  // K_1 ⊃ K_2 ⊃ ...
  /// Maximal nondegenerate aligned continua in the deepest level that its
  /// period collapses to a point.
  std::vector<Continuum> residuals;
};

struct CenterReport {
  CheckOutcome outcome;
  std::vector<GeneratingChain> chains;
  std::vector<Classification> residual_classes;  // parallel to the distinct residuals
  std::vector<Continuum> distinct_residuals;
};

struct CenterOptions {
  unsigned depth = 4;
  std::size_t period_cap = 64;
  std::size_t horizon = 5000;
  Rational tol = Rational(1, 1000);
  std::size_t chain_cap = 20000;
  std::size_t element_cap = 200000;
};

/// Nested chains of cycles of graphs with strictly increasing periods:
/// generating-sequence invariants hold exactly, residual continua classify as
/// asymptotically degenerate, and residuals of different chains are disjoint or equal.
CenterReport check_center_structure(const PLMap& f, const MarkovData& m, const CenterOptions& options = {});

/// Exact generating-sequence invariants for a chain of cycles of graphs.
CheckOutcome verify_generating_sequence(const PLMap& f, const std::vector<PeriodicSubtree>& chain);

struct ProbeOptions {
  std::vector<Rational> gammas{Rational(1, 8), Rational(1, 16), Rational(1, 32)};
  std::size_t perturbations = 200;
  std::uint64_t seed = 1;
  unsigned halvings = 16;
  unsigned refinements = 4;
};

struct EpsCertificate {
  Rational eps;
  std::optional<Rational> delta;  // absent when no delta was certified
  std::size_t samples = 0;        // perturbations within delta that were checked
  Rational worst;                 // largest deviation seen at the certified delta
};

struct ProbeCandidate {
  Rational gamma;
  Continuum b;
  std::vector<EpsCertificate> certificates;
};

struct EquicontinuityReport {
  std::vector<ProbeCandidate> candidates;
  std::vector<std::optional<std::size_t>> best;  // per eps: candidate with the largest delta
  CheckOutcome outcome;
};

/// Searches delta such that sampled C with dist_H(C, B_gamma) < delta stay
/// eps-close to B_gamma along f~ up to the horizon; B_gamma is the closed
/// gamma-neighbourhood of U.
EquicontinuityReport probe_equicontinuity(const PLMap& f, const Continuum& u, const std::vector<Rational>& eps_list,
                                          std::size_t horizon, const ProbeOptions& options = {});

/// The deterministic perturbations used by the probe, scaled to lie strictly
/// within delta of b.
std::vector<Continuum> probe_perturbations(const Graph& g, const Continuum& b, const Rational& delta, std::size_t count,
                                           std::uint64_t seed);

/// max over n <= horizon of dist_H(f^n(c), f^n(b)), stopping early once it reaches `stop_at`.
Rational orbit_deviation(const PLMap& f, const Continuum& b, const Continuum& c, std::size_t horizon, const Rational& stop_at);

}  // namespace hyperdyn
