#pragma once

#include <functional>

#include "recruit/policy.hpp"
#include "recruit/types.hpp"

namespace recruit {

// Interval-valued ex-ante outcome probabilities. The width of every interval is
// bounded by truncation_mass; on success truncation_mass <= prob_tol.
struct OutcomeDistribution {
  double pA_lo = 0.0, pA_hi = 0.0;
  double pB_lo = 0.0, pB_hi = 0.0;
  double pNone_lo = 0.0, pNone_hi = 0.0;
  double truncation_mass = 0.0;
};

struct InsufficientHorizon : std::runtime_error {
  OutcomeDistribution achieved;
  explicit InsufficientHorizon(const OutcomeDistribution& bounds)
      : std::runtime_error("insufficient horizon: truncation mass exceeds prob_tol"),
        achieved(bounds) {}
};

// Exact eventual-outcome probabilities of the recruiting process: a finite
// enumeration of play until the first search, then a stationary renewal over
// post-search evaluation blocks. Requires a scenario free of hard validation
// violations; standing-assumption (soft) violations are tolerated and the
// literal rule is followed. Throws InsufficientHorizon when the certified
// interval width exceeds cfg.prob_tol.
OutcomeDistribution exact_outcome(const Scenario& s, const NumericalConfig& cfg);
OutcomeDistribution exact_outcome(const Scenario& s);

// Post-search renewal solve, exposed for direct testing. blockX describes how a
// fresh category-X arrival's evaluation block ends (probabilities summing to 1
// with `unresolved` slack).
struct BlockOutcome {
  double hire = 0.0, retire = 0.0, unresolved = 0.0;
};
struct RenewalSplit {
  double pA_lo = 0.0, pA_hi = 0.0;
  double pB_lo = 0.0, pB_hi = 0.0;
  double pNone_lo = 0.0, pNone_hi = 0.0;
};
RenewalSplit solve_search_renewal(double muA, double muB, const BlockOutcome& blockA,
                                  const BlockOutcome& blockB);

struct McEstimate {
  double pA = 0.0, pB = 0.0, pNone = 0.0;
  double stderrA = 0.0, stderrB = 0.0, stderrNone = 0.0;
  long long n = 0;
  std::uint64_t seed = 0;
  long long censored = 0;  // trials undecided at the horizon, counted in pNone
};

// Seeded Monte Carlo over n independent trajectories. Each trial draws from its
// own substream derived from (seed, trial index), so estimates are bit-identical
// across runs and worker counts.
McEstimate monte_carlo(const Scenario& s, long long n, std::uint64_t seed,
                       int trial_horizon);

enum class Verdict { Backfires, Helps, Indeterminate };
const char* to_string(Verdict v);

struct CompareRecord {
  OutcomeDistribution before, after;
  double dA_lo = 0.0, dA_hi = 0.0;  // after - before, interval bounds
  double dB_lo = 0.0, dB_hi = 0.0;
  double dNone_lo = 0.0, dNone_hi = 0.0;
  Verdict verdict = Verdict::Indeterminate;  // judged on category A
};

// Interval comparison of two scenarios that differ only in (muA, muB). The
// verdict never claims a direction unless the intervals separate strictly.
CompareRecord compare(const Scenario& before, const Scenario& after,
                      const NumericalConfig& cfg);

// Single simulated trajectory; used by monte_carlo and by invariant tests.
struct TrialResult {
  enum class Outcome { HiredA, HiredB, Censored };
  Outcome outcome = Outcome::Censored;
  int periods = 0;
};
struct TrajectoryHooks {
  std::function<void(const PoolState&, const Action&)> on_action;
  std::function<void(const PoolState&, const StepOutcome&)> on_outcome;
};
TrialResult simulate_trial(const Scenario& s, const PolicyContext& ctx,
                           std::uint64_t seed, std::uint64_t trial_index,
                           int trial_horizon,
                           const TrajectoryHooks* hooks = nullptr);

}  // namespace recruit
