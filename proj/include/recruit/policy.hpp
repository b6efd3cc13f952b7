#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>

#include "recruit/types.hpp"

namespace recruit {

struct Action {
  enum class Kind { Evaluate, Search };
  Kind kind = Kind::Search;
  int pool_position = -1;  // valid for Evaluate

  friend bool operator==(const Action&, const Action&) = default;
};

struct HiredRecord {
  Category category{};
  int pool_position = -1;
  int n1 = 0, n0 = 0;
};

// Ordered candidate list (arrival order, append-only) plus the terminal
// hired-candidate record once the process has ended.
struct PoolState {
  std::vector<CandidateState> candidates;
  std::optional<HiredRecord> terminated;

  bool is_terminated() const { return terminated.has_value(); }
};

PoolState initial_pool_state(const Scenario& s);

// Caches the stationary search score (u^S under the myopic rule, V^S under the
// index rule) and per-state candidate scores. Not thread-safe: give each worker
// its own copy.
class PolicyContext {
 public:
  explicit PolicyContext(const Scenario& s);
  PolicyContext(const Scenario& s, double search_score);

  const Scenario& scenario() const { return s_; }
  PolicyKind policy() const { return s_.policy; }
  double search_score() const { return search_score_; }

  // Myopic value or candidate index of a non-acceptable state, memoized.
  double candidate_score(Category cat, int n1, int n0) const;
  double cached_posterior(Category cat, int n1, int n0) const;

  // Smallest k such that a candidate at (0, k) is retired, or -1 if the
  // all-fail spine never crosses the search score. Only meaningful for qL = 1
  // technologies, where scores shrink monotonically along the spine.
  int retire_depth_qL1(Category cat) const;

 private:
  Scenario s_;
  double search_score_ = 0.0;
  mutable std::unordered_map<std::uint64_t, double> score_memo_;
  mutable std::unordered_map<std::uint64_t, double> post_memo_;
  mutable int retire_depth_[2] = {-2, -2};  // -2 = not computed yet
};

// Flags every live candidate whose score has dropped weakly below the search
// score. Retirement is permanent: the search score is stationary and a retired
// candidate's state is frozen, so the comparison can never reverse.
PoolState mark_retirements(const PoolState& pool, const PolicyContext& ctx);

// Evaluate the highest-scoring non-retired candidate (ties: earliest arrival,
// which places A before B in the default pool), or search when none remains.
Action select_action(const PoolState& pool, const PolicyContext& ctx);

// Single-shot selectors; both retire-mark internally before choosing.
Action myopic_action(const PoolState& pool, const Scenario& s);
Action optimal_action(const PoolState& pool, const Scenario& s,
                      double search_index_value);

struct ExogenousDraw {
  int signal = -1;   // for Evaluate: 0 or 1
  int arrival = -1;  // for Search: 0 = A, 1 = B, 2 = no candidate
};

struct StepOutcome {
  enum class Kind { Signal, Arrival, NoArrival, Hired };
  Kind kind = Kind::NoArrival;
  int signal = -1;
  Category arrival{};
  int pool_position = -1;
  PoolState next;
};

// One period of the recruiting process. Throws std::invalid_argument("illegal
// action") when the action targets a retired candidate or a terminated pool.
StepOutcome apply(const PoolState& pool, const Scenario& s, const Action& action,
                  const ExogenousDraw& draw);

}  // namespace recruit
