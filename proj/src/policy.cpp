#include "recruit/policy.hpp"

#include <stdexcept>

#include "recruit/indices.hpp"
#include "recruit/model.hpp"
#include "stopping_dp.hpp"

namespace recruit {

namespace {

std::uint64_t state_key(Category cat, int n1, int n0) {
  return (static_cast<std::uint64_t>(cat == Category::B) << 62) |
         (static_cast<std::uint64_t>(n1) << 31) | static_cast<std::uint64_t>(n0);
}

double index_value(const CategoryParams& cat, int n1, int n0, double delta,
                   const NumericalConfig& cfg) {
  const detail::Lattice lat =
      detail::build_lattice(cat, n1, n0, delta, cfg.horizon_cap);
  const detail::Calibration cal = detail::calibrate(lat, cfg.index_tol);
  if (0.5 * (cal.hi - cal.lo) > cfg.index_tol)
    throw HorizonError("horizon insufficient: index bracket wider than index_tol",
                       0.5 * (cal.hi - cal.lo));
  return 0.5 * (cal.lo + cal.hi);
}

}  // namespace

PoolState initial_pool_state(const Scenario& s) {
  PoolState pool;
  pool.candidates = s.pool_or_default();
  return pool;
}

PolicyContext::PolicyContext(const Scenario& s) : s_(s) {
  search_score_ = s.policy == PolicyKind::Myopic
                      ? myopic_search_value(s)
                      : search_index(s, s.tolerances).value;
}

PolicyContext::PolicyContext(const Scenario& s, double search_score)
    : s_(s), search_score_(search_score) {}

double PolicyContext::candidate_score(Category cat, int n1, int n0) const {
  const std::uint64_t key = state_key(cat, n1, n0);
  if (auto it = score_memo_.find(key); it != score_memo_.end()) return it->second;
  const CategoryParams& params = s_.params(cat);
  const double score = s_.policy == PolicyKind::Myopic
                           ? myopic_value(params, n1, n0)
                           : index_value(params, n1, n0, s_.delta, s_.tolerances);
  score_memo_.emplace(key, score);
  return score;
}

double PolicyContext::cached_posterior(Category cat, int n1, int n0) const {
  const std::uint64_t key = state_key(cat, n1, n0);
  if (auto it = post_memo_.find(key); it != post_memo_.end()) return it->second;
  const double p = posterior(s_.params(cat), n1, n0);
  post_memo_.emplace(key, p);
  return p;
}

int PolicyContext::retire_depth_qL1(Category cat) const {
  int& cache = retire_depth_[cat == Category::B ? 1 : 0];
  if (cache != -2) return cache;
  const double bench = search_score_;
  if (candidate_score(cat, 0, 0) <= bench) return cache = 0;
  // Scores shrink along the all-fail spine; exponential search then bisect.
  int lo = 0, hi = 1;
  while (candidate_score(cat, 0, hi) > bench) {
    lo = hi;
    hi *= 2;
    if (hi > (1 << 24)) return cache = -1;
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (candidate_score(cat, 0, mid) > bench ? lo : hi) = mid;
  }
  return cache = hi;
}

PoolState mark_retirements(const PoolState& pool, const PolicyContext& ctx) {
  PoolState out = pool;
  for (auto& c : out.candidates) {
    if (c.retired) continue;
    if (ctx.candidate_score(c.category, c.n1, c.n0) <= ctx.search_score())
      c.retired = true;
  }
  return out;
}

Action select_action(const PoolState& pool, const PolicyContext& ctx) {
  if (pool.is_terminated())
    throw std::logic_error("select_action: process already terminated");
  int best = -1;
  double best_score = 0.0;
  for (int i = 0; i < static_cast<int>(pool.candidates.size()); ++i) {
    const auto& c = pool.candidates[i];
    if (c.retired) continue;
    const double score = ctx.candidate_score(c.category, c.n1, c.n0);
    if (best < 0 || score > best_score) {
      best = i;
      best_score = score;
    }
  }
  if (best < 0) return {Action::Kind::Search, -1};
  return {Action::Kind::Evaluate, best};
}

Action myopic_action(const PoolState& pool, const Scenario& s) {
  Scenario ms = s;
  ms.policy = PolicyKind::Myopic;
  const PolicyContext ctx(ms);
  return select_action(mark_retirements(pool, ctx), ctx);
}

Action optimal_action(const PoolState& pool, const Scenario& s,
                      double search_index_value) {
  Scenario os = s;
  os.policy = PolicyKind::OptimalIndex;
  const PolicyContext ctx(os, search_index_value);
  return select_action(mark_retirements(pool, ctx), ctx);
}

StepOutcome apply(const PoolState& pool, const Scenario& s, const Action& action,
                  const ExogenousDraw& draw) {
  if (pool.is_terminated()) throw std::invalid_argument("illegal action: pool terminated");
  StepOutcome out;
  out.next = pool;
  if (action.kind == Action::Kind::Evaluate) {
    const int i = action.pool_position;
    if (i < 0 || i >= static_cast<int>(pool.candidates.size()))
      throw std::invalid_argument("illegal action: no such candidate");
    if (pool.candidates[i].retired)
      throw std::invalid_argument("illegal action: candidate retired");
    if (draw.signal != 0 && draw.signal != 1)
      throw std::invalid_argument("evaluate requires a signal draw");
    CandidateState& c = out.next.candidates[i];
    (draw.signal == 1 ? c.n1 : c.n0) += 1;
    out.signal = draw.signal;
    out.pool_position = i;
    if (is_acceptable(s.params(c.category), c.n1, c.n0)) {
      out.kind = StepOutcome::Kind::Hired;
      out.next.terminated = HiredRecord{c.category, i, c.n1, c.n0};
    } else {
      out.kind = StepOutcome::Kind::Signal;
    }
    return out;
  }
  // Search.
  switch (draw.arrival) {
    case 0:
    case 1: {
      const Category cat = draw.arrival == 0 ? Category::A : Category::B;
      out.kind = StepOutcome::Kind::Arrival;
      out.arrival = cat;
      out.next.candidates.push_back({cat, 0, 0, false});
      return out;
    }
    case 2:
      out.kind = StepOutcome::Kind::NoArrival;
      return out;
    default:
      throw std::invalid_argument("search requires an arrival draw");
  }
}

}  // namespace recruit
