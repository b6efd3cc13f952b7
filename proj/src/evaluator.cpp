#include "recruit/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "recruit/indices.hpp"
#include "recruit/model.hpp"
#include "recruit/rng.hpp"
#include "stopping_dp.hpp"

namespace recruit {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Backfires: return "Backfires";
    case Verdict::Helps: return "Helps";
    default: return "Indeterminate";
  }
}

RenewalSplit solve_search_renewal(double muA, double muB, const BlockOutcome& blockA,
                                  const BlockOutcome& blockB) {
  const double hireA = muA * blockA.hire;
  const double hireB = muB * blockB.hire;
  const double unknown = muA * blockA.unresolved + muB * blockB.unresolved;
  const double absorb = hireA + hireB + unknown;

  RenewalSplit out;
  if (absorb <= 0.0) {
    // Every cycle recycles: search runs forever and no one is hired.
    out.pNone_lo = out.pNone_hi = 1.0;
    return out;
  }
  // Unknown block mass may end up as either hire, as retirement (recycling), or
  // as a block that never terminates; all resolutions lie inside these bounds.
  out.pA_lo = hireA / absorb;
  out.pA_hi = (hireA + unknown) / absorb;
  out.pB_lo = hireB / absorb;
  out.pB_hi = (hireB + unknown) / absorb;
  out.pNone_lo = 0.0;
  out.pNone_hi = hireA + hireB > 0.0 ? unknown / absorb : 1.0;
  return out;
}

namespace {

struct Accum {
  double pA = 0.0, pB = 0.0, pNone = 0.0;  // certainly-absorbed mass
  double slack = 0.0;                      // censored / unresolved mass
  double search_mass = 0.0;                // mass entering the search phase
};

using PoolKey = std::vector<int>;

PoolKey encode(const PoolState& pool) {
  PoolKey key;
  key.reserve(pool.candidates.size() * 4);
  for (const auto& c : pool.candidates) {
    key.push_back(c.category == Category::B ? 1 : 0);
    key.push_back(c.n1);
    key.push_back(c.n0);
    key.push_back(c.retired ? 1 : 0);
  }
  return key;
}

PoolState decode(const PoolKey& key) {
  PoolState pool;
  for (std::size_t i = 0; i + 3 < key.size(); i += 4)
    pool.candidates.push_back({key[i] ? Category::B : Category::A, key[i + 1],
                               key[i + 2], key[i + 3] != 0});
  return pool;
}

// With no search and only qL = 1 technologies in the pool, live candidates keep
// strictly positive scores forever (a success would be accepted immediately, so
// lambda > 0 at every depth when qH < 1). Play therefore evaluates each live
// candidate infinitely often and a candidate is eventually hired if and only if
// it is qualified. Mass where several live candidates are qualified is left as
// slack; it shrinks geometrically along the all-fail path, so callers defer the
// fold until it is negligible.
struct FoldSplit {
  double pA = 0.0, pB = 0.0, pNone = 0.0, slack = 0.0;
  bool eligible = false;
};

FoldSplit fold_split(const PoolState& pool, const Scenario& s,
                     const PolicyContext& ctx) {
  FoldSplit f;
  if (s.muA + s.muB > 0.0) return f;
  std::vector<const CandidateState*> live;
  for (const auto& c : pool.candidates) {
    if (c.retired) continue;
    const CategoryParams& cat = s.params(c.category);
    if (cat.qL != 1.0 || cat.qH >= 1.0) return f;
    live.push_back(&c);
  }
  if (live.empty()) return f;
  f.eligible = true;
  double none = 1.0;
  for (const auto* c : live)
    none *= 1.0 - ctx.cached_posterior(c->category, c->n1, c->n0);
  f.pNone = none;
  double assigned = none;
  for (const auto* c : live) {
    double own = ctx.cached_posterior(c->category, c->n1, c->n0);
    for (const auto* o : live)
      if (o != c) own *= 1.0 - ctx.cached_posterior(o->category, o->n1, o->n0);
    (c->category == Category::A ? f.pA : f.pB) += own;
    assigned += own;
  }
  f.slack = std::max(0.0, 1.0 - assigned);
  return f;
}

constexpr double kFoldSlackTol = 1e-15;
constexpr std::size_t kMaxFrontierStates = 1u << 18;

BlockOutcome block_outcome(const Scenario& s, Category cat,
                           const NumericalConfig& cfg, double vs, double vs_tol,
                           double myopic_benchmark) {
  const CategoryParams& params = s.params(cat);
  const detail::Lattice lat =
      detail::build_lattice(params, 0, 0, s.delta, cfg.horizon_cap);
  const std::vector<unsigned char> flags =
      s.policy == PolicyKind::Myopic
          ? detail::continue_flags_myopic(lat, myopic_benchmark)
          : detail::continue_flags_index(lat, vs - vs_tol, vs + vs_tol);
  const detail::BlockStats st = detail::block_absorption(lat, flags);
  return {st.hire, st.retire, st.unresolved};
}

}  // namespace

OutcomeDistribution exact_outcome(const Scenario& s, const NumericalConfig& cfg) {
  Scenario sc = s;
  sc.tolerances = cfg;
  {
    const auto violations = validate(sc);
    if (!hard_valid(violations)) {
      std::string what = "exact_outcome: invalid scenario:";
      for (const auto& v : violations)
        if (v.hard) what += " [" + v.name + "]";
      throw std::invalid_argument(what);
    }
  }

  double vs = 0.0, vs_tol = 0.0;
  if (sc.policy == PolicyKind::OptimalIndex) {
    const IndexResult r = search_index(sc, cfg);
    vs = r.value;
    vs_tol = r.achieved_tol;
  }
  const PolicyContext ctx = sc.policy == PolicyKind::OptimalIndex
                                ? PolicyContext(sc, vs)
                                : PolicyContext(sc);
  const double mu_sum = sc.muA + sc.muB;

  Accum acc;
  std::map<PoolKey, double> level;
  level.emplace(encode(mark_retirements(initial_pool_state(sc), ctx)), 1.0);

  for (int depth = 0; depth < cfg.horizon_cap && !level.empty(); ++depth) {
    std::map<PoolKey, double> next;
    for (const auto& [key, w] : level) {
      const PoolState pool = decode(key);
      const FoldSplit f = fold_split(pool, sc, ctx);
      if (f.eligible && f.slack <= kFoldSlackTol) {
        acc.pA += w * f.pA;
        acc.pB += w * f.pB;
        acc.pNone += w * f.pNone;
        acc.slack += w * f.slack;
        continue;
      }
      const Action a = select_action(pool, ctx);
      if (a.kind == Action::Kind::Search) {
        (mu_sum > 0.0 ? acc.search_mass : acc.pNone) += w;
        continue;
      }
      const CandidateState& c = pool.candidates[a.pool_position];
      const CategoryParams& params = sc.params(c.category);
      const double post = ctx.cached_posterior(c.category, c.n1, c.n0);
      for (int sig : {1, 0}) {
        const double ps = signal_prob_from(params, post, sig);
        if (ps <= 0.0) continue;
        PoolState child = pool;
        CandidateState& cc = child.candidates[a.pool_position];
        (sig == 1 ? cc.n1 : cc.n0) += 1;
        if (is_acceptable_posterior(params, update_posterior(params, post, sig))) {
          (c.category == Category::A ? acc.pA : acc.pB) += w * ps;
          continue;
        }
        if (next.size() >= kMaxFrontierStates) {
          acc.slack += w * ps;
          continue;
        }
        next[encode(mark_retirements(child, ctx))] += w * ps;
      }
    }
    level = std::move(next);
  }
  // States still alive at the depth cap: fold where the analytic split applies,
  // censor the rest.
  for (const auto& [key, w] : level) {
    const PoolState pool = decode(key);
    const FoldSplit f = fold_split(pool, sc, ctx);
    if (f.eligible) {
      acc.pA += w * f.pA;
      acc.pB += w * f.pB;
      acc.pNone += w * f.pNone;
      acc.slack += w * f.slack;
    } else {
      acc.slack += w;
    }
  }

  RenewalSplit rn;
  if (acc.search_mass > 0.0) {
    const BlockOutcome bA = sc.muA > 0.0
                                ? block_outcome(sc, Category::A, cfg, vs, vs_tol,
                                                ctx.search_score())
                                : BlockOutcome{0.0, 1.0, 0.0};
    const BlockOutcome bB = sc.muB > 0.0
                                ? block_outcome(sc, Category::B, cfg, vs, vs_tol,
                                                ctx.search_score())
                                : BlockOutcome{0.0, 1.0, 0.0};
    rn = solve_search_renewal(sc.muA, sc.muB, bA, bB);
  }

  OutcomeDistribution out;
  const double w = acc.search_mass;
  out.pA_lo = acc.pA + w * rn.pA_lo;
  out.pB_lo = acc.pB + w * rn.pB_lo;
  out.pNone_lo = acc.pNone + w * rn.pNone_lo;
  out.pA_hi = acc.pA + w * rn.pA_hi + acc.slack;
  out.pB_hi = acc.pB + w * rn.pB_hi + acc.slack;
  out.pNone_hi = acc.pNone + w * rn.pNone_hi + acc.slack;
  out.truncation_mass = std::max({out.pA_hi - out.pA_lo, out.pB_hi - out.pB_lo,
                                  out.pNone_hi - out.pNone_lo});
  if (out.truncation_mass > cfg.prob_tol) throw InsufficientHorizon(out);
  return out;
}

OutcomeDistribution exact_outcome(const Scenario& s) {
  return exact_outcome(s, s.tolerances);
}

CompareRecord compare(const Scenario& before, const Scenario& after,
                      const NumericalConfig& cfg) {
  Scenario b = before, a = after;
  b.muA = b.muB = a.muA = a.muB = 0.0;
  b.tolerances = a.tolerances = NumericalConfig{};
  if (!(b == a))
    throw std::invalid_argument(
        "compare: scenarios must differ only in search probabilities");
  CompareRecord rec;
  rec.before = exact_outcome(before, cfg);
  rec.after = exact_outcome(after, cfg);
  rec.dA_lo = rec.after.pA_lo - rec.before.pA_hi;
  rec.dA_hi = rec.after.pA_hi - rec.before.pA_lo;
  rec.dB_lo = rec.after.pB_lo - rec.before.pB_hi;
  rec.dB_hi = rec.after.pB_hi - rec.before.pB_lo;
  rec.dNone_lo = rec.after.pNone_lo - rec.before.pNone_hi;
  rec.dNone_hi = rec.after.pNone_hi - rec.before.pNone_lo;
  if (rec.dA_hi < 0.0)
    rec.verdict = Verdict::Backfires;
  else if (rec.dA_lo > 0.0)
    rec.verdict = Verdict::Helps;
  else
    rec.verdict = Verdict::Indeterminate;
  return rec;
}

namespace {

TrialResult simulate_trial_generic(const Scenario& s, const PolicyContext& ctx,
                                   SplitMix64& rng, int trial_horizon,
                                   const TrajectoryHooks* hooks) {
  PoolState pool = initial_pool_state(s);
  std::vector<double> post;
  post.reserve(pool.candidates.size());
  for (const auto& c : pool.candidates)
    post.push_back(posterior(s.params(c.category), c.n1, c.n0));

  for (int period = 0; period < trial_horizon; ++period) {
    pool = mark_retirements(pool, ctx);
    const Action a = select_action(pool, ctx);
    if (hooks && hooks->on_action) hooks->on_action(pool, a);
    ExogenousDraw draw;
    if (a.kind == Action::Kind::Evaluate) {
      const auto& c = pool.candidates[a.pool_position];
      const double ps1 = signal_prob_from(s.params(c.category),
                                          post[a.pool_position], 1);
      draw.signal = rng.next_double() < ps1 ? 1 : 0;
    } else {
      const double u = rng.next_double();
      draw.arrival = u < s.muA ? 0 : (u < s.muA + s.muB ? 1 : 2);
    }
    StepOutcome out = apply(pool, s, a, draw);
    if (hooks && hooks->on_outcome) hooks->on_outcome(pool, out);
    if (a.kind == Action::Kind::Evaluate) {
      post[a.pool_position] = update_posterior(
          s.params(pool.candidates[a.pool_position].category),
          post[a.pool_position], draw.signal);
    } else if (out.kind == StepOutcome::Kind::Arrival) {
      post.push_back(s.params(out.arrival).p0);
    }
    pool = std::move(out.next);
    if (pool.is_terminated())
      return {pool.terminated->category == Category::A
                  ? TrialResult::Outcome::HiredA
                  : TrialResult::Outcome::HiredB,
              period + 1};
  }
  return {TrialResult::Outcome::Censored, trial_horizon};
}

// qL = 1 for both categories: a success is always accepted on the spot, so a
// candidate's state is its fail count and retirement happens at a fixed
// per-category depth along the spine. Same draws, same decisions, no pool
// copies.
TrialResult simulate_trial_ql1(const Scenario& s, const PolicyContext& ctx,
                               SplitMix64& rng, int trial_horizon) {
  struct Slot {
    Category cat;
    int n0;
    double post;
    bool retired;
  };
  const int rdA = ctx.retire_depth_qL1(Category::A);
  const int rdB = ctx.retire_depth_qL1(Category::B);
  auto retire_depth = [&](Category c) { return c == Category::A ? rdA : rdB; };

  std::vector<Slot> slots;
  for (const auto& c : s.pool_or_default()) {
    const int rd = retire_depth(c.category);
    slots.push_back({c.category, c.n0, posterior(s.params(c.category), c.n1, c.n0),
                     c.retired || (rd >= 0 && c.n0 >= rd)});
  }

  for (int period = 0; period < trial_horizon; ++period) {
    int pick = -1;
    double pick_score = 0.0;
    int live = 0;
    for (int i = 0; i < static_cast<int>(slots.size()); ++i) {
      if (slots[i].retired) continue;
      ++live;
      if (live == 1) {
        pick = i;
        continue;
      }
      if (live == 2 && pick >= 0)
        pick_score = ctx.candidate_score(slots[pick].cat, 0, slots[pick].n0);
      const double sc = ctx.candidate_score(slots[i].cat, 0, slots[i].n0);
      if (sc > pick_score) {
        pick = i;
        pick_score = sc;
      }
    }
    if (pick < 0) {
      const double u = rng.next_double();
      if (u < s.muA + s.muB) {
        const Category cat = u < s.muA ? Category::A : Category::B;
        const int rd = retire_depth(cat);
        slots.push_back({cat, 0, s.params(cat).p0, rd == 0});
      }
      continue;
    }
    Slot& c = slots[pick];
    const CategoryParams& params = s.params(c.cat);
    const double ps1 = signal_prob_from(params, c.post, 1);
    if (rng.next_double() < ps1)
      return {c.cat == Category::A ? TrialResult::Outcome::HiredA
                                   : TrialResult::Outcome::HiredB,
              period + 1};
    c.post = update_posterior(params, c.post, 0);
    c.n0 += 1;
    const int rd = retire_depth(c.cat);
    if (rd >= 0 && c.n0 >= rd) c.retired = true;
  }
  return {TrialResult::Outcome::Censored, trial_horizon};
}

}  // namespace

TrialResult simulate_trial(const Scenario& s, const PolicyContext& ctx,
                           std::uint64_t seed, std::uint64_t trial_index,
                           int trial_horizon, const TrajectoryHooks* hooks) {
  SplitMix64 rng(SplitMix64::substream(seed, trial_index));
  if (!hooks && s.catA.qL == 1.0 && s.catB.qL == 1.0)
    return simulate_trial_ql1(s, ctx, rng, trial_horizon);
  return simulate_trial_generic(s, ctx, rng, trial_horizon, hooks);
}

McEstimate monte_carlo(const Scenario& s, long long n, std::uint64_t seed,
                       int trial_horizon) {
  if (n < 1) throw std::invalid_argument("monte_carlo: need at least one trial");
  if (trial_horizon < 1)
    throw std::invalid_argument("monte_carlo: trial horizon must be >= 1");
  {
    const auto violations = validate(s);
    if (!hard_valid(violations))
      throw std::invalid_argument("monte_carlo: invalid scenario");
  }

  const PolicyContext base(s);
  // Warm the per-category retirement depths so worker copies share the work.
  if (s.catA.qL == 1.0 && s.catB.qL == 1.0) {
    base.retire_depth_qL1(Category::A);
    base.retire_depth_qL1(Category::B);
  }

  const int workers = std::max(
      1, std::min<int>(8, static_cast<int>(std::thread::hardware_concurrency())));
  struct Counts {
    long long a = 0, b = 0, none = 0, censored = 0;
  };
  std::vector<Counts> counts(workers);
  std::vector<std::thread> pool;
  const long long chunk = (n + workers - 1) / workers;
  for (int wkr = 0; wkr < workers; ++wkr) {
    const long long lo = wkr * chunk, hi = std::min<long long>(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, wkr, lo, hi]() {
      const PolicyContext ctx = base;  // per-worker copy: score memos mutate
      Counts local;
      for (long long t = lo; t < hi; ++t) {
        const TrialResult r = simulate_trial(s, ctx, seed, static_cast<std::uint64_t>(t),
                                             trial_horizon);
        switch (r.outcome) {
          case TrialResult::Outcome::HiredA: ++local.a; break;
          case TrialResult::Outcome::HiredB: ++local.b; break;
          case TrialResult::Outcome::Censored:
            ++local.none;
            ++local.censored;
            break;
        }
      }
      counts[wkr] = local;
    });
  }
  for (auto& t : pool) t.join();

  Counts total;
  for (const auto& c : counts) {
    total.a += c.a;
    total.b += c.b;
    total.none += c.none;
    total.censored += c.censored;
  }
  McEstimate est;
  est.n = n;
  est.seed = seed;
  est.censored = total.censored;
  est.pA = static_cast<double>(total.a) / static_cast<double>(n);
  est.pB = static_cast<double>(total.b) / static_cast<double>(n);
  est.pNone = 1.0 - est.pA - est.pB;  // exact complement
  auto se = [&](double p) { return std::sqrt(p * (1.0 - p) / static_cast<double>(n)); };
  est.stderrA = se(est.pA);
  est.stderrB = se(est.pB);
  est.stderrNone = se(est.pNone);
  return est;
}

}  // namespace recruit
