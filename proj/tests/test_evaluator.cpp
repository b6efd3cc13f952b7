#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "recruit/evaluator.hpp"
#include "recruit/experiments.hpp"
#include "recruit/indices.hpp"
#include "recruit/model.hpp"
#include "recruit/rng.hpp"

using namespace recruit;

namespace {

double mid(double lo, double hi) { return 0.5 * (lo + hi); }

// Hire probabilities of the four worked cases, evaluated from the closed-form
// absorption recursions with rational arithmetic and frozen here.
struct Golden {
  CaseId id;
  double before, after;
};
const Golden kGolden[] = {
    {CaseId::P1, 0.576, 0.570216867469880},
    {CaseId::P2, 0.4108, 0.354307296137339},
    {CaseId::P3, 0.225, 0.0892318946598391},
    {CaseId::P4, 0.152985737197301, 0.144590848995463},
};

}  // namespace

TEST_CASE("exact outcome reproduces the worked hire probabilities") {
  for (const Golden& g : kGolden) {
    const PropositionCase& c = builtin_case(g.id);
    const OutcomeDistribution before = exact_outcome(c.before);
    const OutcomeDistribution after = exact_outcome(c.after);
    CHECK(mid(before.pA_lo, before.pA_hi) == doctest::Approx(g.before).epsilon(1e-9));
    CHECK(mid(after.pA_lo, after.pA_hi) == doctest::Approx(g.after).epsilon(1e-9));
    CHECK(before.truncation_mass <= c.before.tolerances.prob_tol);
    CHECK(after.truncation_mass <= c.after.tolerances.prob_tol);
  }
}

TEST_CASE("interval bookkeeping is conservative") {
  for (const auto& c : builtin_cases()) {
    for (const Scenario* s : {&c.before, &c.after}) {
      const OutcomeDistribution d = exact_outcome(*s);
      CHECK(d.pA_lo <= d.pA_hi);
      CHECK(d.pB_lo <= d.pB_hi);
      CHECK(d.pNone_lo <= d.pNone_hi);
      CHECK(d.pA_lo + d.pB_lo + d.pNone_lo <= 1.0 + 1e-12);
      CHECK(d.pA_hi + d.pB_hi + d.pNone_hi >= 1.0 - 1e-12);
      CHECK(d.pA_hi - d.pA_lo <= d.truncation_mass + 1e-15);
      CHECK(d.pB_hi - d.pB_lo <= d.truncation_mass + 1e-15);
      CHECK(d.pNone_hi - d.pNone_lo <= d.truncation_mass + 1e-15);
    }
  }
}

TEST_CASE("no-search cases keep the never-hired mass exact") {
  // P1 with mu = 0: whoever survives is evaluated forever and hired iff
  // qualified, so pNone = (1-p0A after one failure path algebra) works out to
  // 0.2 * 0.3 = 0.06; P3's analogue is 0.25 * 0.3.
  const OutcomeDistribution p1 = exact_outcome(builtin_case(CaseId::P1).before);
  CHECK(mid(p1.pNone_lo, p1.pNone_hi) == doctest::Approx(0.06).epsilon(1e-9));
  const OutcomeDistribution p3 = exact_outcome(builtin_case(CaseId::P3).before);
  CHECK(mid(p3.pNone_lo, p3.pNone_hi) == doctest::Approx(0.075).epsilon(1e-9));
  CHECK(mid(p3.pB_lo, p3.pB_hi) == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("exact outcome rejects hard-invalid scenarios") {
  Scenario s = builtin_case(CaseId::P1).after;
  s.muA = 0.8;
  s.muB = 0.4;
  CHECK_THROWS_AS(exact_outcome(s), std::invalid_argument);
}

TEST_CASE("insufficient horizon carries the achieved bounds") {
  const Scenario base = builtin_case(CaseId::P1).after;
  NumericalConfig tiny = base.tolerances;
  tiny.horizon_cap = 1;
  bool thrown = false;
  try {
    exact_outcome(base, tiny);
  } catch (const InsufficientHorizon& e) {
    thrown = true;
    CHECK(e.achieved.truncation_mass > tiny.prob_tol);
    CHECK(e.achieved.pA_lo >= 0.0);
    CHECK(e.achieved.pA_hi <= 1.0);
    CHECK(e.achieved.pA_lo <= 0.576);
    CHECK(e.achieved.pA_hi >= 0.576);
  }
  CHECK(thrown);
}

TEST_CASE("search renewal solve") {
  // Blocks that always end in a hire: the A share is muA directly.
  RenewalSplit r = solve_search_renewal(0.3, 0.7, {1.0, 0.0, 0.0}, {1.0, 0.0, 0.0});
  CHECK(r.pA_lo == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(r.pA_hi == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(r.pNone_hi == 0.0);

  // Retirement mass recycles: P1's post-search recursion gives
  // muA lamA / (muA lamA + muB p0B) = 0.32 / 0.553...
  r = solve_search_renewal(2.0 / 3.0, 1.0 / 3.0, {0.48, 0.52, 0.0},
                           {0.7, 0.3, 0.0});
  CHECK(r.pA_lo == doctest::Approx(0.578313253012048).epsilon(1e-12));

  // Nothing ever hires: search runs forever.
  r = solve_search_renewal(0.5, 0.5, {0.0, 1.0, 0.0}, {0.0, 1.0, 0.0});
  CHECK(r.pNone_lo == 1.0);

  // Unknown block mass widens the interval but never flips the order.
  r = solve_search_renewal(0.5, 0.5, {0.4, 0.5, 0.1}, {0.6, 0.4, 0.0});
  CHECK(r.pA_lo <= r.pA_hi);
  CHECK(r.pA_hi - r.pA_lo <= 0.1 / (0.2 + 0.3 + 0.05) + 1e-12);
}

TEST_CASE("compare: directions and degenerate pairs") {
  const PropositionCase& p1 = builtin_case(CaseId::P1);
  const CompareRecord rec = compare(p1.before, p1.after, p1.before.tolerances);
  CHECK(rec.verdict == Verdict::Backfires);
  CHECK(rec.dA_hi < 0.0);

  const CompareRecord same = compare(p1.after, p1.after, p1.after.tolerances);
  CHECK(same.verdict == Verdict::Indeterminate);
  CHECK(same.dA_lo <= 0.0);
  CHECK(same.dA_hi >= 0.0);

  Scenario other = p1.after;
  other.catA.qH = 0.5;
  CHECK_THROWS_AS(compare(p1.before, other, p1.before.tolerances),
                  std::invalid_argument);
}

TEST_CASE("relabeling symmetry: the A gain mirrors the B loss") {
  Scenario sym = builtin_case(CaseId::P1).after;
  sym.catB = sym.catA;
  sym.catB.label = Category::B;
  sym.muA = 0.3;
  sym.muB = 0.5;
  Scenario shifted = sym;
  shifted.muA = 0.5;
  shifted.muB = 0.3;
  const CompareRecord rec = compare(sym, shifted, sym.tolerances);
  const double dA = mid(rec.dA_lo, rec.dA_hi);
  const double dB = mid(rec.dB_lo, rec.dB_hi);
  CHECK(dA == doctest::Approx(-dB).epsilon(1e-9));
  CHECK(mid(rec.dNone_lo, rec.dNone_hi) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("monte carlo is reproducible and censors at the horizon") {
  const Scenario s = builtin_case(CaseId::P1).before;
  const McEstimate a = monte_carlo(s, 20000, 42, 500);
  const McEstimate b = monte_carlo(s, 20000, 42, 500);
  CHECK(a.pA == b.pA);
  CHECK(a.pB == b.pB);
  CHECK(a.censored == b.censored);
  CHECK(a.pA + a.pB + a.pNone == 1.0);
  CHECK(a.censored > 0);  // the evaluated-forever path is censored

  const McEstimate c = monte_carlo(s, 20000, 43, 500);
  CHECK(c.pA != a.pA);  // different stream
}

TEST_CASE("monte carlo agrees with the exact evaluator") {
  for (const Golden& g : kGolden) {
    const PropositionCase& c = builtin_case(g.id);
    const McEstimate est = monte_carlo(c.after, 200000, 20260809, 10000);
    CHECK(std::abs(est.pA - g.after) <= 4.0 * est.stderrA);
  }
}

TEST_CASE("single-category search with slack arrival mass") {
  // muB = 0 and muA + muB < 1: post-search play can only ever hire A, so
  // gammaA = lamA + (1-lamA)(1-p0B) = 0.48 + 0.52*0.3 = 0.636 by hand.
  Scenario s = builtin_case(CaseId::P1).after;
  s.muB = 0.0;
  const OutcomeDistribution d = exact_outcome(s);
  CHECK(mid(d.pA_lo, d.pA_hi) == doctest::Approx(0.636).epsilon(1e-9));
  CHECK(mid(d.pB_lo, d.pB_hi) == doctest::Approx(0.364).epsilon(1e-9));
  CHECK(mid(d.pNone_lo, d.pNone_hi) == doctest::Approx(0.0).epsilon(1e-9));

  const McEstimate est = monte_carlo(s, 100000, 5, 5000);
  CHECK(std::abs(est.pA - 0.636) <= 4.0 * est.stderrA);
}

TEST_CASE("random valid scenarios: exact evaluator and Monte Carlo agree") {
  SplitMix64 rng(1618);
  int accepted = 0;
  while (accepted < 8) {
    Scenario s;
    s.delta = 0.8 + 0.15 * rng.next_double();
    for (Category c : {Category::A, Category::B}) {
      CategoryParams cat;
      cat.label = c;
      cat.p0 = 0.3 + 0.5 * rng.next_double();
      cat.v = 0.5 + 1.5 * rng.next_double();
      cat.qH = 0.6 + 0.35 * rng.next_double();
      cat.qL = rng.next_double() < 0.4 ? 1.0 : 0.6 + 0.4 * rng.next_double();
      const double post1 = cat.p0 * cat.qH /
                           (cat.p0 * cat.qH + (1.0 - cat.p0) * (1.0 - cat.qL));
      if (post1 <= cat.p0 + 1e-9) break;
      cat.Pbar = cat.p0 + (post1 - cat.p0) * (0.3 + 0.6 * rng.next_double());
      (c == Category::A ? s.catA : s.catB) = cat;
    }
    s.muA = 0.2 + 0.4 * rng.next_double();
    s.muB = std::min(1.0 - s.muA, 0.1 + 0.4 * rng.next_double());
    s.policy = rng.next_double() < 0.5 ? PolicyKind::Myopic
                                       : PolicyKind::OptimalIndex;
    s.tolerances.horizon_cap = 400;
    if (!validate(s).empty()) continue;

    OutcomeDistribution d;
    try {
      d = exact_outcome(s);
    } catch (const InsufficientHorizon&) {
      continue;  // honest refusal on a hard grid point; sample another
    }
    const McEstimate est = monte_carlo(s, 40000, 271828 + accepted, 4000);
    CHECK(std::abs(est.pA - mid(d.pA_lo, d.pA_hi)) <=
          5.0 * std::max(est.stderrA, 1e-4));
    CHECK(std::abs(est.pB - mid(d.pB_lo, d.pB_hi)) <=
          5.0 * std::max(est.stderrB, 1e-4));
    ++accepted;
  }
}

namespace {

// Test-only brute force: walk the complete game tree (arrivals included, no
// renewal shortcut, no analytic folds), censoring branches below a mass floor
// or at the depth cap. Returns certain hire mass per category plus the
// censored remainder, which must bracket the production evaluator's answer.
struct BruteForce {
  const Scenario& s;
  const PolicyContext& ctx;
  int depth_cap;
  double mass_floor;
  double pA = 0.0, pB = 0.0, pNone = 0.0, censored = 0.0;

  void walk(const PoolState& pool, double w, int depth) {
    if (w < mass_floor || depth >= depth_cap) {
      censored += w;
      return;
    }
    const PoolState marked = mark_retirements(pool, ctx);
    const Action a = select_action(marked, ctx);
    if (a.kind == Action::Kind::Search) {
      if (s.muA > 0.0) {
        ExogenousDraw d;
        d.arrival = 0;
        walk(apply(marked, s, a, d).next, w * s.muA, depth + 1);
      }
      if (s.muB > 0.0) {
        ExogenousDraw d;
        d.arrival = 1;
        walk(apply(marked, s, a, d).next, w * s.muB, depth + 1);
      }
      const double rest = 1.0 - s.muA - s.muB;
      if (rest > 0.0) {
        ExogenousDraw d;
        d.arrival = 2;
        walk(apply(marked, s, a, d).next, w * rest, depth + 1);
      }
      return;
    }
    const auto& cand = marked.candidates[a.pool_position];
    const double ps1 =
        signal_prob(s.params(cand.category), cand.n1, cand.n0, 1);
    for (int sig : {1, 0}) {
      const double ps = sig == 1 ? ps1 : 1.0 - ps1;
      if (ps <= 0.0) continue;
      ExogenousDraw d;
      d.signal = sig;
      const StepOutcome out = apply(marked, s, a, d);
      if (out.next.is_terminated()) {
        (out.next.terminated->category == Category::A ? pA : pB) += w * ps;
      } else {
        walk(out.next, w * ps, depth + 1);
      }
    }
  }
};

}  // namespace

TEST_CASE("brute-force tree enumeration brackets the evaluator") {
  std::vector<Scenario> scenarios = {
      builtin_case(CaseId::P1).after, builtin_case(CaseId::P2).after,
      builtin_case(CaseId::P3).after, builtin_case(CaseId::P4).before};
  {
    Scenario one_sided = builtin_case(CaseId::P1).after;
    one_sided.muB = 0.0;  // exercises the no-arrival branch
    scenarios.push_back(one_sided);
  }
  for (const Scenario& s : scenarios) {
    const OutcomeDistribution d = exact_outcome(s);
    const PolicyContext ctx(s);
    BruteForce bf{s, ctx, 60, 1e-12};
    bf.walk(initial_pool_state(s), 1.0, 0);
    CHECK(bf.pA + bf.pB + bf.pNone + bf.censored ==
          doctest::Approx(1.0).epsilon(1e-9));
    // Certain mass below, certain + censored above.
    CHECK(bf.pA <= mid(d.pA_lo, d.pA_hi) + 1e-9);
    CHECK(bf.pA + bf.censored >= mid(d.pA_lo, d.pA_hi) - 1e-9);
    CHECK(bf.pB <= mid(d.pB_lo, d.pB_hi) + 1e-9);
    CHECK(bf.pB + bf.censored >= mid(d.pB_lo, d.pB_hi) - 1e-9);
    // Depth 60 leaves little on the table for these parameters.
    CHECK(bf.censored < 2e-3);
    CHECK(bf.pA == doctest::Approx(mid(d.pA_lo, d.pA_hi)).epsilon(3e-3));
  }
}

TEST_CASE("exact evaluation honors a custom initial pool") {
  Scenario s = builtin_case(CaseId::P1).after;
  s.initial_pool = {{Category::B, 0, 0, false},
                    {Category::A, 0, 1, true},  // already retired
                    {Category::A, 0, 0, false}};
  const OutcomeDistribution d = exact_outcome(s);
  // Hand recursion: A (pos 2) is evaluated first (0.72 > 0.7); on failure it
  // retires and B follows; afterwards search takes over as in the default
  // pool, so the outcome matches the default-pool scenario.
  CHECK(mid(d.pA_lo, d.pA_hi) ==
        doctest::Approx(0.570216867469880).epsilon(1e-9));
  const McEstimate est = monte_carlo(s, 60000, 11, 2000);
  CHECK(std::abs(est.pA - mid(d.pA_lo, d.pA_hi)) <= 4.0 * est.stderrA);
}

TEST_CASE("monte carlo input checks") {
  const Scenario s = builtin_case(CaseId::P1).before;
  CHECK_THROWS_AS(monte_carlo(s, 0, 1, 100), std::invalid_argument);
  CHECK_THROWS_AS(monte_carlo(s, 10, 1, 0), std::invalid_argument);
}

TEST_CASE("unreachable threshold: every trial is censored") {
  Scenario s = builtin_case(CaseId::P1).before;
  s.catA.qH = 0.7;
  s.catA.qL = 0.8;
  s.catA.Pbar = 1.0;  // unreachable when signals are noisy both ways
  s.catB = s.catA;
  s.catB.label = Category::B;
  const McEstimate est = monte_carlo(s, 500, 7, 50);
  CHECK(est.pNone == 1.0);
  CHECK(est.censored == 500);
}

TEST_CASE("fast and generic trial paths take identical decisions") {
  TrajectoryHooks noop;  // non-null hooks force the generic path
  noop.on_action = [](const PoolState&, const Action&) {};
  for (const auto& c : builtin_cases()) {
    for (const Scenario* s : {&c.before, &c.after}) {
      const PolicyContext ctx(*s);
      for (std::uint64_t t = 0; t < 1500; ++t) {
        const TrialResult fast = simulate_trial(*s, ctx, 99, t, 400);
        const TrialResult slow = simulate_trial(*s, ctx, 99, t, 400, &noop);
        CHECK(fast.outcome == slow.outcome);
        CHECK(fast.periods == slow.periods);
      }
    }
  }
}

TEST_CASE("trajectories never evaluate retired candidates and search only "
          "once the pool is exhausted") {
  for (const auto& c : builtin_cases()) {
    const Scenario& s = c.after;
    const PolicyContext ctx(s);
    long long violations = 0;
    TrajectoryHooks hooks;
    hooks.on_action = [&](const PoolState& pool, const Action& a) {
      if (a.kind == Action::Kind::Evaluate) {
        if (pool.candidates[a.pool_position].retired) ++violations;
      } else {
        for (const auto& cand : pool.candidates)
          if (!cand.retired) ++violations;
      }
    };
    hooks.on_outcome = [&](const PoolState& pool, const StepOutcome& out) {
      if (out.kind == StepOutcome::Kind::Hired) {
        // No candidate was acceptable before this hire.
        for (const auto& cand : pool.candidates)
          if (is_acceptable(s.params(cand.category), cand.n1, cand.n0))
            ++violations;
      }
    };
    for (std::uint64_t t = 0; t < 500; ++t)
      simulate_trial(s, ctx, 31337, t, 300, &hooks);
    CHECK(violations == 0);
  }
}
