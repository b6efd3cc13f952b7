#include "recruit/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <utility>

#include "recruit/indices.hpp"
#include "recruit/model.hpp"
#include "recruit/scenario_io.hpp"

namespace recruit {

namespace {

CategoryParams make_cat(Category label, double p0, double v, double qH, double qL,
                        double Pbar) {
  CategoryParams c;
  c.label = label;
  c.p0 = p0;
  c.v = v;
  c.qH = qH;
  c.qL = qL;
  c.Pbar = Pbar;
  return c;
}

Scenario make_scenario(double delta, CategoryParams a, CategoryParams b,
                       double muA, double muB, PolicyKind policy) {
  Scenario s;
  s.delta = delta;
  s.catA = a;
  s.catB = b;
  s.muA = muA;
  s.muB = muB;
  s.policy = policy;
  return s;
}

// Acceptance thresholds shared by the worked cases. Their technologies have
// qL = 1, so the first positive signal lifts the posterior to one and any
// thresholds with Pbar^A < Pbar^B reproduce the same play.
constexpr double kPbarA = 0.90;
constexpr double kPbarB = 0.95;

PropositionCase case_p1() {
  PropositionCase c;
  c.id = CaseId::P1;
  c.name = "P1";
  c.mechanism = "myopic rule, pool expansion";
  c.after = make_scenario(
      0.9, make_cat(Category::A, 0.8, 1.5, 0.6, 1.0, kPbarA),
      make_cat(Category::B, 0.7, 1.0, 1.0, 1.0, kPbarB), 2.0 / 3.0, 1.0 / 3.0,
      PolicyKind::Myopic);
  c.before = c.after;
  c.before.muA = c.before.muB = 0.0;
  return c;
}

PropositionCase case_p2() {
  PropositionCase c;
  c.id = CaseId::P2;
  c.name = "P2";
  c.mechanism = "myopic rule, search reallocation";
  c.zeta = 0.04;
  c.before = make_scenario(
      0.9, make_cat(Category::A, 0.8, 1.5, 0.2, 1.0, kPbarA),
      make_cat(Category::B, 0.64, 1.0, 0.75, 1.0, kPbarB), 0.9, 0.1,
      PolicyKind::Myopic);
  c.after = c.before;
  c.after.muA += c.zeta;
  c.after.muB -= c.zeta;
  return c;
}

PropositionCase case_p3() {
  PropositionCase c;
  c.id = CaseId::P3;
  c.name = "P3";
  c.mechanism = "index rule, pool expansion";
  c.after = make_scenario(
      0.9, make_cat(Category::A, 0.75, 1.2, 0.19, 1.0, kPbarA),
      make_cat(Category::B, 0.7, 1.0, 1.0, 1.0, kPbarB), 0.52, 0.48,
      PolicyKind::OptimalIndex);
  c.before = c.after;
  c.before.muA = c.before.muB = 0.0;
  return c;
}

PropositionCase case_p4() {
  PropositionCase c;
  c.id = CaseId::P4;
  c.name = "P4";
  c.mechanism = "index rule, search reallocation";
  c.zeta = 0.01;
  c.before = make_scenario(
      0.9, make_cat(Category::A, 0.69, 1.01, 0.4, 1.0, kPbarA),
      make_cat(Category::B, 0.68, 1.0, 0.8, 1.0, kPbarB), 0.15, 0.85,
      PolicyKind::OptimalIndex);
  c.after = c.before;
  c.after.muA += c.zeta;
  c.after.muB -= c.zeta;
  return c;
}

ConditionCheck cond(std::string name, double lhs, double rhs) {
  ConditionCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = lhs - rhs;
  c.holds = lhs > rhs;
  return c;
}

// Reallocation inequality that makes the post-shift hire probability of an A
// candidate strictly smaller; shared by the myopic and index reallocation
// cases.
std::pair<double, double> zeta_shift_inequality(const Scenario& before,
                                                double zeta) {
  const double lamA = one_step_hire_prob(before.catA, 0, 0);
  const double lamB = one_step_hire_prob(before.catB, 0, 0);
  const double lamB0 = one_step_hire_prob(before.catB, 0, 1);
  const double lhs = before.muA / (before.muA * lamA + before.muB * lamB);
  const double rhs =
      (1.0 - lamB0) * (before.muA + zeta) /
      ((before.muA + zeta) * lamA +
       (before.muB - zeta) * (lamB + lamB0 * (1.0 - lamB)));
  return {lhs, rhs};
}

double index_of(const Scenario& s, Category cat, int n1, int n0) {
  return gittins_index(s.params(cat), n1, n0, s.delta, s.tolerances).value;
}

}  // namespace

std::vector<PropositionCase> builtin_cases() {
  return {case_p1(), case_p2(), case_p3(), case_p4()};
}

const PropositionCase& builtin_case(CaseId id) {
  static const std::vector<PropositionCase> cases = builtin_cases();
  return cases[static_cast<int>(id)];
}

std::vector<ConditionCheck> check_conditions(const PropositionCase& c) {
  std::vector<ConditionCheck> out;
  const Scenario& b = c.before;
  const Scenario& a = c.after;

  switch (c.id) {
    case CaseId::P1: {
      const MyopicValues m = myopic_values(a);
      out.push_back(cond("myopic_A_first", m.uA_blank, m.uB_blank));
      out.push_back(
          cond("myopic_B_preferred_to_search_initially", m.uB_blank, m.uS));
      out.push_back(cond("myopic_search_better_than_A_after_single_fail", m.uS,
                         myopic_value(a.catA, 0, 1)));
      out.push_back(cond("myopic_prob_A_reduced_w_search",
                         a.muB * a.catB.p0 * (1.0 - a.catA.qH),
                         a.muA * (1.0 - a.catA.p0) * a.catA.qH));
      break;
    }
    case CaseId::P2: {
      const MyopicValues m0 = myopic_values(b);
      const MyopicValues mz = myopic_values(a);
      const double uA_fail = myopic_value(b.catA, 0, 1);
      const double uB_fail = myopic_value(b.catB, 0, 1);
      out.push_back(cond("zeta0_B_first", m0.uB_blank, m0.uA_blank));
      out.push_back(cond("zeta0_A_above_search", m0.uA_blank, m0.uS));
      out.push_back(cond("zeta0_search_above_A_fail", m0.uS, uA_fail));
      out.push_back(cond("zeta0_search_above_B_fail", m0.uS, uB_fail));
      out.push_back(cond("zetapos_B_fail_above_search", uB_fail, mz.uS));
      out.push_back(cond("zetapos_search_above_A_fail", mz.uS, uA_fail));
      const auto [lhs, rhs] = zeta_shift_inequality(b, c.zeta);
      out.push_back(cond("myopic_prob_A_smaller_with_zeta_increase", lhs, rhs));
      break;
    }
    case CaseId::P3: {
      const double vA = index_of(a, Category::A, 0, 0);
      const double vB = index_of(a, Category::B, 0, 0);
      const double vA_fail = index_of(a, Category::A, 0, 1);
      const double vs = search_index(a, a.tolerances).value;
      out.push_back(cond("optimal_B_evaluated_before_A", vB, vA));
      out.push_back(cond("indices_above_search_A", vA, vs));
      out.push_back(cond("indices_above_search_B", vB, vs));
      out.push_back(cond("search_above_A_fail", vs, vA_fail));
      out.push_back(cond("prob_A_reduced_w_search",
                         a.muB * a.catB.p0 * (1.0 - a.catA.qH),
                         a.muA * (1.0 - a.catA.p0) * a.catA.qH));
      break;
    }
    case CaseId::P4: {
      const double vA = index_of(a, Category::A, 0, 0);
      const double vB = index_of(a, Category::B, 0, 0);
      const double vA_fail = index_of(a, Category::A, 0, 1);
      const double vB_fail = index_of(a, Category::B, 0, 1);
      const double vB_fail2 = index_of(a, Category::B, 0, 2);
      const double vs0 = search_index(b, b.tolerances).value;
      const double vsz = search_index(a, a.tolerances).value;
      out.push_back(cond("optimal_B_evaluated_before_A", vB, vA));
      out.push_back(cond("standard_A_above_search", vA, vs0));
      out.push_back(cond("standard_B_above_search", vB, vs0));
      out.push_back(cond("standard_search_above_A_fail", vs0, vA_fail));
      out.push_back(cond("standard_search_above_B_fail", vs0, vB_fail));
      out.push_back(cond("two_failures_A_above_search", vA, vsz));
      out.push_back(cond("two_failures_B_fail_above_search", vB_fail, vsz));
      out.push_back(cond("two_failures_search_above_A_fail", vsz, vA_fail));
      out.push_back(cond("two_failures_search_above_B_fail2", vsz, vB_fail2));
      const auto [lhs, rhs] = zeta_shift_inequality(b, c.zeta);
      out.push_back(cond("myopic_prob_A_smaller_with_zeta_increase", lhs, rhs));
      break;
    }
  }
  return out;
}

ScenarioPair shift_pair(const Scenario& base, ShiftKind shift, double zeta) {
  ScenarioPair p;
  p.before = base;
  p.after = base;
  if (shift == ShiftKind::Expansion) {
    p.before.muA = p.before.muB = 0.0;
  } else {
    p.after.muA = base.muA + zeta;
    p.after.muB = base.muB - zeta;
  }
  return p;
}

namespace {

// Smallest standing-assumption margin across both scenarios of a pair: how far
// each blank candidate's value sits above the value of search.
double assumption_margin(const Scenario& before, const Scenario& after) {
  double margin = std::numeric_limits<double>::infinity();
  for (const Scenario* s : {&before, &after}) {
    if (s->policy == PolicyKind::Myopic) {
      const MyopicValues m = myopic_values(*s);
      margin = std::min({margin, m.uA_blank - m.uS, m.uB_blank - m.uS});
    } else {
      const double vs = search_index(*s, s->tolerances).value;
      margin = std::min({margin,
                         gittins_index(s->catA, 0, 0, s->delta, s->tolerances).value - vs,
                         gittins_index(s->catB, 0, 0, s->delta, s->tolerances).value - vs});
    }
  }
  return margin;
}

}  // namespace

namespace {

SweepRow sweep_point(const SweepSpec& spec, long long point) {
  SweepRow row;
  Scenario base = spec.base;
  // Decode the grid index with the last axis varying fastest.
  row.coords.resize(spec.axes.size());
  long long rest = point;
  for (std::size_t k = spec.axes.size(); k-- > 0;) {
    const auto& values = spec.axes[k].values;
    row.coords[k] = values[rest % static_cast<long long>(values.size())];
    rest /= static_cast<long long>(values.size());
    set_scenario_field(base, spec.axes[k].key, row.coords[k]);
  }
  try {
    const ScenarioPair pair = shift_pair(base, spec.shift, spec.zeta);
    const CompareRecord rec = compare(pair.before, pair.after, base.tolerances);
    row.gammaA_before = 0.5 * (rec.before.pA_lo + rec.before.pA_hi);
    row.gammaA_after = 0.5 * (rec.after.pA_lo + rec.after.pA_hi);
    row.gammaB_before = 0.5 * (rec.before.pB_lo + rec.before.pB_hi);
    row.gammaB_after = 0.5 * (rec.after.pB_lo + rec.after.pB_hi);
    row.pNone_before = 0.5 * (rec.before.pNone_lo + rec.before.pNone_hi);
    row.pNone_after = 0.5 * (rec.after.pNone_lo + rec.after.pNone_hi);
    row.verdict = rec.verdict;
    row.min_assumption_margin = assumption_margin(pair.before, pair.after);
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

SweepResult sweep(const SweepSpec& spec) {
  SweepResult result;
  for (const auto& ax : spec.axes) result.axis_keys.push_back(ax.key);

  long long total = 1;
  for (const auto& ax : spec.axes) {
    if (ax.values.empty()) throw std::invalid_argument("sweep axis with no values");
    total *= static_cast<long long>(ax.values.size());
    if (total > spec.max_points)
      throw std::invalid_argument("sweep grid exceeds the configured cap");
  }

  // Points are independent; rows land in grid order no matter who ran them.
  result.rows.resize(total);
  const int workers = std::max(
      1, std::min<int>(8, static_cast<int>(std::thread::hardware_concurrency())));
  if (workers == 1 || total == 1) {
    for (long long point = 0; point < total; ++point)
      result.rows[point] = sweep_point(spec, point);
    return result;
  }
  std::atomic<long long> cursor{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const long long point = cursor.fetch_add(1);
        if (point >= total) return;
        result.rows[point] = sweep_point(spec, point);
      }
    });
  }
  for (auto& t : pool) t.join();
  return result;
}

}  // namespace recruit
