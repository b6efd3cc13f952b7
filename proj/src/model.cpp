#include "recruit/model.hpp"

#include <cmath>

#include "recruit/indices.hpp"

namespace recruit {

namespace {

// log(p0 * qH^n1 * (1-qH)^n0) with 0^0 treated as 1.
double log_weight(double base, double p1, double p0m, int n1, int n0) {
  double lw = std::log(base);
  if (n1 > 0) lw += n1 * std::log(p1);
  if (n0 > 0) lw += n0 * std::log(p0m);
  return lw;
}

}  // namespace

double posterior(const CategoryParams& cat, int n1, int n0) {
  const double lwH = log_weight(cat.p0, cat.qH, 1.0 - cat.qH, n1, n0);
  const double lwL = log_weight(1.0 - cat.p0, 1.0 - cat.qL, cat.qL, n1, n0);
  const bool hDead = std::isinf(lwH) && lwH < 0;
  const bool lDead = std::isinf(lwL) && lwL < 0;
  if (hDead && lDead) throw std::domain_error("impossible history");
  if (hDead) return 0.0;
  if (lDead) return 1.0;
  return 1.0 / (1.0 + std::exp(lwL - lwH));
}

double update_posterior(const CategoryParams& cat, double p, int signal) {
  const double wH = p * (signal == 1 ? cat.qH : 1.0 - cat.qH);
  const double wL = (1.0 - p) * (signal == 1 ? 1.0 - cat.qL : cat.qL);
  const double den = wH + wL;
  if (den <= 0.0) throw std::domain_error("impossible history");
  return wH / den;
}

double signal_prob_from(const CategoryParams& cat, double p, int signal) {
  const double p1 = p * cat.qH + (1.0 - p) * (1.0 - cat.qL);
  return signal == 1 ? p1 : 1.0 - p1;
}

double signal_prob(const CategoryParams& cat, int n1, int n0, int signal) {
  return signal_prob_from(cat, posterior(cat, n1, n0), signal);
}

bool is_acceptable(const CategoryParams& cat, int n1, int n0) {
  return is_acceptable_posterior(cat, posterior(cat, n1, n0));
}

double one_step_hire_prob(const CategoryParams& cat, int n1, int n0) {
  const double p = posterior(cat, n1, n0);
  double lambda = 0.0;
  for (int s : {1, 0}) {
    const double ps = signal_prob_from(cat, p, s);
    if (ps <= 0.0) continue;
    if (is_acceptable_posterior(cat, update_posterior(cat, p, s))) lambda += ps;
  }
  return lambda;
}

MinorityAnswer minority_category(const Scenario& s) {
  const auto& a = s.catA;
  const auto& b = s.catB;
  const bool bDominates =
      b.qH >= a.qH && b.qL >= a.qL && (b.qH > a.qH || b.qL > a.qL);
  const bool aDominates =
      a.qH >= b.qH && a.qL >= b.qL && (a.qH > b.qH || a.qL > b.qL);
  if (bDominates) return MinorityAnswer::A;
  if (aDominates) return MinorityAnswer::B;
  return MinorityAnswer::None;
}

namespace {

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

void check_category(const CategoryParams& cat, std::vector<Violation>& out) {
  const std::string tag(1, category_letter(cat.label));
  if (!(cat.p0 > 0.0 && cat.p0 < 1.0))
    out.push_back({"prior out of range", tag + ".p0 must lie in (0,1)", true});
  if (!(cat.v > 0.0))
    out.push_back({"value not positive", tag + ".v must be > 0", true});
  if (!in_unit(cat.qH))
    out.push_back({"qH out of range", tag + ".qH must lie in [0,1]", true});
  if (!in_unit(cat.qL))
    out.push_back({"qL out of range", tag + ".qL must lie in [0,1]", true});
  if (cat.qH < 1.0 - cat.qL)
    out.push_back(
        {"signal not informative", tag + ": qH >= 1 - qL is required", true});
  if (!(cat.Pbar > 0.0 && cat.Pbar <= 1.0))
    out.push_back({"threshold out of range", tag + ".Pbar must lie in (0,1]", true});
  if (!(cat.p0 < cat.Pbar))
    out.push_back({"prior not below threshold",
                   tag + ": p0 < Pbar is required (every candidate must be "
                         "evaluated at least once)",
                   true});
}

}  // namespace

std::vector<Violation> validate(const Scenario& s) {
  std::vector<Violation> out;
  check_category(s.catA, out);
  check_category(s.catB, out);
  if (s.catA.label != Category::A || s.catB.label != Category::B)
    out.push_back({"category labels inconsistent",
                   "catA must be labeled A and catB labeled B", true});
  if (!(s.delta > 0.0 && s.delta < 1.0))
    out.push_back({"discount out of range", "delta must lie in (0,1)", true});
  if (s.muA < 0.0 || s.muB < 0.0)
    out.push_back({"search probability negative", "muA, muB must be >= 0", true});
  if (s.muA + s.muB > 1.0)
    out.push_back({"search probabilities exceed 1", "muA + muB must be <= 1", true});
  if (!(s.tolerances.index_tol > 0.0))
    out.push_back({"index_tol not positive", "tolerances.index_tol must be > 0", true});
  if (!(s.tolerances.prob_tol > 0.0))
    out.push_back({"prob_tol not positive", "tolerances.prob_tol must be > 0", true});
  if (s.tolerances.horizon_cap < 1)
    out.push_back({"horizon_cap too small", "tolerances.horizon_cap must be >= 1", true});
  for (const auto& c : s.initial_pool) {
    if (c.n1 < 0 || c.n0 < 0) {
      out.push_back({"negative signal count", "initial pool counts must be >= 0", true});
      continue;
    }
  }
  if (!hard_valid(out)) return out;

  for (const auto& c : s.pool_or_default()) {
    if (is_acceptable(s.params(c.category), c.n1, c.n0))
      out.push_back({"initial candidate already acceptable",
                     "the process would terminate before the first period", true});
  }
  if (!hard_valid(out)) return out;

  // Standing assumptions of the selected rule. These gate the propositions'
  // clean block structure, not the engine itself, so they are soft.
  if (s.policy == PolicyKind::Myopic) {
    const MyopicValues m = myopic_values(s);
    if (!(m.uA_blank > m.uS))
      out.push_back({"blank myopic value not above search",
                     "u^A(empty) > u^S is assumed for the myopic rule", false});
    if (!(m.uB_blank > m.uS))
      out.push_back({"blank myopic value not above search",
                     "u^B(empty) > u^S is assumed for the myopic rule", false});
  } else {
    const double vs = search_index(s, s.tolerances).value;
    for (Category c : {Category::A, Category::B}) {
      const double vi =
          gittins_index(s.params(c), 0, 0, s.delta, s.tolerances).value;
      if (!(vi > vs))
        out.push_back({"blank index not above search index",
                       std::string("V^") + category_letter(c) +
                           "(empty) > V^S is assumed for the index rule",
                       false});
    }
  }
  return out;
}

bool hard_valid(const std::vector<Violation>& violations) {
  for (const auto& v : violations)
    if (v.hard) return false;
  return true;
}

}  // namespace recruit
