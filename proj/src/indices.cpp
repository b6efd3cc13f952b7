#include "recruit/indices.hpp"

#include <algorithm>
#include <cmath>

#include "recruit/model.hpp"
#include "stopping_dp.hpp"

namespace recruit {

double myopic_value(const CategoryParams& cat, int n1, int n0) {
  if (is_acceptable(cat, n1, n0))
    throw std::invalid_argument("myopic_value: candidate already acceptable");
  return cat.v * one_step_hire_prob(cat, n1, n0);
}

double myopic_search_value(const Scenario& s) {
  if (s.muA + s.muB <= 0.0) return 0.0;
  return s.delta * (s.muA * myopic_value(s.catA, 0, 0) +
                    s.muB * myopic_value(s.catB, 0, 0));
}

MyopicValues myopic_values(const Scenario& s) {
  MyopicValues m;
  m.uA_blank = myopic_value(s.catA, 0, 0);
  m.uB_blank = myopic_value(s.catB, 0, 0);
  m.uS = s.delta * (s.muA * m.uA_blank + s.muB * m.uB_blank);
  return m;
}

namespace {

void fill_profile(const detail::Lattice& lat, double m,
                  std::map<ProfileKey, bool>& profile) {
  std::vector<double> cont;
  detail::stopping_value(lat, m, false, &cont);
  const Category label = lat.cat.label;
  for (std::size_t i = 0; i < lat.nodes.size(); ++i) {
    const auto& nd = lat.nodes[i];
    profile[{label, nd.n1, nd.n0}] = cont[i] > m;
    // Acceptable successors are absorbing: the arm is pulled forever.
    if (nd.hire1 >= 0.0) profile[{label, nd.n1 + 1, nd.n0}] = true;
    if (nd.hire0 >= 0.0) profile[{label, nd.n1, nd.n0 + 1}] = true;
  }
}

}  // namespace

IndexResult gittins_index(const CategoryParams& cat, int n1, int n0,
                          double delta, const NumericalConfig& cfg) {
  IndexResult res;
  const double p = posterior(cat, n1, n0);
  if (is_acceptable_posterior(cat, p)) {
    // Absorbing constant-flow arm.
    res.value = p * cat.v;
    res.achieved_tol = 0.0;
    res.stopping_profile[{cat.label, n1, n0}] = true;
    return res;
  }
  const detail::Lattice lat =
      detail::build_lattice(cat, n1, n0, delta, cfg.horizon_cap);
  const detail::Calibration cal = detail::calibrate(lat, cfg.index_tol);
  const double spread = cal.hi - cal.lo;
  if (0.5 * spread > cfg.index_tol)
    throw HorizonError("horizon insufficient: index bracket wider than index_tol",
                       0.5 * spread);
  res.value = 0.5 * (cal.lo + cal.hi);
  res.achieved_tol = 0.5 * spread + cfg.index_tol;
  fill_profile(lat, res.value, res.stopping_profile);
  return res;
}

double gittins_closed_form_qL1(const CategoryParams& cat, int n0, double delta) {
  if (cat.qL != 1.0)
    throw std::domain_error("oracle inapplicable: requires qL = 1");
  const double lambda = posterior(cat, 0, n0) * cat.qH;
  if (lambda <= 0.0) return 0.0;
  return lambda * cat.v / (1.0 - delta * (1.0 - lambda));
}

namespace {

// delta * (muA R_A(M) + muB R_B(M) + (1 - muA - muB) M) - M, where R_j is the
// value of a fresh arrival with the option to retire to M.
double search_excess(const Scenario& s, const detail::Lattice& latA,
                     const detail::Lattice& latB, double m, bool optimistic) {
  const double rA = std::max(m, detail::stopping_value(latA, m, optimistic));
  const double rB = std::max(m, detail::stopping_value(latB, m, optimistic));
  return s.delta *
             (s.muA * rA + s.muB * rB + (1.0 - s.muA - s.muB) * m) -
         m;
}

double bisect_search(const Scenario& s, const detail::Lattice& latA,
                     const detail::Lattice& latB, bool optimistic, double tol) {
  double lo = 0.0, hi = std::max(s.catA.v, s.catB.v);
  if (search_excess(s, latA, latB, lo, optimistic) <= 0.0) return 0.0;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (search_excess(s, latA, latB, mid, optimistic) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

IndexResult search_index(const Scenario& s, const NumericalConfig& cfg) {
  IndexResult res;
  if (s.muA + s.muB <= 0.0) return res;
  const detail::Lattice latA =
      detail::build_lattice(s.catA, 0, 0, s.delta, cfg.horizon_cap);
  const detail::Lattice latB =
      detail::build_lattice(s.catB, 0, 0, s.delta, cfg.horizon_cap);
  const double lo = bisect_search(s, latA, latB, false, cfg.index_tol);
  const double hi = bisect_search(s, latA, latB, true, cfg.index_tol);
  if (0.5 * (hi - lo) > cfg.index_tol)
    throw HorizonError("horizon insufficient: search index bracket wider than index_tol",
                       0.5 * (hi - lo));
  res.value = 0.5 * (lo + hi);
  res.achieved_tol = 0.5 * (hi - lo) + cfg.index_tol;
  fill_profile(latA, res.value, res.stopping_profile);
  fill_profile(latB, res.value, res.stopping_profile);
  return res;
}

namespace {

struct QL1Quantities {
  double lam_blank, lam_fail;           // lambda(empty), lambda(0)
  double v_blank, v_fail, v_fail2;      // V(empty), V(0), V(0,0)
};

QL1Quantities ql1_quantities(const CategoryParams& cat, double delta) {
  auto index_of = [&](double lambda) {
    return lambda <= 0.0 ? 0.0
                         : lambda * cat.v / (1.0 - delta * (1.0 - lambda));
  };
  QL1Quantities q;
  q.lam_blank = cat.p0 * cat.qH;
  q.lam_fail = posterior(cat, 0, 1) * cat.qH;
  q.v_blank = index_of(q.lam_blank);
  q.v_fail = index_of(q.lam_fail);
  q.v_fail2 = index_of(posterior(cat, 0, 2) * cat.qH);
  return q;
}

}  // namespace

double search_index_closed_form_qL1(const Scenario& s) {
  if (s.catA.qL != 1.0 || s.catB.qL != 1.0)
    throw std::domain_error("oracle inapplicable: requires qL = 1 for both categories");
  if (s.muA + s.muB <= 0.0) return 0.0;

  const double d = s.delta;
  const QL1Quantities a = ql1_quantities(s.catA, d);
  const QL1Quantities b = ql1_quantities(s.catB, d);
  const double mu_none = 1.0 - s.muA - s.muB;

  // Both categories retired at the first failure.
  {
    const double num = d * (s.muA * a.lam_blank * s.catA.v +
                            s.muB * b.lam_blank * s.catB.v);
    const double den = 1.0 - mu_none * d -
                       d * d * (s.muA * (1.0 - a.lam_blank) +
                                s.muB * (1.0 - b.lam_blank));
    const double vs = num / den;
    if (a.v_blank > vs && b.v_blank > vs && a.v_fail <= vs && b.v_fail <= vs)
      return vs;
  }
  // A retired after one failure, B after two.
  {
    const double num =
        d * s.muA * a.lam_blank * s.catA.v +
        d * s.muB * s.catB.v *
            (b.lam_blank + d * (1.0 - b.lam_blank) * b.lam_fail);
    const double den = 1.0 - mu_none * d -
                       d * d * (s.muA * (1.0 - a.lam_blank) +
                                s.muB * (1.0 - b.lam_blank) *
                                    (1.0 - b.lam_fail) * d);
    const double vs = num / den;
    if (a.v_blank > vs && b.v_blank > vs && b.v_fail > vs && a.v_fail <= vs &&
        b.v_fail2 <= vs)
      return vs;
  }
  throw std::domain_error(
      "oracle inapplicable: retirement structure outside the closed forms");
}

}  // namespace recruit
