#pragma once

#include <compare>
#include <map>

#include "recruit/types.hpp"

namespace recruit {

// One-step values of section-3 style play: u^j(sigma) = lambda^j(sigma) v^j and
// the stationary search value u^S = delta (muA u^A(empty) + muB u^B(empty)).
struct MyopicValues {
  double uA_blank = 0.0;
  double uB_blank = 0.0;
  double uS = 0.0;
};

// Throws std::invalid_argument if the candidate is already acceptable (the
// process would have ended before this value is ever consulted).
double myopic_value(const CategoryParams& cat, int n1, int n0);
double myopic_search_value(const Scenario& s);
MyopicValues myopic_values(const Scenario& s);

struct ProfileKey {
  Category cat;
  int n1 = 0;
  int n0 = 0;
  auto operator<=>(const ProfileKey&) const = default;
};

struct IndexResult {
  double value = 0.0;
  double achieved_tol = 0.0;
  // true = keep evaluating at that state; acceptable states are absorbing and
  // marked true. Keys cover the reachable truncated lattice.
  std::map<ProfileKey, bool> stopping_profile;
};

// Candidate index: the retirement-calibrated optimal-stopping value of
// evaluating this candidate in isolation, in total discounted units. An
// acceptable state is a constant-flow arm with index posterior * v. Computed by
// bisection on the retirement value over a depth-capped stopping DP, with the
// truncated tail bracketed from both sides; throws HorizonError when the
// bracket exceeds index_tol.
IndexResult gittins_index(const CategoryParams& cat, int n1, int n0,
                          double delta, const NumericalConfig& cfg);

// Closed form for the no-news-is-bad-news technology (qL = 1), where the first
// success is immediately accepted: V(n0) = lambda v / (1 - delta (1 - lambda))
// with lambda = posterior(0, n0) * qH. Independent oracle for gittins_index.
// Throws std::domain_error("oracle inapplicable") when qL != 1.
double gittins_closed_form_qL1(const CategoryParams& cat, int n0, double delta);

// Index of the search action: fixed point of the one-cycle calibration
//   M = delta (muA R_A(M) + muB R_B(M) + (1 - muA - muB) M)
// where R_j(M) is the value of evaluating a fresh category-j candidate with
// retirement lump M, i.e. the arrival is evaluated until its candidate index
// drops weakly below M. Zero when muA + muB = 0.
IndexResult search_index(const Scenario& s, const NumericalConfig& cfg);

// Appendix-style closed forms for qL = 1 technologies, covering the two
// retirement structures used by the proofs: every arrival retired after one
// failure, or A after one and B after two. Verifies the applicability
// conditions numerically and throws std::domain_error("oracle inapplicable")
// when neither structure is self-consistent.
double search_index_closed_form_qL1(const Scenario& s);

}  // namespace recruit
