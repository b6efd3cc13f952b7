#pragma once

#include "recruit/types.hpp"

namespace recruit {

// Posterior Pr(qualified | n1 successes, n0 failures). Computed in log space so
// deep histories degrade to exact 0/1 instead of overflowing. Throws
// std::domain_error("impossible history") when the history has probability zero
// under both types.
double posterior(const CategoryParams& cat, int n1, int n0);

// Single-step Bayes update of a posterior. Same impossible-history contract.
double update_posterior(const CategoryParams& cat, double p, int signal);

// Predictive probability of the next signal given the candidate's history.
double signal_prob(const CategoryParams& cat, int n1, int n0, int signal);
double signal_prob_from(const CategoryParams& cat, double p, int signal);

bool is_acceptable(const CategoryParams& cat, int n1, int n0);
inline bool is_acceptable_posterior(const CategoryParams& cat, double p) {
  return p >= cat.Pbar;
}

// Probability that one more evaluation pushes the posterior over the threshold.
double one_step_hire_prob(const CategoryParams& cat, int n1, int n0);

// Blackwell comparison of the two signal technologies: A is the minority iff
// B's evaluation dominates (q_k^B >= q_k^A, k=H,L, one strict), and vice versa.
enum class MinorityAnswer { A, B, None };
MinorityAnswer minority_category(const Scenario& s);

struct Violation {
  std::string name;
  std::string detail;
  // Hard violations break type invariants; soft ones are standing assumptions
  // of the selected policy (the engine still follows the literal rule).
  bool hard = true;
};

std::vector<Violation> validate(const Scenario& s);
bool hard_valid(const std::vector<Violation>& violations);

}  // namespace recruit
