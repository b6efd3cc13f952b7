#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace recruit {

enum class Category { A, B };

inline char category_letter(Category c) { return c == Category::A ? 'A' : 'B'; }
inline Category other_category(Category c) {
  return c == Category::A ? Category::B : Category::A;
}

enum class PolicyKind { Myopic, OptimalIndex };

// Per-category primitives of the evaluation technology.
struct CategoryParams {
  Category label = Category::A;
  double p0 = 0.0;    // prior Pr(qualified)
  double v = 0.0;     // value of hiring a qualified candidate
  double qH = 0.0;    // Pr(s=1 | qualified)
  double qL = 0.0;    // Pr(s=0 | unqualified)
  double Pbar = 1.0;  // posterior threshold at which the candidate is hired

  friend bool operator==(const CategoryParams&, const CategoryParams&) = default;
};

// A pool member. Signals are conditionally iid, so the pair of counts is a
// sufficient statistic for any history; order never matters.
struct CandidateState {
  Category category = Category::A;
  int n1 = 0;  // count of s=1 signals
  int n0 = 0;  // count of s=0 signals
  bool retired = false;

  friend bool operator==(const CandidateState&, const CandidateState&) = default;
};

struct NumericalConfig {
  double index_tol = 1e-9;  // bisection / fixed-point tolerance
  int horizon_cap = 200;    // truncation depth for stopping DPs and exact evaluation
  double prob_tol = 1e-9;   // acceptable truncation mass in exact outcome intervals

  friend bool operator==(const NumericalConfig&, const NumericalConfig&) = default;
};

struct Scenario {
  double delta = 0.0;
  CategoryParams catA{Category::A};
  CategoryParams catB{Category::B};
  double muA = 0.0;  // per-search arrival probability of an A candidate
  double muB = 0.0;
  PolicyKind policy = PolicyKind::Myopic;
  // Empty means the default pool: one blank-slate candidate per category, A first.
  std::vector<CandidateState> initial_pool;
  NumericalConfig tolerances;

  const CategoryParams& params(Category c) const {
    return c == Category::A ? catA : catB;
  }
  std::vector<CandidateState> pool_or_default() const {
    if (!initial_pool.empty()) return initial_pool;
    return {CandidateState{Category::A, 0, 0, false},
            CandidateState{Category::B, 0, 0, false}};
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Raised when a truncated computation cannot certify the requested tolerance.
struct HorizonError : std::runtime_error {
  double achieved;
  HorizonError(const std::string& what, double achieved_bound)
      : std::runtime_error(what), achieved(achieved_bound) {}
};

}  // namespace recruit
