#pragma once

#include "recruit/evaluator.hpp"
#include "recruit/types.hpp"

namespace recruit {

enum class CaseId { P1, P2, P3, P4 };

// A worked counterexample: a scenario pair (before/after the pool-composition
// shift) together with the inequality conditions that pin down how play
// unfolds at those parameters. The shift is expected to lower the probability
// that an A candidate is hired.
struct PropositionCase {
  CaseId id{};
  std::string name;
  std::string mechanism;
  Scenario before;
  Scenario after;
  double zeta = 0.0;  // reallocation size; 0 when the shift is pool expansion
  Verdict expected_direction = Verdict::Backfires;
};

std::vector<PropositionCase> builtin_cases();
const PropositionCase& builtin_case(CaseId id);

struct ConditionCheck {
  std::string name;
  double lhs = 0.0, rhs = 0.0;
  double margin = 0.0;  // lhs - rhs
  bool holds = false;   // lhs > rhs
};

// Evaluates both sides of every condition attached to the case numerically.
std::vector<ConditionCheck> check_conditions(const PropositionCase& c);

struct SweepAxis {
  std::string key;  // scenario field path, e.g. "A.qH"
  std::vector<double> values;
};

enum class ShiftKind { Expansion, Reallocation };

struct SweepSpec {
  // Scenario template. Its (muA, muB) are the post-expansion probabilities
  // under Expansion (the before side gets mu = 0) and the pre-shift
  // probabilities under Reallocation (the after side gets muA+zeta, muB-zeta).
  Scenario base;
  ShiftKind shift = ShiftKind::Expansion;
  double zeta = 0.0;  // used by Reallocation
  std::vector<SweepAxis> axes;
  int max_points = 10000;
};

struct SweepRow {
  std::vector<double> coords;
  std::string error;  // nonempty when the point could not be evaluated
  double gammaA_before = 0.0, gammaA_after = 0.0;
  double gammaB_before = 0.0, gammaB_after = 0.0;
  double pNone_before = 0.0, pNone_after = 0.0;
  Verdict verdict = Verdict::Indeterminate;
  double min_assumption_margin = 0.0;
};

struct SweepResult {
  std::vector<std::string> axis_keys;
  std::vector<SweepRow> rows;
};

// One row per grid point, in grid order. Rows that fail hard validation or
// exceed the evaluator's certification carry an error tag instead of aborting
// the sweep. Throws when the grid exceeds max_points.
SweepResult sweep(const SweepSpec& spec);

struct ScenarioPair {
  Scenario before, after;
};
ScenarioPair shift_pair(const Scenario& base, ShiftKind shift, double zeta);

}  // namespace recruit
