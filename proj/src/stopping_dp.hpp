#pragma once

#include <vector>

#include "recruit/types.hpp"

namespace recruit::detail {

// Truncated single-candidate evaluation lattice rooted at a non-acceptable
// state. Edges branch on the next signal; a branch that crosses the acceptance
// threshold terminates with the hire posterior recorded instead of a successor.
// Zero-probability branches are dropped, so for qL = 1 the lattice collapses to
// the all-fail spine.
struct Lattice {
  struct Node {
    int n1 = 0, n0 = 0;
    double post = 0.0;
    double ps1 = 0.0, ps0 = 0.0;        // predictive signal probabilities
    int succ1 = -1, succ0 = -1;         // non-acceptable successors
    double hire1 = -1.0, hire0 = -1.0;  // posterior after an accepting signal
    bool frontier = false;              // truncated at the depth cap
  };
  std::vector<Node> nodes;  // depth-increasing; nodes[0] is the root
  CategoryParams cat;
  double delta = 0.0;
};

Lattice build_lattice(const CategoryParams& cat, int n1, int n0, double delta,
                      int depth_cap);

// Continue-value of the root under retirement lump m: evaluate once, then keep
// the better of retiring (m) and continuing. Frontier states carry the
// retirement floor m (optimistic = false) or the payoff ceiling v (true),
// bracketing the untruncated value. `values` receives the continue-value of
// every node when non-null.
double stopping_value(const Lattice& lat, double m, bool optimistic,
                      std::vector<double>* values = nullptr);

// Bisected fixed points of m = continue-value(m) under both frontier
// treatments; lo <= exact index <= hi. Zero is detected exactly (a state from
// which acceptance is unreachable has index 0, not bisection noise).
struct Calibration {
  double lo = 0.0, hi = 0.0;
};
Calibration calibrate(const Lattice& lat, double tol);

// Per-node action classification at retirement value m, robust to the bracket:
// kContinue / kStop are certified, kAmbiguous means the truncation bracket
// straddles m.
enum : unsigned char { kStop = 0, kContinue = 1, kAmbiguous = 2 };
std::vector<unsigned char> continue_flags_index(const Lattice& lat, double m_lo,
                                                double m_hi);
// Myopic counterpart: continue while the one-step value v * lambda exceeds the
// benchmark strictly.
std::vector<unsigned char> continue_flags_myopic(const Lattice& lat,
                                                 double benchmark);

// Undiscounted absorption split of a single-candidate evaluation block run
// under the given per-node flags: ends in hire, in retirement, or is still
// unresolved at the truncation frontier (or on an ambiguous node).
struct BlockStats {
  double hire = 0.0, retire = 0.0, unresolved = 0.0;
};
BlockStats block_absorption(const Lattice& lat,
                            const std::vector<unsigned char>& flags);

// Discounted block functionals for the same stopping rule: expected discounted
// hire payoff sum E[delta^k p_hire v] and expected discount at retirement
// E[delta^tau]. Used by tests to evaluate the search-index objective directly.
struct BlockFunctionals {
  double payoff = 0.0;        // E[ delta^k * p(hire state) * v ]
  double retire_disc = 0.0;   // E[ delta^tau ; block retires ]
  double unresolved = 0.0;    // mass cut at the frontier / ambiguous nodes
};
BlockFunctionals block_functionals(const Lattice& lat,
                                   const std::vector<unsigned char>& flags);

}  // namespace recruit::detail
