#include "stopping_dp.hpp"

#include <cassert>
#include <cmath>

#include "recruit/model.hpp"

namespace recruit::detail {

Lattice build_lattice(const CategoryParams& cat, int n1, int n0, double delta,
                      int depth_cap) {
  Lattice lat;
  lat.cat = cat;
  lat.delta = delta;

  const double root_post = posterior(cat, n1, n0);
  assert(!is_acceptable_posterior(cat, root_post));
  lat.nodes.push_back({n1, n0, root_post, 0, 0, -1, -1, -1.0, -1.0, false});

  // Breadth-first by depth; states at depth d are distinguished by their
  // success count alone.
  std::vector<int> level = {0};
  for (int d = 0; d < depth_cap && !level.empty(); ++d) {
    std::vector<int> next(d + 2, -1);  // success-count -> node id at depth d+1
    std::vector<int> next_level;
    for (int id : level) {
      // Copy fields up front: growing lat.nodes invalidates references.
      const double post = lat.nodes[id].post;
      const int a1 = lat.nodes[id].n1, a0 = lat.nodes[id].n0;
      const double ps1 = signal_prob_from(cat, post, 1);
      const double ps0 = 1.0 - ps1;
      lat.nodes[id].ps1 = ps1;
      lat.nodes[id].ps0 = ps0;
      for (int s : {1, 0}) {
        const double ps = s == 1 ? ps1 : ps0;
        if (ps <= 0.0) continue;
        const double child_post = update_posterior(cat, post, s);
        if (is_acceptable_posterior(cat, child_post)) {
          (s == 1 ? lat.nodes[id].hire1 : lat.nodes[id].hire0) = child_post;
          continue;
        }
        const int cn1 = a1 + (s == 1), cn0 = a0 + (s == 0);
        const int key = cn1 - n1;  // successes gained since the root
        int child = next[key];
        if (child < 0) {
          child = static_cast<int>(lat.nodes.size());
          lat.nodes.push_back({cn1, cn0, child_post, 0, 0, -1, -1, -1.0, -1.0, false});
          next[key] = child;
          next_level.push_back(child);
        }
        (s == 1 ? lat.nodes[id].succ1 : lat.nodes[id].succ0) = child;
      }
    }
    level = std::move(next_level);
  }
  for (int id : level) lat.nodes[id].frontier = true;
  return lat;
}

double stopping_value(const Lattice& lat, double m, bool optimistic,
                      std::vector<double>* values) {
  const double v = lat.cat.v;
  const double delta = lat.delta;
  const int n = static_cast<int>(lat.nodes.size());
  std::vector<double> local;
  std::vector<double>& cont = values ? *values : local;
  cont.assign(n, 0.0);

  for (int i = n - 1; i >= 0; --i) {
    const Lattice::Node& nd = lat.nodes[i];
    if (nd.frontier) {
      // Unknown continuation, bracketed by retiring now and by collecting the
      // full candidate value immediately.
      cont[i] = optimistic ? std::max(m, v) : m;
      continue;
    }
    double c = 0.0;
    if (nd.ps1 > 0.0)
      c += nd.ps1 * (nd.hire1 >= 0.0 ? nd.hire1 * v
                                     : delta * std::max(m, cont[nd.succ1]));
    if (nd.ps0 > 0.0)
      c += nd.ps0 * (nd.hire0 >= 0.0 ? nd.hire0 * v
                                     : delta * std::max(m, cont[nd.succ0]));
    cont[i] = c;
  }
  return cont[0];
}

namespace {

double bisect_root(const Lattice& lat, bool optimistic, double tol) {
  const double v = lat.cat.v;
  // Continue-values are sums of acceptance payoffs; exactly zero means no
  // acceptable state is reachable and the index is exactly zero.
  const double c0 = stopping_value(lat, 0.0, optimistic);
  if (c0 <= 0.0) return 0.0;
  double lo = 0.0, hi = v;
  if (stopping_value(lat, hi, optimistic) - hi >= 0.0) return hi;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (stopping_value(lat, mid, optimistic) - mid > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Calibration calibrate(const Lattice& lat, double tol) {
  // A zero posterior is absorbing under Bayes updates, so acceptance is
  // unreachable and the index is exactly zero; the truncated DP alone would
  // report only a [0, delta^cap * v] bracket.
  if (lat.nodes[0].post == 0.0) return {0.0, 0.0};
  return {bisect_root(lat, false, tol), bisect_root(lat, true, tol)};
}

std::vector<unsigned char> continue_flags_index(const Lattice& lat, double m_lo,
                                                double m_hi) {
  std::vector<double> c_lo, c_hi;
  stopping_value(lat, m_hi, false, &c_lo);
  stopping_value(lat, m_lo, true, &c_hi);
  std::vector<unsigned char> flags(lat.nodes.size(), kAmbiguous);
  for (std::size_t i = 0; i < lat.nodes.size(); ++i) {
    if (c_lo[i] > m_hi)
      flags[i] = kContinue;  // index certainly above the retirement value
    else if (c_hi[i] <= m_lo)
      flags[i] = kStop;
  }
  return flags;
}

std::vector<unsigned char> continue_flags_myopic(const Lattice& lat,
                                                 double benchmark) {
  std::vector<unsigned char> flags(lat.nodes.size(), kStop);
  for (std::size_t i = 0; i < lat.nodes.size(); ++i) {
    const Lattice::Node& nd = lat.nodes[i];
    double lambda = 0.0;
    if (nd.hire1 >= 0.0) lambda += nd.ps1;
    if (nd.hire0 >= 0.0) lambda += nd.ps0;
    if (lambda * lat.cat.v > benchmark) flags[i] = kContinue;
  }
  return flags;
}

BlockStats block_absorption(const Lattice& lat,
                            const std::vector<unsigned char>& flags) {
  BlockStats out;
  std::vector<double> mass(lat.nodes.size(), 0.0);
  mass[0] = 1.0;
  for (std::size_t i = 0; i < lat.nodes.size(); ++i) {
    const double w = mass[i];
    if (w <= 0.0) continue;
    const Lattice::Node& nd = lat.nodes[i];
    if (flags[i] == kStop) {
      out.retire += w;
      continue;
    }
    if (flags[i] == kAmbiguous || nd.frontier) {
      out.unresolved += w;
      continue;
    }
    if (nd.ps1 > 0.0) {
      if (nd.hire1 >= 0.0)
        out.hire += w * nd.ps1;
      else
        mass[nd.succ1] += w * nd.ps1;
    }
    if (nd.ps0 > 0.0) {
      if (nd.hire0 >= 0.0)
        out.hire += w * nd.ps0;
      else
        mass[nd.succ0] += w * nd.ps0;
    }
  }
  return out;
}

BlockFunctionals block_functionals(const Lattice& lat,
                                   const std::vector<unsigned char>& flags) {
  BlockFunctionals out;
  const double delta = lat.delta;
  // weight = sum over paths of P(path) * delta^(evaluations so far)
  std::vector<double> weight(lat.nodes.size(), 0.0), mass(lat.nodes.size(), 0.0);
  weight[0] = 1.0;
  mass[0] = 1.0;
  for (std::size_t i = 0; i < lat.nodes.size(); ++i) {
    if (mass[i] <= 0.0) continue;
    const Lattice::Node& nd = lat.nodes[i];
    if (flags[i] == kStop) {
      out.retire_disc += weight[i];
      continue;
    }
    if (flags[i] == kAmbiguous || nd.frontier) {
      out.unresolved += mass[i];
      continue;
    }
    if (nd.ps1 > 0.0) {
      if (nd.hire1 >= 0.0) {
        out.payoff += weight[i] * nd.ps1 * nd.hire1 * lat.cat.v;
      } else {
        weight[nd.succ1] += weight[i] * nd.ps1 * delta;
        mass[nd.succ1] += mass[i] * nd.ps1;
      }
    }
    if (nd.ps0 > 0.0) {
      if (nd.hire0 >= 0.0) {
        out.payoff += weight[i] * nd.ps0 * nd.hire0 * lat.cat.v;
      } else {
        weight[nd.succ0] += weight[i] * nd.ps0 * delta;
        mass[nd.succ0] += mass[i] * nd.ps0;
      }
    }
  }
  return out;
}

}  // namespace recruit::detail
