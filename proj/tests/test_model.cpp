#include <doctest.h>

#include <cmath>

#include "recruit/experiments.hpp"
#include "recruit/model.hpp"
#include "recruit/rng.hpp"

using namespace recruit;

namespace {

CategoryParams cat(double p0, double v, double qH, double qL, double Pbar,
                   Category label = Category::A) {
  CategoryParams c;
  c.label = label;
  c.p0 = p0;
  c.v = v;
  c.qH = qH;
  c.qL = qL;
  c.Pbar = Pbar;
  return c;
}

// Random technology with qH >= 1 - qL and a reachable prior.
CategoryParams random_cat(SplitMix64& rng, Category label) {
  for (;;) {
    const double qH = rng.next_double();
    const double qL = rng.next_double();
    if (qH < 1.0 - qL) continue;
    const double p0 = 0.05 + 0.9 * rng.next_double();
    const double Pbar = p0 + (1.0 - p0) * (0.1 + 0.9 * rng.next_double());
    return cat(p0, 0.5 + rng.next_double(), qH, qL, Pbar, label);
  }
}

}  // namespace

TEST_CASE("posterior matches hand Bayes on the no-news technology") {
  const CategoryParams a = cat(0.8, 1.5, 0.6, 1.0, 0.9);
  CHECK(posterior(a, 0, 0) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(posterior(a, 0, 1) == doctest::Approx(0.32 / 0.52).epsilon(1e-12));
  CHECK(posterior(a, 1, 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("posterior rejects zero-probability histories") {
  const CategoryParams b = cat(0.7, 1.0, 1.0, 1.0, 0.95);
  CHECK_THROWS_AS(posterior(b, 1, 1), std::domain_error);
  // One-sided zero weights are fine: the surviving type pins the answer.
  CHECK(posterior(b, 0, 3) == 0.0);
  CHECK(posterior(b, 2, 0) == 1.0);
}

TEST_CASE("signal_prob examples and total probability") {
  CHECK(signal_prob(cat(0.8, 1.5, 0.6, 1.0, 0.9), 0, 0, 1) ==
        doctest::Approx(0.48).epsilon(1e-14));
  CHECK(signal_prob(cat(0.7, 1.0, 1.0, 1.0, 0.95), 0, 0, 1) ==
        doctest::Approx(0.7).epsilon(1e-14));

  SplitMix64 rng(2024);
  for (int i = 0; i < 200; ++i) {
    const CategoryParams c = random_cat(rng, Category::A);
    const int n1 = static_cast<int>(rng.next_u64() % 5);
    const int n0 = static_cast<int>(rng.next_u64() % 5);
    CHECK(signal_prob(c, n1, n0, 0) + signal_prob(c, n1, n0, 1) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("is_acceptable on threshold examples") {
  const CategoryParams a = cat(0.8, 1.5, 0.6, 1.0, 0.9);
  CHECK_FALSE(is_acceptable(a, 0, 0));  // p0 < Pbar by construction
  CHECK(is_acceptable(a, 1, 0));
  CHECK_FALSE(is_acceptable(a, 0, 5));
}

TEST_CASE("exchangeability: posterior depends on counts only") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 12; ++trial) {
    const CategoryParams c = trial < 6
                                 ? random_cat(rng, Category::A)
                                 : cat(0.8, 1.5, 0.6, 1.0, 0.9);
    // Lattice commutation: both signal orders into (n1+1, n0+1) agree, which
    // gives equality over all permutations by induction.
    for (int n1 = 0; n1 + 1 <= 12; ++n1) {
      for (int n0 = 0; n1 + n0 + 2 <= 12; ++n0) {
        double via_10, via_01;
        try {
          via_10 = update_posterior(c, posterior(c, n1 + 1, n0), 0);
          via_01 = update_posterior(c, posterior(c, n1, n0 + 1), 1);
        } catch (const std::domain_error&) {
          continue;
        }
        CHECK(via_10 == doctest::Approx(via_01).epsilon(1e-12));
        CHECK(via_10 ==
              doctest::Approx(posterior(c, n1 + 1, n0 + 1)).epsilon(1e-12));
      }
    }
    // And a few explicit permutation replays.
    for (int rep = 0; rep < 5; ++rep) {
      const int n1 = static_cast<int>(rng.next_u64() % 6);
      const int n0 = static_cast<int>(rng.next_u64() % (13 - n1));
      std::vector<int> sig(n1, 1);
      sig.insert(sig.end(), n0, 0);
      for (std::size_t i = sig.size(); i > 1; --i)
        std::swap(sig[i - 1], sig[rng.next_u64() % i]);
      double p = c.p0;
      bool dead = false;
      for (int s : sig) {
        if (signal_prob_from(c, p, s) <= 0.0) {
          dead = true;
          break;
        }
        p = update_posterior(c, p, s);
      }
      if (dead) continue;
      CHECK(p == doctest::Approx(posterior(c, n1, n0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("posterior is a martingale under the predictive distribution") {
  SplitMix64 rng(91);
  for (int trial = 0; trial < 40; ++trial) {
    const CategoryParams c = random_cat(rng, Category::A);
    const int n1 = static_cast<int>(rng.next_u64() % 6);
    const int n0 = static_cast<int>(rng.next_u64() % 6);
    double p;
    try {
      p = posterior(c, n1, n0);
    } catch (const std::domain_error&) {
      continue;
    }
    double expectation = 0.0;
    for (int s : {0, 1}) {
      const double ps = signal_prob_from(c, p, s);
      if (ps <= 0.0) continue;
      expectation += ps * update_posterior(c, p, s);
    }
    CHECK(expectation == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("posterior monotone in the signal counts") {
  SplitMix64 rng(123);
  for (int trial = 0; trial < 40; ++trial) {
    const CategoryParams c = random_cat(rng, Category::A);
    for (int n1 = 0; n1 < 5; ++n1) {
      for (int n0 = 0; n0 < 5; ++n0) {
        double p, up, down;
        try {
          p = posterior(c, n1, n0);
          up = posterior(c, n1 + 1, n0);
          down = posterior(c, n1, n0 + 1);
        } catch (const std::domain_error&) {
          continue;
        }
        CHECK(up >= p - 1e-12);
        CHECK(down <= p + 1e-12);
      }
    }
  }
}

TEST_CASE("minority_category: Blackwell dominance of B's technology") {
  Scenario s = builtin_case(CaseId::P1).after;
  CHECK(minority_category(s) == MinorityAnswer::A);

  s.catA.qH = 0.4;
  s.catA.qL = 1.0;
  s.catB.qH = 0.8;
  s.catB.qL = 1.0;
  CHECK(minority_category(s) == MinorityAnswer::A);

  s.catA.qH = s.catB.qH = 0.7;
  s.catA.qL = s.catB.qL = 0.9;
  CHECK(minority_category(s) == MinorityAnswer::None);
}

TEST_CASE("minority_category is antisymmetric under label swap") {
  SplitMix64 rng(5150);
  Scenario s = builtin_case(CaseId::P1).after;
  for (int trial = 0; trial < 100; ++trial) {
    s.catA.qH = rng.next_double();
    s.catA.qL = rng.next_double();
    s.catB.qH = rng.next_double();
    s.catB.qL = rng.next_double();
    Scenario swapped = s;
    std::swap(swapped.catA.qH, swapped.catB.qH);
    std::swap(swapped.catA.qL, swapped.catB.qL);
    const MinorityAnswer m = minority_category(s);
    const MinorityAnswer w = minority_category(swapped);
    if (m == MinorityAnswer::None)
      CHECK(w == MinorityAnswer::None);
    else
      CHECK(w == (m == MinorityAnswer::A ? MinorityAnswer::B : MinorityAnswer::A));
  }
}

TEST_CASE("validate: golden parameters pass, broken ones are named") {
  for (const auto& c : builtin_cases()) {
    CHECK(validate(c.before).empty());
    CHECK(validate(c.after).empty());
  }

  Scenario s = builtin_case(CaseId::P1).after;
  s.catA.p0 = s.catA.Pbar;
  auto violations = validate(s);
  REQUIRE_FALSE(violations.empty());
  bool found = false;
  for (const auto& v : violations)
    if (v.name == "prior not below threshold") found = true;
  CHECK(found);

  s = builtin_case(CaseId::P1).after;
  s.muA = 0.9;
  s.muB = 0.3;
  violations = validate(s);
  found = false;
  for (const auto& v : violations)
    if (v.name == "search probabilities exceed 1") found = true;
  CHECK(found);
  CHECK_FALSE(hard_valid(violations));
}

TEST_CASE("validate: standing assumptions are soft") {
  // A large qH^A makes search better than a blank B candidate under the myopic
  // rule; the scenario stays evaluable but is flagged.
  Scenario s = builtin_case(CaseId::P1).after;
  s.catA.qH = 0.95;
  const auto violations = validate(s);
  CHECK_FALSE(violations.empty());
  CHECK(hard_valid(violations));
  for (const auto& v : violations) CHECK_FALSE(v.hard);
}
