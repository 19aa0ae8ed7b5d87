#include "dchain/double_chain.hpp"
#include "dchain/embedding.hpp"
#include "dchain/error.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <bit>
#include <random>

using namespace dchain;

namespace {

Mask set_of(std::initializer_list<unsigned> xs) {
  Mask m = 0;
  for (unsigned x : xs) m |= Mask{1} << (x - 1);
  return m;
}

}  // namespace

TEST_SUITE("double-chain") {
  TEST_CASE("double chain of (2,3,1,4)") {
    DoubleChain dc = double_chain({2, 3, 1, 4});
    CHECK(dc.L(1) == set_of({2}));
    CHECK(dc.L(2) == set_of({2, 3}));
    CHECK(dc.M(1) == set_of({3}));
    CHECK(dc.M(2) == set_of({1, 2}));
    CHECK(dc.M(3) == set_of({2, 3, 4}));
    CHECK(dc.as_family().size() == 8);
  }

  TEST_CASE("small double chains") {
    CHECK(double_chain({1}).secondary.empty());
    DoubleChain dc = double_chain({1, 2, 3});
    CHECK(dc.M(1) == set_of({2}));
    CHECK(dc.M(2) == set_of({1, 3}));
    CHECK_THROWS_AS(double_chain({1, 1, 2}), Error);
    CHECK_THROWS_AS(double_chain({1, 4, 2}), Error);
  }

  TEST_CASE("structural invariants of every double chain for n <= 6") {
    for (unsigned n = 2; n <= 6; ++n) {
      std::vector<unsigned> perm(n);
      for (unsigned i = 0; i < n; ++i) perm[i] = i + 1;
      do {
        DoubleChain dc = double_chain(perm);
        for (unsigned i = 1; i < n; ++i) {
          const Mask L = dc.L(i);
          const Mask M = dc.M(i);
          CHECK(std::popcount(L) == static_cast<int>(i));
          CHECK(std::popcount(M) == static_cast<int>(i));
          CHECK(L != M);
          if (i + 1 < n) CHECK((dc.M(i) & dc.M(i + 1)) != dc.M(i));
          for (unsigned j = i + 2; j < n; ++j) CHECK((dc.M(i) & dc.M(j)) == dc.M(i));
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }

  TEST_CASE("containment counts") {
    CHECK(count_containing(0, 3) == 6);
    CHECK(count_containing(set_of({1}), 3) == 4);
    CHECK(count_containing(set_of({1, 2}), 4) == 8);
    CHECK(count_containing(set_of({1, 2, 3}), 3) == 6);
    CHECK_THROWS_AS(count_containing(0, 1), Error);
    CHECK_THROWS_AS(count_containing(set_of({4}), 3), Error);
  }

  TEST_CASE("closed form matches set-based enumeration for n <= 6") {
    for (unsigned n = 2; n <= 6; ++n) {
      auto counts = oracle::double_chain_counts(n);
      auto enumerated = enumerate_containing_counts(n, 2);
      for (Mask f = 0; f < (Mask{1} << n); ++f) {
        const auto it = counts.find(oracle::to_set(f));
        const std::size_t expected = it == counts.end() ? 0 : it->second;
        CHECK(count_containing(f, n) == expected);
        CHECK(enumerated[f] == expected);
      }
      DoubleChainAudit audit = audit_double_chains(n);
      CHECK(audit.passed());
      CHECK(audit.subsets == (std::size_t{1} << n));
      // Each double chain has 2n members.
      CHECK(audit.incidence_enumerated == 2 * n * factorial(n));
    }
  }

  TEST_CASE("incidence identity: sum over chains of |F cap D| is 2 n! times the double Lubell sum") {
    std::mt19937 rng(23);
    for (unsigned n = 2; n <= 6; ++n) {
      auto counts = oracle::double_chain_counts(n);
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<Mask> members;
        for (Mask s = 0; s < (Mask{1} << n); ++s)
          if (rng() % 2) members.push_back(s);
        Family f(n, members);
        BigInt incidence = 0;
        BigInt closed = 0;
        for (Mask s : f.members()) {
          incidence += counts[oracle::to_set(s)];
          const unsigned size = static_cast<unsigned>(std::popcount(s));
          closed += (size == 0 || size == n) ? factorial(n) : BigInt(2 * factorial(size) * factorial(n - size));
        }
        CHECK(incidence == closed);
        CHECK(Rational(incidence) == 2 * Rational(factorial(n)) * double_lubell_sum(f));
      }
    }
  }

  TEST_CASE("Lubell sums") {
    CHECK(chain_lubell_sum(levels_family(4, 2, 1)) == 1);
    CHECK(chain_lubell_sum(Family(4)) == 0);
    CHECK(chain_lubell_sum(power_set(2)) == 3);
    CHECK(double_lubell_sum(middle_levels_family(4, 2)) == 2);
    CHECK(double_lubell_sum(Family(3, {0, 7})) == 1);
    CHECK(double_lubell_sum(middle_levels_family(5, 3)) == 3);
    CHECK_THROWS_AS(double_lubell_sum(power_set(1)), Error);
  }

  TEST_CASE("window posets") {
    Poset w = window_poset(0, 2);
    REQUIRE(w.size() == 6);
    CHECK_FALSE(strict_order_violation(w).has_value());
    // L0=0 M0=1 L1=2 M1=3 L2=4 M2=5
    CHECK(w.less(1, 5));
    CHECK_FALSE(w.comparable(1, 3));
    CHECK_FALSE(w.comparable(0, 1));
    CHECK(w.less(0, 3));
    CHECK(w.less(1, 2));

    Poset one = window_poset(0, 0);
    CHECK(one.size() == 2);
    CHECK(one.relation_count() == 0);

    for (long lo = -3; lo <= 0; ++lo) {
      Poset wide = window_poset(lo, lo + 6);
      CHECK_FALSE(strict_order_violation(wide).has_value());
      for (long i = lo; i < lo + 6; ++i) {
        const auto mi = static_cast<std::size_t>(2 * (i - lo) + 1);
        CHECK_FALSE(wide.comparable(mi, mi + 2));
      }
    }
  }

  TEST_CASE("concrete double chains sit inside a window of matching width") {
    std::mt19937 rng(29);
    for (unsigned n = 2; n <= 6; ++n) {
      std::vector<unsigned> perm(n);
      for (unsigned i = 0; i < n; ++i) perm[i] = i + 1;
      std::shuffle(perm.begin(), perm.end(), rng);
      Poset concrete = family_poset(double_chain(perm).as_family());
      auto e = embeds_weak(concrete, window_poset(0, static_cast<long>(n)));
      REQUIRE(e);
      CHECK(is_valid_embedding(concrete, window_poset(0, static_cast<long>(n)), *e));
    }
  }

  TEST_CASE("realized configurations reproduce the abstract order") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<ChainElement> pick;
      for (const auto& e : window_elements(0, 5))
        if (rng() % 2) pick.push_back(e);
      if (pick.empty()) continue;
      Family realized = realize_in_double_chain(pick);
      CHECK(is_isomorphic(family_poset(realized), chain_subposet(pick)));
    }
  }

  TEST_CASE("window condition examples") {
    Certificate e0 = window_condition(base_poset("E"), 0, "E");
    CHECK(e0.verdict == Verdict::Pass);

    Certificate b2 = window_condition(base_poset("B"), 2, "B");
    CHECK(b2.verdict == Verdict::Pass);
    CHECK(b2.get("expected") == std::optional<std::string>("all-contain"));
    CHECK(b2.get("regime")->rfind("integer-m", 0) == 0);

    Certificate b15 = window_condition(base_poset("B"), Rational(3, 2), "B");
    CHECK(b15.verdict == Verdict::Fail);
    REQUIRE(b15.witness);
    CHECK(b15.witness->size() == 4);
    CHECK(is_p_free(*b15.witness, base_poset("B")));
    CHECK(b15.get("regime")->rfind("half-integer-m", 0) == 0);

    CHECK_THROWS_AS(window_condition(base_poset("B"), Rational(1, 3), "B"), Error);
    CHECK_THROWS_AS(window_condition(base_poset("B"), -1, "B"), Error);

    // Too few elements for the pattern at all.
    Certificate small = window_condition(base_poset("D3"), 1, "D3");
    CHECK(small.verdict == Verdict::Fail);
  }

  TEST_CASE("window search counterexample avoids the pattern") {
    WindowResult r = window_search(base_poset("D3"), 5);  // 6 elements, one fewer than 2b(D3)+1
    REQUIRE(r.verdict == Verdict::Fail);
    CHECK(r.counterexample.size() == 6);
    CHECK_FALSE(embeds_weak(base_poset("D3"), chain_subposet(r.counterexample)).has_value());
    CHECK_FALSE(oracle::embeds_by_enumeration(base_poset("D3"), chain_subposet(r.counterexample)));
    Family realized = realize_in_double_chain(r.counterexample);
    CHECK_FALSE(oracle::embeds_by_enumeration(base_poset("D3"), oracle::inclusion_poset(realized.members())));
  }

  TEST_CASE("window condition at m = b(P) for the small bases") {
    for (const char* name : {"E", "B", "D3", "S", "S'", "Q"}) {
      Poset p = base_poset(name);
      CAPTURE(name);
      CHECK(window_condition(p, b_value(p), name).verdict == Verdict::Pass);
    }
  }

  TEST_CASE("budget exhaustion is inconclusive, never a pass") {
    WindowOptions opts;
    opts.max_nodes = 5;
    Certificate c = window_condition(base_poset("Q"), 4, "Q", opts);
    CHECK(c.verdict == Verdict::Inconclusive);
  }

  TEST_CASE("parallel search gives the same verdict and witness") {
    WindowOptions one;
    WindowOptions three;
    three.jobs = 3;
    WindowResult a = window_search(base_poset("B"), 3, one);
    WindowResult b = window_search(base_poset("B"), 3, three);
    CHECK(a.verdict == b.verdict);
    CHECK(a.counterexample == b.counterexample);
  }

  TEST_CASE("gap compression preserves containment on wide windows") {
    std::mt19937 rng(37);
    for (const char* name : {"B", "D3", "S"}) {
      Poset p = base_poset(name);
      const auto twice_b = static_cast<unsigned>(boost::multiprecision::numerator(2 * b_value(p)));
      const std::size_t size = twice_b + 1;
      const WindowResult canonical = window_search(p, twice_b);
      // Window three times wider than the widest canonical configuration.
      const long width = 3 * 2 * static_cast<long>(size);
      auto pool = window_elements(0, width);
      for (int trial = 0; trial < 80; ++trial) {
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<ChainElement> pick(pool.begin(), pool.begin() + static_cast<long>(size));
        const bool wide = embeds_weak(p, chain_subposet(pick)).has_value();
        const bool compressed = embeds_weak(p, chain_subposet(compress_gaps(pick))).has_value();
        CHECK(wide == compressed);
        if (canonical.verdict == Verdict::Pass) CHECK(wide);
      }
    }
  }
}
