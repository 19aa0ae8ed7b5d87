#include "dchain/error.hpp"
#include "dchain/extremal.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace dchain;

namespace {

Poset p(const char* text) { return eval_expr(parse_expr(text)); }

void check_witness(const LaResult& r, const Poset& pattern) {
  CHECK(r.witness.size() == r.value);
  CHECK(is_p_free(r.witness, pattern));
  CHECK_FALSE(oracle::embeds_by_enumeration(pattern, oracle::inclusion_poset(r.witness.members())));
}

}  // namespace

TEST_SUITE("extremal") {
  TEST_CASE("la_exact examples") {
    LaResult b3 = la_exact(3, p("B"));
    CHECK(b3.status == LaStatus::Exact);
    CHECK(b3.value == 6);
    check_witness(b3, p("B"));

    LaResult d2 = la_exact(2, p("D3"));
    CHECK(d2.value == 4);

    LaResult b2 = la_exact(2, p("B"));
    CHECK(b2.value == 4);
    CHECK(BigInt(b2.value) > sigma(2, 2));

    LaResult e = la_exact(3, p("E"));
    CHECK(e.value == 0);
    CHECK(e.witness.empty());
  }

  TEST_CASE("la_exact agrees with brute-force enumeration for n <= 3") {
    std::vector<Poset> patterns;
    for (BaseName b : all_base_names()) patterns.push_back(base_poset(b));
    for (std::size_t k = 1; k <= 5; ++k) patterns.push_back(path_poset(k));
    patterns.push_back(Poset::from_relations(3, {{0, 1}, {0, 2}}));
    std::mt19937 rng(41);
    for (int i = 0; i < 6; ++i) patterns.push_back(oracle::random_poset(rng, 2 + rng() % 3, 0.5));
    for (const Poset& pattern : patterns)
      for (unsigned n = 0; n <= 3; ++n) {
        LaResult r = la_exact(n, pattern);
        CHECK(r.value == oracle::la_by_enumeration(n, pattern));
        check_witness(r, pattern);
      }
  }

  TEST_CASE("branch and bound at n = 4") {
    LaResult b4 = la_exact(4, p("B"));
    CHECK(b4.status == LaStatus::Exact);
    CHECK(b4.value == 10);
    check_witness(b4, p("B"));
    LaResult d4 = la_exact(4, p("D3"));
    CHECK(d4.value == 14);
    check_witness(d4, p("D3"));
  }

  TEST_CASE("limits and budgets") {
    CHECK_THROWS_AS(la_exact(6, p("B")), Error);
    CHECK_THROWS_AS(la_exact(3, p("B"), LaOptions{7, 0, std::nullopt}), Error);
    LaResult r = la_exact(5, p("B"), LaOptions{5, 10, std::nullopt});
    CHECK(r.status == LaStatus::Inconclusive);
    CHECK(r.value >= 20);  // the middle-levels seed is never lost
    CHECK(r.upper_bound >= r.value);
    check_witness(r, p("B"));
  }

  TEST_CASE("la is nondecreasing in n and below the old bound") {
    for (const char* text : {"B", "D3", "E + E", "S", "E + B"}) {
      Poset pattern = p(text);
      std::size_t prev = 0;
      for (unsigned n = 0; n <= 4; ++n) {
        const std::size_t v = la_exact(n, pattern).value;
        CHECK(v >= prev);
        prev = v;
        CHECK(BigInt(v) <= old_bound(pattern, n));
        const UpperBound ub = upper_bound_theorem4(pattern, n);
        if (ub.kind == BoundKind::SharpSigma) CHECK(Rational(v) <= ub.value);
      }
    }
  }

  TEST_CASE("bounds") {
    UpperBound b4 = upper_bound_theorem4(p("B"), 4);
    CHECK(b4.kind == BoundKind::SharpSigma);
    CHECK(b4.value == 10);

    Poset v = Poset::from_relations(3, {{0, 1}, {0, 2}});
    UpperBound vb = upper_bound_theorem4(v, 4);
    CHECK(vb.kind == BoundKind::Coarse);
    CHECK(vb.value == 9);

    UpperBound eb = upper_bound_theorem4(p("E"), 3);
    CHECK(eb.kind == BoundKind::SharpSigma);
    CHECK(eb.value == 0);

    // b(B)+1 = 3 > n = 2 forces the coarse form.
    CHECK(upper_bound_theorem4(p("B"), 2).kind == BoundKind::Coarse);

    CHECK(old_bound(p("B"), 4) == 14);
    CHECK(old_bound(p("D3"), 4) == 15);
    CHECK(upper_bound_theorem4(p("D3"), 4).value == 14);
    for (unsigned n = 2; n <= 8; ++n) CHECK(Rational(old_bound(path_poset(2), n)) == upper_bound_theorem4(path_poset(2), n).value);
  }

  TEST_CASE("e lower scan") {
    Certificate b = e_lower_scan(p("B"), 2, 7, "B");
    CHECK(b.verdict == Verdict::Pass);
    CHECK(b.get("note")->find("not a proof") != std::string::npos);
    CHECK(e_lower_scan(p("D3"), 3, 7, "D3").verdict == Verdict::Pass);

    Certificate fail = e_lower_scan(p("B"), 3, 3, "B");
    CHECK(fail.verdict == Verdict::Fail);
    REQUIRE(fail.witness);
    CHECK_FALSE(is_p_free(*fail.witness, p("B")));

    CHECK(e_lower_scan(p("E"), 0, 7, "E").verdict == Verdict::Pass);
    CHECK(e_lower_scan(p("E"), 1, 3, "E").verdict == Verdict::Fail);

    Certificate spent = e_lower_scan(p("R"), 6, 10, "R", ScanOptions{2, 1000, std::nullopt});
    CHECK(spent.verdict == Verdict::Inconclusive);
    CHECK(spent.get("note")->find("budget exhausted") != std::string::npos);
    // A real hit found before the budget ends still fails the scan.
    CHECK(e_lower_scan(p("B"), 3, 6, "B", ScanOptions{1, 100000, std::nullopt}).verdict == Verdict::Fail);

    Certificate par = e_lower_scan(p("B"), 3, 5, "B", 3);
    CHECK(par.serialize() == fail.serialize().replace(fail.serialize().find("n_max=3"), 7, "n_max=5")
                                 .replace(fail.serialize().find("n<=3"), 4, "n<=5"));
  }

  TEST_CASE("e upper witness") {
    auto b = e_upper_witness(p("B"), 3, 4);
    REQUIRE(b);
    CHECK(b->n == 3);
    CHECK(b->k == 1);
    CHECK(is_valid_embedding(p("B"), family_poset(levels_family(3, 1, 3)), b->embedding));

    auto d = e_upper_witness(p("D3"), 4, 4);
    REQUIRE(d);
    CHECK(d->n == 3);
    CHECK(d->k == 0);
    CHECK(d->image.contains(0));
    CHECK(d->image.contains(7));

    auto e = e_upper_witness(p("E"), 1, 2);
    REQUIRE(e);
    CHECK(e->image.size() == 1);

    CHECK_FALSE(e_upper_witness(p("B"), 2, 6).has_value());
    CHECK_THROWS_AS(e_upper_witness(p("B"), 0, 3), Error);
  }

  TEST_CASE("e composition bound equals b over the seven bases") {
    CHECK(e_composition_bound(parse_expr("B + B")) == 5);
    CHECK(e_composition_bound(parse_expr("S' * D3 + B + B")) == 13);
    CHECK(e_composition_bound(parse_expr("E")) == 0);
    std::mt19937 rng(43);
    const auto& names = all_base_names();
    std::function<PosetExpr(int)> gen = [&](int depth) -> PosetExpr {
      if (depth == 0 || rng() % 4 == 0) return PosetExpr::base(names[rng() % names.size()]);
      PosetExpr l = gen(depth - 1);
      PosetExpr r = gen(depth - 1);
      if (rng() % 2 && greatest_element(eval_expr(l)) && least_element(eval_expr(r))) return PosetExpr::otimes(l, r);
      return PosetExpr::oplus(l, r);
    };
    for (int i = 0; i < 50; ++i) {
      PosetExpr e = gen(4);
      CHECK(Rational(e_composition_bound(e)) == b_value(eval_expr(e)));
    }
    PosetLoader loader = [](const std::string&) { return path_poset(2); };
    CHECK_THROWS_AS(e_composition_bound(parse_expr("@x + B", loader)), Error);
  }

  TEST_CASE("main theorem verification") {
    Certificate b = verify_main_theorem(parse_expr("B"), 4);
    CHECK(b.verdict == Verdict::Pass);
    CHECK(b.get("value") == std::optional<std::string>("10"));
    REQUIRE(b.witness);
    CHECK(is_p_free(*b.witness, p("B")));

    Certificate path = verify_main_theorem(parse_expr("E + E + E"), 4);
    CHECK(path.verdict == Verdict::Pass);
    CHECK(path.get("value") == std::optional<std::string>("10"));

    Certificate bb = verify_main_theorem(parse_expr("B + B"), 6);
    CHECK(bb.verdict == Verdict::PropertyPass);
    CHECK(bb.get("middle_levels_free") == std::optional<std::string>("yes"));
    CHECK(bb.get("window_condition") == std::optional<std::string>("pass"));

    CHECK_THROWS_WITH_AS(verify_main_theorem(parse_expr("B"), 2), doctest::Contains("n >= b(P)+1"), Error);
    PosetLoader loader = [](const std::string&) { return path_poset(2); };
    CHECK_THROWS_AS(verify_main_theorem(parse_expr("@x", loader), 4), Error);
  }

  TEST_CASE("middle levels below b are free wherever the scan passes") {
    for (const char* text : {"B", "D3", "E + E"}) {
      Poset pattern = p(text);
      const auto b = static_cast<unsigned>(boost::multiprecision::numerator(b_value(pattern)));
      for (unsigned n = 2; n <= 4; ++n) {
        const std::size_t la = la_exact(n, pattern).value;
        for (unsigned m = 1; m <= b && m <= n + 1; ++m)
          if (e_lower_scan(pattern, m, n, text).verdict == Verdict::Pass) CHECK(la >= middle_levels_family(n, m).size());
      }
    }
  }
}
