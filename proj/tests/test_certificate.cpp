#include "dchain/certificate.hpp"
#include "dchain/error.hpp"

#include <doctest.h>

using namespace dchain;

TEST_SUITE("certificate") {
  TEST_CASE("serialize and parse round-trip") {
    Certificate c;
    c.claim = "la";
    c.set("expr", "B + D3").set("n", "4").set("value", "10");
    c.verdict = Verdict::Pass;
    c.witness = Family(3, {0b001, 0b011});
    const std::string text = c.serialize();
    CHECK(text == "claim=la\nexpr=B + D3\nn=4\nvalue=10\nverdict=pass\nwitness:\nfamily 3\n{1}\n{1,2}\nend\n");
    Certificate back = Certificate::parse(text);
    CHECK(back.claim == "la");
    CHECK(back.fields == c.fields);
    CHECK(back.verdict == Verdict::Pass);
    REQUIRE(back.witness);
    CHECK(*back.witness == *c.witness);
    CHECK(back.serialize() == text);
  }

  TEST_CASE("set replaces in place") {
    Certificate c;
    c.set("a", "1").set("b", "2").set("a", "3");
    CHECK(c.fields.size() == 2);
    CHECK(c.get("a") == std::optional<std::string>("3"));
    CHECK_FALSE(c.get("zzz").has_value());
  }

  TEST_CASE("reserved and malformed keys") {
    Certificate c;
    CHECK_THROWS_AS(c.set("claim", "x"), Error);
    CHECK_THROWS_AS(c.set("verdict", "x"), Error);
    CHECK_THROWS_AS(c.set("witness", "x"), Error);
    CHECK_THROWS_AS(c.set("a=b", "x"), Error);
    CHECK_THROWS_AS(c.set("a", "x\ny"), Error);
  }

  TEST_CASE("verdict strings") {
    for (Verdict v : {Verdict::Pass, Verdict::PropertyPass, Verdict::Fail, Verdict::Inconclusive})
      CHECK(parse_verdict(verdict_string(v)) == v);
    CHECK(is_passing(Verdict::PropertyPass));
    CHECK_FALSE(is_passing(Verdict::Inconclusive));
    CHECK_THROWS_AS(parse_verdict("maybe"), Error);
  }

  TEST_CASE("parse errors") {
    CHECK_THROWS_AS(Certificate::parse("claim=x\n"), ParseError);
    CHECK_THROWS_AS(Certificate::parse("claim=x\nnonsense\nverdict=pass\n"), ParseError);
    CHECK_THROWS_AS(Certificate::parse("claim=x\nverdict=pass\nwitness:\nfamily 2\n{1}\n"), ParseError);
    Certificate ok = Certificate::parse("claim=x\nvalue=a=b\nverdict=fail");
    CHECK(ok.get("value") == std::optional<std::string>("a=b"));
  }
}
