#include <catch2/catch_amalgamated.hpp>

#include "hda/literal.hpp"
#include "hda/morphism.hpp"
#include "testutil.hpp"

using namespace hda;

namespace {

bool same_morphism(const IpMorphism& a, const IpMorphism& b) {
  return a.source == b.source && a.target == b.target && a.f == b.f &&
         a.eps == b.eps;
}

}  // namespace

TEST_CASE("identity laws for composition") {
  Ipomset p = parse_ipomset("[.a. b] * [.a. c]");
  auto ms = testutil::enumerate_ip_morphisms(parse_ipomset("[a b]"), p);
  REQUIRE_FALSE(ms.empty());
  for (const auto& m : ms) {
    REQUIRE(same_morphism(compose_ip(identity_ip(m.source), m), m));
    REQUIRE(same_morphism(compose_ip(m, identity_ip(m.target)), m));
  }
}

TEST_CASE("composition is associative on enumerated triples") {
  Ipomset u = parse_ipomset("[a]");
  Ipomset v = parse_ipomset("[a b]");
  Ipomset w = parse_ipomset("[.a. b] * [.a. c]");
  auto f1s = testutil::enumerate_ip_morphisms(u, v);
  auto f2s = testutil::enumerate_ip_morphisms(v, w);
  auto f3s = testutil::enumerate_ip_morphisms(w, w);
  REQUIRE_FALSE(f1s.empty());
  REQUIRE_FALSE(f2s.empty());
  REQUIRE_FALSE(f3s.empty());
  for (const auto& f1 : f1s)
    for (const auto& f2 : f2s)
      for (const auto& f3 : f3s) {
        auto lhs = compose_ip(compose_ip(f1, f2), f3);
        auto rhs = compose_ip(f1, compose_ip(f2, f3));
        REQUIRE(same_morphism(lhs, rhs));
      }
}

TEST_CASE("composition checks object compatibility") {
  Ipomset p = parse_ipomset("[a]");
  Ipomset q = parse_ipomset("[a b]");
  auto ms = testutil::enumerate_ip_morphisms(p, q);
  REQUIRE_FALSE(ms.empty());
  REQUIRE_THROWS_MATCHES(
      compose_ip(ms[0], ms[0]), Error,
      Catch::Matchers::Predicate<Error>(
          [](const Error& e) { return e.kind() == ErrorKind::Incompatible; }));
}

TEST_CASE("initial inclusion of the running example") {
  // [.a. b] -> P glued with R1 = [.a. c]
  Ipomset p1 = parse_ipomset("[.a. b]");
  Ipomset r1 = parse_ipomset("[.a. c]");
  IpMorphism inc = initial_inclusion_ip(p1, r1);
  REQUIRE(isomorphic(inc.target, parse_ipomset("[.a. b] * [.a. c]")));
  for (int i = 0; i < inc.source.size(); ++i)
    REQUIRE(inc.eps[inc.f[i]] == EvState::Exec);
  int fresh = 0;
  for (int j = 0; j < inc.target.size(); ++j)
    if (inc.eps[j] == EvState::Zero) ++fresh;
  REQUIRE(fresh == 1);  // the c event

  // [.a b<c with c.] -> R glued with R2 = [d. .c]
  Ipomset p2 = parse_ipomset("[.a. b] * [.a c.]");
  Ipomset r2 = parse_ipomset("[d. .c]");
  IpMorphism inc2 = initial_inclusion_ip(p2, r2);
  REQUIRE(isomorphic(inc2.target, parse_ipomset("[.a. b] * [.a c.] * [d. .c]")));
}

TEST_CASE("final inclusion marks the past as terminated") {
  Ipomset p = parse_ipomset("[.a. b]");
  Ipomset r = parse_ipomset("[.a. c]");
  IpMorphism fin = final_inclusion_ip(p, r);
  REQUIRE(fin.source == r);
  int done = 0;
  for (int j = 0; j < fin.target.size(); ++j)
    if (fin.eps[j] == EvState::One) ++done;
  REQUIRE(done == 1);  // the b event
}

TEST_CASE("inclusion into an identity-like step is all exec") {
  Ipomset p = parse_ipomset("[.a. b.]");
  // full-interface discrete step over targets(p)
  Ipomset idstep = parse_ipomset("[.a. .b.]");
  IpMorphism inc = initial_inclusion_ip(p, idstep);
  for (int j = 0; j < inc.target.size(); ++j)
    REQUIRE(inc.eps[j] == EvState::Exec);
}

TEST_CASE("glue of non-composable operands is rejected in inclusions") {
  REQUIRE_THROWS_MATCHES(
      initial_inclusion_ip(parse_ipomset("[a.]"), parse_ipomset("[.b]")), Error,
      Catch::Matchers::Predicate<Error>(
          [](const Error& e) { return e.kind() == ErrorKind::NotComposable; }));
}

TEST_CASE("composition outputs satisfy the state-pair table") {
  Ipomset u = parse_ipomset("[a]");
  Ipomset v = parse_ipomset("[a b]");
  Ipomset w = parse_ipomset("[.a. b] * [.a. c]");
  for (const auto& f1 : testutil::enumerate_ip_morphisms(u, v))
    for (const auto& f2 : testutil::enumerate_ip_morphisms(v, w)) {
      IpMorphism c = compose_ip(f1, f2);
      REQUIRE_NOTHROW(check_ip_morphism(c));
    }
}
