#include "doctest.h"

#include "tforge/error.hpp"
#include "tforge/ring.hpp"

using namespace tforge;

namespace {

// Frobenius through x -> x^p on the power basis; valid because x is
// Teichmueller, and independent of the digit expansion used by the ring.
RingElem frob_by_substitution(const ChainRing& r, const RingElem& a) {
  RingElem out{};
  RingElem xp = r.pow(r.gen(), static_cast<std::uint64_t>(r.p()));
  RingElem term = r.one();
  for (int i = 0; i < r.f(); ++i) {
    out = r.add(out, r.mul(r.from_int(a.c[i]), term));
    term = r.mul(term, xp);
  }
  return out;
}

bool brute_is_unit(const ChainRing& r, const RingElem& a) {
  for (std::uint64_t k = 0; k < r.size(); ++k) {
    if (r.mul(a, r.decode(k)) == r.one()) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("ring_make picks the expected moduli") {
  auto z8 = ChainRing::make(2, 3, 1);
  CHECK(z8->modulus() == 8);
  CHECK(z8->size() == 8);
  CHECK(z8->gen() == z8->one());
  CHECK(z8->modulus_string() == "x+7");  // x - 1 with coefficients in [0, 8)

  auto f4 = ChainRing::make(2, 1, 2);
  CHECK(f4->defining_poly() == std::vector<std::int64_t>{1, 1, 1});
  CHECK(f4->name() == "GR(2^1,2)");

  auto gr42 = ChainRing::make(2, 2, 2);
  CHECK(gr42->defining_poly() == std::vector<std::int64_t>{1, 1, 1});
  // h divides x^3 - 1: x^3 = 1 in the quotient.
  CHECK(gr42->pow(gr42->gen(), 3) == gr42->one());

  CHECK_THROWS_AS(ChainRing::make(4, 1, 1), InvalidArgument);
  CHECK_THROWS_AS(ChainRing::make(2, 0, 1), InvalidArgument);
}

TEST_CASE("moduli divide x^(p^f-1) - 1 for several rings") {
  for (auto [p, n, f] : {std::tuple{2, 3, 3}, {3, 2, 2}, {5, 2, 2}, {2, 4, 4},
                         {3, 1, 3}, {7, 2, 1}}) {
    auto r = ChainRing::make(p, n, f);
    std::uint64_t e = 1;
    for (int i = 0; i < f; ++i) e *= static_cast<std::uint64_t>(p);
    CHECK(r->pow(r->gen(), e - 1) == r->one());
  }
}

TEST_CASE("unit and valuation examples") {
  auto z8 = ChainRing::make(2, 3, 1);
  CHECK(z8->inv(z8->from_int(3)) == z8->from_int(3));
  CHECK(z8->val(z8->zero()) == 3);
  CHECK_THROWS_AS(z8->inv(z8->from_int(2)), NonUnit);

  auto gr42 = ChainRing::make(2, 2, 2);
  RingElem two_x = gr42->parse("2*x");
  CHECK_FALSE(gr42->is_unit(two_x));
  CHECK(gr42->val(two_x) == 1);
  CHECK(gr42->val(gr42->zero()) == 2);
}

TEST_CASE("frobenius examples") {
  auto z8 = ChainRing::make(2, 3, 1);
  for (int a = 0; a < 8; ++a) {
    CHECK(z8->frobenius(z8->from_int(a)) == z8->from_int(a));
  }
  auto f4 = ChainRing::make(2, 1, 2);
  CHECK(f4->frobenius(f4->gen()) == f4->parse("x+1"));
  auto gr42 = ChainRing::make(2, 2, 2);
  RingElem sx = gr42->frobenius(gr42->gen());
  CHECK(sx == gr42->parse("3*x+3"));
  CHECK(gr42->format(sx) == "3*x+3");
  CHECK(gr42->frobenius(sx) == gr42->gen());
}

TEST_CASE("ring axioms and unit characterization by enumeration") {
  for (auto [p, n, f] : {std::tuple{2, 3, 1}, {2, 1, 2}, {2, 2, 2}, {3, 2, 1},
                         {3, 1, 2}}) {
    auto rp = ChainRing::make(p, n, f);
    const ChainRing& r = *rp;
    CAPTURE(r.name());
    const std::uint64_t sz = r.size();
    REQUIRE(sz <= 4096);
    int bad = 0;
    for (std::uint64_t i = 0; i < sz; ++i) {
      RingElem a = r.decode(i);
      if (r.encode(a) != i) ++bad;
      if (r.is_unit(a) != brute_is_unit(r, a)) ++bad;
      if (r.is_unit(a) && r.mul(a, r.inv(a)) != r.one()) ++bad;
      auto [u, v] = r.split(a);
      if (r.mul(u, r.p_power(v)) != a || !r.is_unit(u)) ++bad;
      if (r.parse(r.format(a)) != a) ++bad;
      for (std::uint64_t j = 0; j < sz; j += (sz > 64 ? 7 : 1)) {
        RingElem b = r.decode(j);
        if (r.mul(a, b) != r.mul(b, a)) ++bad;
        if (r.add(a, b) != r.add(b, a)) ++bad;
        for (std::uint64_t k = 0; k < sz; k += (sz > 16 ? 5 : 1)) {
          RingElem c = r.decode(k);
          if (r.mul(r.mul(a, b), c) != r.mul(a, r.mul(b, c))) ++bad;
          if (r.mul(a, r.add(b, c)) != r.add(r.mul(a, b), r.mul(a, c))) ++bad;
        }
      }
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("frobenius properties by enumeration") {
  for (auto [p, n, f] : {std::tuple{2, 1, 2}, {2, 2, 2}, {3, 2, 2}, {2, 3, 3},
                         {5, 1, 2}}) {
    auto rp = ChainRing::make(p, n, f);
    const ChainRing& r = *rp;
    CAPTURE(r.name());
    int bad = 0;
    for (std::uint64_t i = 0; i < r.size(); ++i) {
      RingElem a = r.decode(i);
      RingElem s = r.frobenius(a);
      if (s != frob_by_substitution(r, a)) ++bad;
      if (r.val(r.sub(s, r.pow(a, static_cast<std::uint64_t>(p)))) < 1) ++bad;
      RingElem it = a;
      for (int k = 0; k < f; ++k) it = r.frobenius(it);
      if (it != a) ++bad;
      RingElem t = r.teichmuller(a);
      std::uint64_t q = 1;
      for (int k = 0; k < f; ++k) q *= static_cast<std::uint64_t>(p);
      if (r.pow(t, q) != t) ++bad;
      if (r.val(r.sub(t, a)) < 1) ++bad;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("parse rejects malformed literals") {
  auto gr42 = ChainRing::make(2, 2, 2);
  CHECK(gr42->parse("x^2") == gr42->parse("3*x+3"));
  CHECK(gr42->parse("-1") == gr42->from_int(3));
  CHECK_THROWS(gr42->parse("y"));
  CHECK_THROWS(gr42->parse("3*"));
}
