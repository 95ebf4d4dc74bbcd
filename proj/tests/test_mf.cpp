#include "doctest.h"

#include <random>
#include <set>

#include "tforge/error.hpp"
#include "tforge/mf.hpp"
#include "tforge/tannaka.hpp"
#include "tforge/verify/generators.hpp"
#include "tforge/verify/oracles.hpp"

using namespace tforge;

namespace {

Matrix mat(const RingPtr& W, std::size_t rows, std::size_t cols, std::vector<int> v) {
  Matrix m(W, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = W->from_int(v[i * cols + j]);
  return m;
}

std::set<oracle::Code> codes(const std::vector<Matrix>& ms) {
  std::set<oracle::Code> out;
  for (const Matrix& m : ms) {
    oracle::Code c;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) c.push_back(m.ring()->encode(m(i, j)));
    out.insert(c);
  }
  return out;
}

// M = Z/4, Fil^0 = M, Fil^1 = 2M, phi^0 = 2, phi^1(2e) = 2e.
MFData z4_example() {
  AlgebraSpec alg = AlgebraSpec::make(2, 2, 1);
  const RingPtr& W = alg.B();
  MFData d{alg, {2}, 0, {mat(W, 1, 1, {1}), mat(W, 1, 1, {2})},
           {mat(W, 1, 1, {2}), mat(W, 1, 1, {2})}};
  return d;
}

}  // namespace

TEST_CASE("Tate objects are Fontaine-Laffaille") {
  for (AlgebraSpec alg : {AlgebraSpec::make(2, 1, 1), AlgebraSpec::make(3, 2, 1),
                          AlgebraSpec::make(2, 2, 2)}) {
    for (int i : {0, 1, 3}) {
      FilteredFModule t = tate(alg, i);
      CHECK(mf_validate(t, true).ok());
      CHECK(is_mf_fl(t));
      CHECK(is_mf_proj(t));
      CHECK(t.step(i - 2).module.rank() == 1);
      CHECK(t.step(i + 1).module.rank() == 0);
      // Below the window phi^{i-2} = p^2 phi^i.
      CHECK(t.phi_at(i - 2)(0, 0) == alg.B()->p_power(2));
    }
  }
}

TEST_CASE("phi = 0 fails the span condition and is not FL") {
  AlgebraSpec alg = AlgebraSpec::make(2, 1, 1);
  FilteredFModule t = tate(alg, 0);
  FilteredFModule z = mf_with_phi(t, {Matrix(alg.B(), 1, 1)});
  CHECK(mf_validate(z, false).ok());
  MFCheck c = mf_validate(z, true);
  CHECK(c.fault == MFFault::SpanFails);
  CHECK(c.witness == 0);
  CHECK_FALSE(is_mf_fl(z));
  CHECK_FALSE(phibar_surjective(z));
}

TEST_CASE("mf_check reports each fault kind") {
  SUBCASE("valid torsion example") {
    MFData d = z4_example();
    CHECK(mf_check(d, true).fault == MFFault::SpanFails);
    FilteredFModule x = mf_make(d);
    CHECK(x.fil[1].module.exps() == std::vector<int>{1});
    MBarResult r = mbar(x);
    CHECK(r.length_M == 2);
    CHECK(r.length_Mbar == 2);
    CHECK(r.Mbar.exps() == std::vector<int>{1, 1});
    CHECK_FALSE(is_mf_fl(x));
  }
  SUBCASE("shape") {
    MFData d = z4_example();
    d.phi_gens.pop_back();
    CHECK(mf_check(d).fault == MFFault::Shape);
    d = z4_example();
    d.fil_gens[0] = mat(d.alg.B(), 2, 1, {1, 0});
    CHECK(mf_check(d).fault == MFFault::Shape);
  }
  SUBCASE("not annihilated") {
    MFData d = z4_example();
    d.m_exps = {3};
    CHECK(mf_check(d).fault == MFFault::NotAnnihilated);
  }
  SUBCASE("phi ill defined") {
    MFData d = z4_example();
    d.phi_gens[1] = mat(d.alg.B(), 1, 1, {1});
    MFCheck c = mf_check(d);
    CHECK(c.fault == MFFault::PhiIllDefined);
    CHECK(c.step == 1);
    CHECK_THROWS_AS(mf_make(d), MFError);
  }
  SUBCASE("not exhaustive") {
    MFData d = z4_example();
    d.fil_gens[0] = mat(d.alg.B(), 1, 1, {2});
    d.phi_gens[0] = mat(d.alg.B(), 1, 1, {0});
    CHECK(mf_check(d).fault == MFFault::NotExhaustive);
  }
  SUBCASE("not decreasing") {
    AlgebraSpec alg = AlgebraSpec::make(2, 1, 1);
    const RingPtr& W = alg.B();
    MFData d{alg, {1, 1}, 0,
             {mat(W, 2, 2, {1, 0, 0, 1}), mat(W, 2, 1, {1, 0}), mat(W, 2, 1, {0, 1})},
             {mat(W, 2, 2, {0, 0, 0, 0}), mat(W, 2, 1, {0, 0}), mat(W, 2, 1, {1, 0})}};
    MFCheck c = mf_check(d);
    CHECK(c.fault == MFFault::NotDecreasing);
    CHECK(c.step == 2);
  }
  SUBCASE("phi incompatible") {
    AlgebraSpec alg = AlgebraSpec::make(2, 1, 1);
    const RingPtr& W = alg.B();
    MFData d{alg, {1}, 0, {mat(W, 1, 1, {1}), mat(W, 1, 1, {1})},
             {mat(W, 1, 1, {1}), mat(W, 1, 1, {1})}};
    MFCheck c = mf_check(d);
    CHECK(c.fault == MFFault::PhiIncompatible);
    CHECK(c.step == 1);
  }
  SUBCASE("not an inclusion") {
    AlgebraSpec alg = AlgebraSpec::make(2, 1, 1);
    FilteredFModule t = tate(alg, 0);
    t.fil[0] = {FinModule::free(alg.B(), 2), mat(alg.B(), 1, 2, {1, 1})};
    t.phi[0] = mat(alg.B(), 1, 2, {1, 0});
    CHECK(mf_validate(t).fault == MFFault::NotInclusion);
  }
}

TEST_CASE("torsion Tate object over Z/4") {
  AlgebraSpec alg = AlgebraSpec::make(2, 2, 1);
  const RingPtr& W = alg.B();
  MFData d{alg, {1}, 0, {mat(W, 1, 1, {1}), mat(W, 1, 1, {1})},
           {mat(W, 1, 1, {2}), mat(W, 1, 1, {1})}};
  FilteredFModule x = mf_make(d, true);
  CHECK(is_mf_fl(x));
  CHECK_FALSE(is_mf_proj(x));
  CHECK_THROWS_AS(mf_to_diagram({x}), NonFree);
}

TEST_CASE("homs between Tate objects") {
  AlgebraSpec f2 = AlgebraSpec::make(2, 1, 1);
  FilteredFModule m0 = tate(f2, 0), m1 = tate(f2, 1);
  MFHom h00 = mf_hom(m0, m0);
  CHECK(h00.module.exps() == std::vector<int>{1});
  CHECK(h00.basis.size() == 1);
  CHECK(mf_hom(m0, m1).module.rank() == 0);
  CHECK(mf_hom(m1, m0).module.rank() == 0);

  AlgebraSpec gr = AlgebraSpec::make(2, 2, 2);
  // Endomorphisms commute with sigma: the fixed ring Z/4 of W.
  MFHom hw = mf_hom(tate(gr, 1), tate(gr, 1));
  CHECK(hw.module.exps() == std::vector<int>{2});
  CHECK(hw.elements(gr, 1 << 10).size() == 4);
  CHECK(mf_hom(tate(gr, 0), tate(gr, 2)).module.rank() == 0);
}

TEST_CASE("hom into a direct sum doubles") {
  std::mt19937_64 rng(11);
  for (AlgebraSpec alg : {AlgebraSpec::make(2, 1, 1), AlgebraSpec::make(2, 2, 1),
                          AlgebraSpec::make(3, 1, 1)}) {
    for (int trial = 0; trial < 4; ++trial) {
      FilteredFModule x = gen::random_mf(alg, rng, 2, 1);
      FilteredFModule xx = mf_direct_sum(x, x);
      REQUIRE(mf_validate(xx, true).ok());
      CHECK(is_mf_fl(xx));
      CHECK(mf_hom(x, xx).module.length() == 2 * mf_hom(x, x).module.length());
      CHECK(mf_hom(xx, x).module.length() == 2 * mf_hom(x, x).module.length());
    }
  }
}

TEST_CASE("mf_hom agrees with exhaustive search") {
  std::mt19937_64 rng(5);
  struct Case {
    AlgebraSpec alg;
    std::size_t rank;
    int weight;
    int e;
  };
  std::vector<Case> cases = {{AlgebraSpec::make(2, 1, 1), 2, 1, 0},
                             {AlgebraSpec::make(2, 2, 1), 2, 1, 0},
                             {AlgebraSpec::make(2, 2, 1), 2, 1, 1},
                             {AlgebraSpec::make(3, 1, 1), 2, 2, 0},
                             {AlgebraSpec::make(2, 1, 2), 2, 1, 0},
                             {AlgebraSpec::make(2, 2, 2), 1, 1, 0}};
  for (const Case& c : cases) {
    for (int trial = 0; trial < 6; ++trial) {
      FilteredFModule x = gen::random_mf(c.alg, rng, c.rank, c.weight, c.e);
      FilteredFModule y = gen::random_mf(c.alg, rng, c.rank, c.weight, c.e);
      REQUIRE(mf_validate(x, true).ok());
      REQUIRE(is_mf_fl(x));
      MFHom h = mf_hom(x, y);
      std::vector<Matrix> found = h.elements(c.alg, 1 << 16);
      std::vector<Matrix> brute = oracle::mf_hom_enumerate(x, y, 1 << 16);
      CHECK(codes(found) == codes(brute));
      CHECK(found.size() == brute.size());
      for (const Matrix& g : h.basis) CHECK(is_mf_morphism(x, y, g));
    }
  }
}

TEST_CASE("mf_hom on a non-FL torsion object") {
  MFData d = z4_example();
  FilteredFModule x = mf_make(d);
  AlgebraSpec alg = d.alg;
  FilteredFModule t = tate(alg, 0);
  for (const auto& [a, b] : std::vector<std::pair<FilteredFModule, FilteredFModule>>{
           {x, x}, {x, t}, {t, x}}) {
    std::vector<Matrix> found = mf_hom(a, b).elements(alg, 1 << 12);
    CHECK(codes(found) == codes(oracle::mf_hom_enumerate(a, b)));
  }
}

TEST_CASE("MF family as a diagram category") {
  AlgebraSpec f2 = AlgebraSpec::make(2, 1, 1);
  FilteredFModule m0 = tate(f2, 0), m1 = tate(f2, 1);
  std::vector<FilteredFModule> objs = {m0, m1, mf_direct_sum(m0, m1)};
  DiagramCategory d = mf_to_diagram(objs, {"M(0)", "M(1)", "M(0)+M(1)"});
  CHECK(d.size() == 3);
  CHECK(validate(d).ok());
  CHECK(d.homs(0, 2).size() == 1);
  CHECK(d.homs(2, 2).size() == 2);
  CHECK(d.homs(0, 1).empty());

  CoendResult cr = coend(d);
  CHECK(cr.L->carrier().exps() == std::vector<int>{1, 1});
  CHECK(flatness_check(*cr.L));
  std::vector<Comodule> lifts = lift_coaction(d, cr);
  for (const UnitPairResult& u : unit_fully_faithful_check(d, lifts))
    CHECK(u.verdict == UnitVerdict::Equal);

  FilteredFModule bad = mf_with_phi(m0, {Matrix(f2.B(), 1, 1)});
  CHECK_THROWS_AS(mf_to_diagram({bad}), InvalidArgument);
}

TEST_CASE("colimit probes in MF") {
  AlgebraSpec f2 = AlgebraSpec::make(2, 1, 1);
  const RingPtr& W = f2.B();
  FilteredFModule m0 = tate(f2, 0), m1 = tate(f2, 1);
  std::vector<FilteredFModule> objs = {m0, m1};
  SUBCASE("coequalizer of id and id") {
    ColimitProbe p{"coeq(id,id)", {0, 0}, {{0, 1, mat(W, 1, 1, {1})}, {0, 1, mat(W, 1, 1, {1})}}};
    MFColimitResult r = mf_colimit_probe(objs, p);
    CHECK(r.verdict == Verdict::Verified);
    REQUIRE(r.colimit);
    CHECK(r.colimit->M.rank() == 1);
    CHECK(mf_hom(*r.colimit, m0).module.rank() == 1);
  }
  SUBCASE("coequalizer of 0 and id") {
    ColimitProbe p{"coeq(0,id)", {0, 0}, {{0, 1, mat(W, 1, 1, {0})}, {0, 1, mat(W, 1, 1, {1})}}};
    MFColimitResult r = mf_colimit_probe(objs, p);
    CHECK(r.verdict == Verdict::Verified);
    CHECK(r.fiber.rank() == 0);
  }
  SUBCASE("coproduct") {
    ColimitProbe p{"M(0)+M(1)", {0, 1}, {}};
    MFColimitResult r = mf_colimit_probe(objs, p);
    CHECK(r.verdict == Verdict::Verified);
    REQUIRE(r.colimit);
    CHECK(mf_hom(*r.colimit, *r.colimit).module.length() == 2);
  }
  SUBCASE("arrow that is not a morphism") {
    ColimitProbe p{"bad", {0, 1}, {{0, 1, mat(W, 1, 1, {1})}}};
    CHECK_THROWS_AS(mf_colimit_probe(objs, p), InvalidArgument);
  }
  SUBCASE("cokernel of p is not free") {
    AlgebraSpec z4 = AlgebraSpec::make(2, 2, 1);
    std::vector<FilteredFModule> t = {tate(z4, 0)};
    ColimitProbe p{"coker(2)", {0, 0},
                   {{0, 1, mat(z4.B(), 1, 1, {2})}, {0, 1, mat(z4.B(), 1, 1, {0})}}};
    MFColimitResult r = mf_colimit_probe(t, p);
    CHECK(r.verdict == Verdict::NotApplicable);
    CHECK(r.fiber.exps() == std::vector<int>{1});
  }
  SUBCASE("non-FL object") {
    std::vector<FilteredFModule> t = {mf_with_phi(m0, {Matrix(W, 1, 1)})};
    ColimitProbe p{"X", {0}, {}};
    CHECK(mf_colimit_probe(t, p).verdict == Verdict::Refuted);
  }
}
