#include "doctest.h"

#include "tforge/algebra.hpp"
#include "tforge/error.hpp"
#include "tforge/verify/oracles.hpp"

using namespace tforge;

namespace {

Matrix mat(const RingPtr& r, std::vector<std::vector<std::string>> rows) {
  return Matrix::from_rows(r, rows);
}

// (X (x) Y) (x) Z -> X (x) Y (x) Z through the raw coordinates.
ModuleMap assoc_left(const BTensor& xy, const BTensor& xy_z, const BTensor& xyz) {
  const RingPtr& R = xy.factors.front().ring();
  Matrix lift = kron(xy.q.section, Matrix::identity(R, xyz.factors[2].rank()));
  return ModuleMap(xy_z.module(), xyz.module(), xyz.q.proj * lift * xy_z.q.section);
}

}  // namespace

TEST_CASE("bimodule_make examples") {
  AlgebraSpec f4 = AlgebraSpec::make(2, 1, 2);
  Bimodule reg = regular_bimodule(f4);
  CHECK(check_bimodule(f4, reg.carrier, reg.left_x.mat(), reg.right_x.mat()).ok());

  AlgebraSpec z8 = AlgebraSpec::make(2, 3, 1);
  FinModule m(z8.R(), {3, 1});
  Matrix id = Matrix::identity(z8.R(), 2);
  CHECK(check_bimodule(z8, m, id, id).ok());

  AlgebraSpec f2 = AlgebraSpec::make(2, 1, 1);
  FinModule c = FinModule::free(f2.R(), 2);
  BimoduleCheck bad = check_bimodule(f2, c, mat(f2.R(), {{"0", "1"}, {"0", "0"}}),
                                     mat(f2.R(), {{"0", "0"}, {"1", "0"}}));
  CHECK(bad.fault == BimoduleFault::ModulusViolation);
  CHECK_THROWS_AS(bimodule_make(f2, c, mat(f2.R(), {{"0", "1"}, {"0", "0"}}), id),
                  BimoduleError);

  // Commuting failure once the modulus holds: two different actions of x
  // over F_4 that satisfy x^2 + x + 1 = 0 but do not commute.
  Matrix x = f4.x_action(2);
  Matrix swap = mat(f4.R(), {{"0", "0", "1", "0"},
                             {"0", "0", "0", "1"},
                             {"1", "0", "0", "0"},
                             {"0", "1", "0", "0"}});
  Matrix y = swap * x * swap;
  // Conjugating by a shear that is not B-linear.
  Matrix t = mat(f4.R(), {{"1", "0", "1", "0"},
                          {"0", "1", "0", "0"},
                          {"0", "0", "1", "0"},
                          {"0", "0", "0", "1"}});
  Matrix z = t * x * inverse(t);
  BimoduleCheck nc = check_bimodule(f4, FinModule::free(f4.R(), 4), x, z);
  CHECK(nc.fault == BimoduleFault::NonCommutingActions);
  CHECK(check_bimodule(f4, FinModule::free(f4.R(), 4), x, y).ok());
}

TEST_CASE("tensor over B examples and oracle") {
  AlgebraSpec f4 = AlgebraSpec::make(2, 1, 2);
  BModule b = free_bmodule(f4, 1);
  TensorModule raw = tensor_over_ring(b.carrier, b.carrier);
  CHECK(raw.module.rank() == 4);
  BTensor bb = b_tensor(f4, b, b);
  CHECK(bb.module().rank() == 2);
  CHECK(oracle::b_tensor_size(f4, b, b) == bb.module().size());

  for (auto alg : {AlgebraSpec::make(2, 2, 2), AlgebraSpec::make(2, 1, 2),
                   AlgebraSpec::make(2, 3, 1), AlgebraSpec::make(3, 1, 2)}) {
    CAPTURE(alg.to_string());
    BModule y = free_bmodule(alg, 2);
    BModule u = free_bmodule(alg, 1);
    BTensor by = b_tensor(alg, u, y);
    ModuleMap lu = left_unit(alg, by, y);
    CHECK(is_isomorphism(lu));
    BTensor yb = b_tensor(alg, y, u);
    CHECK(is_isomorphism(right_unit(alg, yb, y)));
    if (by.raw_size() <= 8) {
      CHECK(oracle::b_tensor_size(alg, u, y) == by.module().size());
    }
    // Associativity for X = Y = Z = B^1 and a torsion middle factor.
    FinModule tors(alg.R(), std::vector<int>(static_cast<std::size_t>(alg.degree()), 1));
    BModule t{tors, ModuleMap(tors, tors, alg.x_action(1))};
    for (const BModule* mid : {&u, &t}) {
      BTensor xy = b_tensor(alg, u, *mid);
      BModule xy_right{xy.module(), b_tensor_action(xy, 1, mid->act_x.mat())};
      BTensor xy_z = b_tensor(alg, xy_right, u);
      BTensor xyz = b_tensor(alg, {u.carrier, mid->carrier, u.carrier},
                             {{u.act_x.mat(), mid->act_x.mat()},
                              {mid->act_x.mat(), u.act_x.mat()}});
      CHECK(is_isomorphism(assoc_left(xy, xy_z, xyz)));
    }
  }
}

TEST_CASE("tensor from B-bases agrees with the presentation") {
  for (auto alg : {AlgebraSpec::make(2, 2, 2), AlgebraSpec::make(2, 1, 2),
                   AlgebraSpec::make(3, 1, 3)}) {
    CAPTURE(alg.to_string());
    const RingPtr& R = alg.R();
    BModule u = free_bmodule(alg, 1);
    BModule v = free_bmodule(alg, 2);
    FinModule tors(R, std::vector<int>(static_cast<std::size_t>(alg.degree()), 1));
    BModule t{tors, ModuleMap(tors, tors, alg.x_action(1))};
    // B^2 with x acting through a change of basis, so the B-basis is not
    // the standard one.
    Matrix g = Matrix::identity(R, v.carrier.rank());
    g(0, v.carrier.rank() - 1) = R->one();
    BModule w{v.carrier, ModuleMap(v.carrier, v.carrier, g * v.act_x.mat() * inverse(g))};
    for (const BModule* first : {&u, &t, &w})
      for (const BModule* mid : {&v, &w}) {
        std::vector<FinModule> fs{first->carrier, mid->carrier, u.carrier};
        std::vector<std::pair<Matrix, Matrix>> sl{{first->act_x.mat(), mid->act_x.mat()},
                                                  {mid->act_x.mat(), u.act_x.mat()}};
        BTensor fast = b_tensor(alg, fs, sl);
        BTensor slow = b_tensor_presented(R, fs, sl);
        REQUIRE(fast.raw_exps == slow.raw_exps);
        CHECK(fast.module() == slow.module());
        CHECK(fast.q.proj * fast.q.section == Matrix::identity(R, fast.module().rank()));
        // The comparison map through raw coordinates is an isomorphism.
        ModuleMap cmp(slow.module(), fast.module(), fast.q.proj * slow.q.section);
        CHECK(is_isomorphism(cmp));
        // Relations die in the fast coordinates.
        for (std::size_t s = 0; s < sl.size(); ++s) {
          std::vector<Matrix> lhs, rhs;
          for (std::size_t i = 0; i < fs.size(); ++i) {
            Matrix id = Matrix::identity(R, fs[i].rank());
            lhs.push_back(i == s ? sl[s].first : id);
            rhs.push_back(i == s + 1 ? sl[s].second : id);
          }
          Matrix rel = kron(kron(lhs[0], lhs[1]), lhs[2]) - kron(kron(rhs[0], rhs[1]), rhs[2]);
          Matrix img = fast.q.proj * rel;
          for (std::size_t j = 0; j < img.cols(); ++j) CHECK(fast.module().is_zero(img.column(j)));
        }
      }
  }
}

TEST_CASE("b_dual examples") {
  AlgebraSpec gr = AlgebraSpec::make(2, 2, 2);
  BDual d1 = b_dual(gr, free_bmodule(gr, 1));
  CHECK(d1.rank == 1);
  BModule b2 = free_bmodule(gr, 2);
  BDual d2 = b_dual(gr, b2);
  CHECK(d2.rank == 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      Vector xi = gr.restrict(Vector{i == 0 ? gr.B()->one() : gr.B()->zero(),
                                     i == 1 ? gr.B()->one() : gr.B()->zero()});
      Vector ej = gr.restrict(Vector{j == 0 ? gr.B()->one() : gr.B()->zero(),
                                     j == 1 ? gr.B()->one() : gr.B()->zero()});
      // e_j in carrier coordinates, via the greedy basis.
      Vector m = d2.basis.to_carrier.apply(ej);
      CHECK(d2.evaluate(gr, xi, m) == (i == j ? gr.B()->one() : gr.B()->zero()));
    }
  // Double dual map m |-> (xi |-> xi(m)) is an isomorphism.
  CHECK(is_invertible(d2.basis.from_carrier));

  AlgebraSpec z8 = AlgebraSpec::make(2, 3, 1);
  FinModule z2(z8.R(), {1});
  BModule m{z2, ModuleMap::identity(z2)};
  CHECK_THROWS_AS(b_dual(z8, m), NonFree);
}

TEST_CASE("b_basis on a twisted free module") {
  AlgebraSpec gr = AlgebraSpec::make(2, 2, 2);
  // B^2 presented in a scrambled R-basis.
  Matrix scramble = mat(gr.R(), {{"1", "2", "0", "1"},
                                 {"0", "1", "0", "0"},
                                 {"0", "0", "3", "0"},
                                 {"0", "0", "0", "1"}});
  Matrix act = scramble * gr.x_action(2) * inverse(scramble);
  FinModule c = FinModule::free(gr.R(), 4);
  BModule m{c, ModuleMap(c, c, act)};
  auto basis = b_basis(gr, m);
  REQUIRE(basis);
  CHECK(basis->rank == 2);
  // In the found basis the action is the standard one.
  CHECK(basis->from_carrier * act * basis->to_carrier == gr.x_action(2));
}
