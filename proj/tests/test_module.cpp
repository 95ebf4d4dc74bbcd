#include "doctest.h"

#include <random>

#include "tforge/error.hpp"
#include "tforge/module.hpp"
#include "tforge/verify/oracles.hpp"

using namespace tforge;

namespace {

Matrix mat(const RingPtr& r, std::vector<std::vector<std::string>> rows) {
  return Matrix::from_rows(r, rows);
}

std::vector<FinModule> small_modules(const RingPtr& r, std::size_t max_rank) {
  std::vector<FinModule> out{FinModule::zero(r)};
  std::vector<std::vector<int>> frontier{{}};
  for (std::size_t k = 0; k < max_rank; ++k) {
    std::vector<std::vector<int>> next;
    for (const auto& e : frontier) {
      int top = e.empty() ? r->n() : e.back();
      for (int x = top; x >= 1; --x) {
        auto f = e;
        f.push_back(x);
        next.push_back(f);
        out.emplace_back(r, f);
      }
    }
    frontier = next;
  }
  return out;
}

Matrix random_map(const FinModule& m, const FinModule& n, std::mt19937_64& rng) {
  const ChainRing& r = *m.ring();
  std::uniform_int_distribution<std::uint64_t> d(0, r.size() - 1);
  Matrix a(m.ring(), n.rank(), m.rank());
  for (std::size_t j = 0; j < n.rank(); ++j)
    for (std::size_t i = 0; i < m.rank(); ++i)
      a(j, i) = r.mul(r.decode(d(rng)), r.p_power(std::max(0, n.exp(j) - m.exp(i))));
  return a;
}

}  // namespace

TEST_CASE("module_from_presentation examples") {
  auto z8 = ChainRing::make(2, 3, 1);
  CHECK(module_from_presentation(Matrix(z8, 2, 0)).module.exps() ==
        std::vector<int>{3, 3});
  CHECK(module_from_presentation(Matrix(z8, 2, 1)).module.exps() ==
        std::vector<int>{3, 3});
  CHECK(module_from_presentation(mat(z8, {{"2"}})).module.exps() ==
        std::vector<int>{1});
  Quotient q = module_from_presentation(mat(z8, {{"4", "0"}, {"0", "1"}}));
  CHECK(q.module.exps() == std::vector<int>{2});
  CHECK(q.module.size() == 4);
}

TEST_CASE("hom_module examples") {
  auto z8 = ChainRing::make(2, 3, 1);
  FinModule R = FinModule::free(z8, 1);
  FinModule z2(z8, {1}), z4(z8, {2});

  HomModule h = hom_module(R, R);
  CHECK(h.module.exps() == std::vector<int>{3});
  CHECK(h.basis_map(0) == ModuleMap::identity(R));

  h = hom_module(z2, R);
  CHECK(h.module.exps() == std::vector<int>{1});
  CHECK(h.basis_map(0).mat() == mat(z8, {{"4"}}));
  CHECK(oracle::hom_enumerate(z2, R).size() == 2);

  h = hom_module(z4, z2);
  CHECK(h.module.exps() == std::vector<int>{1});
  CHECK(h.basis_map(0).mat() == mat(z8, {{"1"}}));

  CHECK_THROWS_AS(ModuleMap(z2, R, mat(z8, {{"1"}})), InvalidArgument);
  CHECK_THROWS_AS(hom_module(R, FinModule::free(ChainRing::make(3, 1, 1), 1)),
                  RingMismatch);
}

TEST_CASE("tensor, dual and projectivity examples") {
  auto z8 = ChainRing::make(2, 3, 1);
  FinModule z2(z8, {1}), z4(z8, {2});
  TensorModule t = tensor_over_ring(z2, z4);
  CHECK(t.module.exps() == std::vector<int>{1});
  CHECK(oracle::tensor_size(z2, z4) == 2);
  CHECK_FALSE(is_projective(z2));
  CHECK_FALSE(oracle::has_split_surjection(z2));

  FinModule r3 = FinModule::free(z8, 3);
  DualModule d = dual(r3);
  CHECK(d.module == r3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(d.evaluate(r3.generator(i), r3.generator(j)) ==
            (i == j ? z8->one() : z8->zero()));
  // Dual basis identity on every element of a small free module.
  auto z4r = ChainRing::make(2, 2, 1);
  FinModule f2 = FinModule::free(z4r, 2);
  DualModule d2 = dual(f2);
  for (const Vector& x : elements(f2, 1000)) {
    Vector acc = f2.zero_vector();
    for (std::size_t i = 0; i < 2; ++i)
      acc = add(*z4r, acc, scale(*z4r, d2.evaluate(f2.generator(i), x), f2.generator(i)));
    CHECK(f2.equal(acc, x));
  }
}

TEST_CASE("map kernel and cokernel examples") {
  auto z8 = ChainRing::make(2, 3, 1);
  FinModule R = FinModule::free(z8, 1);
  CHECK(map_kernel(ModuleMap::identity(R)).module.is_zero());
  ModuleMap two(R, R, mat(z8, {{"2"}}));
  Submodule k = map_kernel(two);
  CHECK(k.module.exps() == std::vector<int>{1});
  CHECK(k.inclusion.mat() == mat(z8, {{"4"}}));
  CHECK(map_cokernel(two).module.exps() == std::vector<int>{1});
  CHECK(map_image(two).module.exps() == std::vector<int>{2});
  CHECK(is_injective(ModuleMap::identity(R)));
  CHECK_FALSE(is_injective(two));
  CHECK_FALSE(is_surjective(two));
}

TEST_CASE("hom, tensor, kernel, cokernel and projectivity against oracles") {
  std::mt19937_64 rng(4242);
  for (auto [p, n, f] : {std::tuple{2, 3, 1}, {2, 2, 1}, {2, 1, 2}, {3, 1, 1}}) {
    auto r = ChainRing::make(p, n, f);
    auto mods = small_modules(r, r->size() > 4 ? 2 : 3);
    for (const FinModule& m : mods) {
      CAPTURE(m.to_string());
      if (m.rank() <= 2 && m.size() <= 64)
        CHECK(is_projective(m) == oracle::has_split_surjection(m));
      CHECK(oracle::element_set(m).size() == m.size());
      CHECK(elements(m, 1u << 16).size() == m.size());
      for (const FinModule& nn : mods) {
        CAPTURE(nn.to_string());
        // Tensor size.
        TensorModule t = tensor_over_ring(m, nn);
        CHECK(t.module.size() == oracle::tensor_size(m, nn));
        // Hom: every enumerated map has coordinates, and from_coords
        // round-trips; the counts match.
        HomModule h = hom_module(m, nn);
        std::vector<Matrix> all;
        try {
          all = oracle::hom_enumerate(m, nn, 1u << 12);
        } catch (const BudgetExceeded&) {
          continue;
        }
        CHECK(all.size() == h.module.size());
        for (const Matrix& a : all) {
          ModuleMap g(m, nn, a);
          CHECK(h.from_coords(h.coords(g)) == g);
        }
        // Kernel / image / cokernel of a random map.
        ModuleMap g(m, nn, random_map(m, nn, rng));
        Submodule k = map_kernel(g);
        Submodule im = map_image(g);
        std::uint64_t kcount = 0;
        std::set<oracle::Code> image;
        for (const Vector& v : elements(m, 1u << 16)) {
          Vector w = g.apply(v);
          if (nn.is_zero(w)) ++kcount;
          image.insert(oracle::encode(*r, w));
        }
        CHECK(k.module.size() == kcount);
        CHECK(im.module.size() == image.size());
        CHECK(map_cokernel(g).module.size() * image.size() == nn.size());
        CHECK(is_injective(k.inclusion));
        CHECK(compose(g, k.inclusion).is_zero());
        std::vector<Vector> incl_cols;
        for (std::size_t j = 0; j < im.inclusion.mat().cols(); ++j)
          incl_cols.push_back(im.inclusion.mat().column(j));
        CHECK(oracle::module_span(nn, incl_cols) == image);
      }
    }
  }
}

TEST_CASE("direct sum and length additivity") {
  auto gr = ChainRing::make(2, 2, 2);
  FinModule a(gr, {2, 1}), b(gr, {2});
  DirectSum d = direct_sum({a, b});
  CHECK(d.module.exps() == std::vector<int>{2, 2, 1});
  CHECK(d.module.length() == a.length() + b.length());
  CHECK(d.module.prime_length() == 10);
  for (std::size_t t = 0; t < 2; ++t) {
    CHECK(compose(d.projections[t], d.injections[t]) ==
          ModuleMap::identity(t ? b : a));
  }
  CHECK(compose(d.projections[1], d.injections[0]).is_zero());
}

TEST_CASE("element cursor order is lexicographic") {
  auto z4 = ChainRing::make(2, 2, 1);
  FinModule m(z4, {2, 1});
  std::vector<Vector> els = elements(m, 100);
  REQUIRE(els.size() == 8);
  CHECK(els[1] == Vector{z4->zero(), z4->one()});
  CHECK(els[2] == Vector{z4->one(), z4->zero()});
  CHECK_THROWS_AS(elements(m, 4), BudgetExceeded);
}
