#include "tforge/verify/generators.hpp"

#include <algorithm>

namespace tforge::gen {

Matrix random_matrix(const RingPtr& ring, std::size_t rows, std::size_t cols,
                     std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> pick(0, ring->size() - 1);
  Matrix m(ring, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = ring->decode(pick(rng));
  return m;
}

DiagramCategory random_diagram(const AlgebraSpec& alg, std::mt19937_64& rng,
                               std::size_t max_objects, std::size_t max_rank) {
  std::uniform_int_distribution<std::size_t> nobj(1, max_objects);
  std::uniform_int_distribution<std::size_t> rank(1, max_rank);
  std::uniform_int_distribution<int> count(0, 2);
  DiagramCategory d(alg);
  const std::size_t n = nobj(rng);
  for (std::size_t k = 0; k < n; ++k) d.add_object("A" + std::to_string(k), rank(rng));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      const int c = count(rng);
      for (int i = 0; i < c; ++i)
        d.add_hom(k, l, random_matrix(alg.B(), d.object(l).rank, d.object(k).rank, rng));
    }
  return d;
}

Matrix random_invertible(const RingPtr& ring, std::size_t n, std::mt19937_64& rng) {
  for (;;) {
    Matrix m = random_matrix(ring, n, n, rng);
    if (is_invertible(m)) return m;
  }
}

FilteredFModule random_mf(const AlgebraSpec& alg, std::mt19937_64& rng, std::size_t max_rank,
                          int max_weight, int e) {
  const RingPtr& W = alg.B();
  if (e <= 0) e = W->n();
  std::uniform_int_distribution<std::size_t> rank(1, max_rank);
  std::uniform_int_distribution<int> weight(0, max_weight);
  const std::size_t r = rank(rng);
  std::vector<int> w(r);
  for (int& x : w) x = weight(rng);
  std::sort(w.rbegin(), w.rend());
  Matrix G = random_invertible(W, r, rng);
  Matrix U = random_invertible(W, r, rng);
  Matrix GU = G * U;
  FilteredFModule x;
  x.alg = alg;
  x.M = FinModule(W, std::vector<int>(r, e));
  x.lo = 0;
  for (int i = 0; i <= w.front(); ++i) {
    std::size_t k = 0;
    while (k < r && w[k] >= i) ++k;
    Matrix incl(W, r, k), phi(W, r, k);
    for (std::size_t c = 0; c < k; ++c) {
      const RingElem s = W->p_power(w[c] - i);
      for (std::size_t j = 0; j < r; ++j) {
        incl(j, c) = W->reduce_mod_p_power(G(j, c), e);
        phi(j, c) = W->reduce_mod_p_power(W->mul(s, GU(j, c)), e);
      }
    }
    x.fil.push_back({FinModule(W, std::vector<int>(k, e)), std::move(incl)});
    x.phi.push_back(std::move(phi));
  }
  return x;
}

}  // namespace tforge::gen
