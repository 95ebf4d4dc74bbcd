#pragma once

#include <cstdint>
#include <random>

#include "tforge/diagram.hpp"
#include "tforge/mf.hpp"

namespace tforge::gen {

Matrix random_matrix(const RingPtr& ring, std::size_t rows, std::size_t cols,
                     std::mt19937_64& rng);

/// Up to max_objects objects of rank 1..max_rank and 0..2 random generators
/// per ordered pair (identities not included).
DiagramCategory random_diagram(const AlgebraSpec& alg, std::mt19937_64& rng,
                               std::size_t max_objects, std::size_t max_rank);

Matrix random_invertible(const RingPtr& ring, std::size_t n, std::mt19937_64& rng);

/// A Fontaine-Laffaille object on (W/p^e)^r, r in 1..max_rank, built from an
/// adapted basis with weights in 0..max_weight and a random unit matrix,
/// then moved by a random change of basis.  e = 0 means e = n.
FilteredFModule random_mf(const AlgebraSpec& alg, std::mt19937_64& rng, std::size_t max_rank,
                          int max_weight, int e = 0);

}  // namespace tforge::gen
