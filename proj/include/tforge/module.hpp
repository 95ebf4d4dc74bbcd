#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tforge/matrix.hpp"

namespace tforge {

/**
 * Finite module over a chain ring in canonical form, the direct sum of the
 * cyclic modules R/p^{e_i} with e_1 >= e_2 >= ... >= 1.
 *
 * Elements are coordinate vectors; coordinate i is only meaningful modulo
 * p^{e_i} and `reduce` picks the canonical representative.
 */
class FinModule {
 public:
  FinModule() = default;
  /// Throws InvalidArgument unless exps is descending with entries in 1..n.
  FinModule(RingPtr ring, std::vector<int> exps);

  static FinModule free(RingPtr ring, std::size_t rank);
  static FinModule zero(RingPtr ring) { return FinModule(std::move(ring), {}); }

  const RingPtr& ring() const { return ring_; }
  const std::vector<int>& exps() const { return exps_; }
  std::size_t rank() const { return exps_.size(); }
  int exp(std::size_t i) const { return exps_[i]; }

  bool is_zero() const { return exps_.empty(); }
  bool is_free() const;
  /// Composition length over R, the sum of the exponents.
  int length() const;
  /// Length as an abelian p-group (f times length()).
  int prime_length() const;
  /// Number of elements; throws BudgetExceeded past 2^62.
  std::uint64_t size() const;

  Vector reduce(const Vector& v) const;
  bool equal(const Vector& a, const Vector& b) const;
  bool is_zero(const Vector& v) const;
  Vector zero_vector() const { return Vector(rank(), RingElem{}); }
  Vector generator(std::size_t i) const;

  /// Rank-by-rank diagonal of p^{e_i}; its columns generate the relations
  /// when coordinates are read in R^rank.
  Matrix relation_matrix() const;

  std::string to_string() const;

  friend bool operator==(const FinModule& a, const FinModule& b);

 private:
  RingPtr ring_;
  std::vector<int> exps_;
};

/// R-linear map given by its matrix on canonical generators.
class ModuleMap {
 public:
  ModuleMap() = default;
  /// Checks shape and well-definedness (val(m_ji) >= d_j - e_i); entries
  /// are reduced modulo p^{d_j}.
  ModuleMap(FinModule src, FinModule dst, Matrix mat);

  static ModuleMap identity(const FinModule& m);
  static ModuleMap zero(const FinModule& src, const FinModule& dst);

  const FinModule& src() const { return src_; }
  const FinModule& dst() const { return dst_; }
  const Matrix& mat() const { return mat_; }

  Vector apply(const Vector& v) const;
  bool is_zero() const { return mat_.is_zero(); }

  friend bool operator==(const ModuleMap& a, const ModuleMap& b);

 private:
  FinModule src_;
  FinModule dst_;
  Matrix mat_;
};

/// True iff every entry satisfies val(m_ji) >= d_j - e_i.
bool is_well_defined(const FinModule& src, const FinModule& dst,
                     const Matrix& mat);

ModuleMap compose(const ModuleMap& g, const ModuleMap& f);  // g after f
ModuleMap add(const ModuleMap& a, const ModuleMap& b);
ModuleMap sub(const ModuleMap& a, const ModuleMap& b);
ModuleMap scale(const RingElem& s, const ModuleMap& a);

/// A quotient (or cokernel) in canonical form.  `proj` maps the ambient
/// coordinates onto canonical coordinates; `section` lifts each canonical
/// generator back (a set-theoretic lift, not a module map in general).
struct Quotient {
  FinModule module;
  Matrix proj;
  Matrix section;
};

/// R^k / (column span of P), for P with k rows.
Quotient module_from_presentation(const Matrix& P);

/// (Sum of R/p^{raw_exps[i]}) / span(relations).  raw_exps may be unsorted
/// and contain n (free) entries; relations has raw_exps.size() rows.
Quotient present(const RingPtr& ring, const std::vector<int>& raw_exps,
                 const Matrix& relations);

/// M / (submodule generated by the columns of gens).
Quotient quotient(const FinModule& m, const Matrix& gens);

/// The submodule generated by the columns of gens, with its inclusion.
struct Submodule {
  FinModule module;
  ModuleMap inclusion;
};
Submodule submodule(const FinModule& m, const Matrix& gens);

/// Columns generating {v in M : g v = 0} in M's coordinates.
Matrix kernel_generators(const ModuleMap& g);

Submodule map_kernel(const ModuleMap& g);
Submodule map_image(const ModuleMap& g);
struct CokernelMap {
  FinModule module;
  ModuleMap proj;
  Matrix section;
};
CokernelMap map_cokernel(const ModuleMap& g);

bool is_injective(const ModuleMap& g);
bool is_surjective(const ModuleMap& g);
bool is_isomorphism(const ModuleMap& g);

/// A linear preimage of v under g, if one exists.
std::optional<Vector> preimage(const ModuleMap& g, const Vector& v);

/// Hom_R(M, N) with its standard generators: generator (i, j) sends
/// M-generator i to p^{max(0, d_j - e_i)} times N-generator j and has
/// order min(e_i, d_j).
struct HomModule {
  FinModule src;
  FinModule dst;
  FinModule module;
  /// Canonical basis position -> (j, i, shift) of the generating map.
  struct Slot {
    std::size_t j;
    std::size_t i;
    int shift;
  };
  std::vector<Slot> slots;

  ModuleMap basis_map(std::size_t k) const;
  std::vector<ModuleMap> basis() const;
  /// Coordinates of a map in `module`.
  Vector coords(const ModuleMap& f) const;
  Vector coords(const Matrix& mat) const;
  ModuleMap from_coords(const Vector& c) const;
  /// Matrix of f flattened row-major (dst x src), as an R-linear function
  /// of the coordinates: column k is basis_map(k) flattened.
  Matrix flatten_matrix() const;
};
HomModule hom_module(const FinModule& m, const FinModule& n);

/// M (x)_R N with exps min(e_i, d_j).  The raw index of the pure tensor
/// g_i (x) h_j is i * rank(N) + j; `order[k]` is the raw index sitting at
/// canonical position k and `position` is its inverse.
struct TensorModule {
  FinModule left;
  FinModule right;
  FinModule module;
  std::vector<std::size_t> order;
  std::vector<std::size_t> position;

  Vector pure(const Vector& x, const Vector& y) const;
  /// Converts a raw Kronecker-indexed vector into canonical coordinates.
  Vector from_raw(const Vector& raw) const;
  Vector to_raw(const Vector& canonical) const;
  /// raw -> canonical and canonical -> raw as permutation matrices.
  Matrix from_raw_matrix() const;
  Matrix to_raw_matrix() const;
};
TensorModule tensor_over_ring(const FinModule& m, const FinModule& n);
/// f (x) g between tensor products.
ModuleMap tensor_maps(const TensorModule& src, const TensorModule& dst,
                      const ModuleMap& f, const ModuleMap& g);

/// Dual Hom(M, R); generator i is the functional sending generator i of M
/// to p^{n - e_i} (so the dual basis when M is free).
struct DualModule {
  FinModule src;
  FinModule module;
  RingElem evaluate(const Vector& xi, const Vector& x) const;
};
DualModule dual(const FinModule& m);

bool is_projective(const FinModule& m);

/// Direct sum with its structure maps.  The summands' generators are
/// interleaved by exponent, so injections are permutation-like.
struct DirectSum {
  FinModule module;
  std::vector<ModuleMap> injections;
  std::vector<ModuleMap> projections;
};
DirectSum direct_sum(const std::vector<FinModule>& parts);

/// Lexicographic enumeration of the elements of M in canonical
/// coordinates.  Restartable: each cursor is independent.
class ElementCursor {
 public:
  explicit ElementCursor(const FinModule& m);
  bool done() const { return done_; }
  const Vector& value() const { return current_; }
  void next();

 private:
  const FinModule* m_;
  std::vector<std::uint64_t> digits_;
  std::vector<std::uint64_t> limits_;
  Vector current_;
  bool done_ = false;
};

/// All elements; throws BudgetExceeded if |M| > budget.
std::vector<Vector> elements(const FinModule& m, std::uint64_t budget);

}  // namespace tforge
