#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tforge/algebra.hpp"

namespace tforge {

/**
 * Finite concrete linear diagram category with its fiber functor.
 *
 * Object k has fiber B^{rank_k}.  Morphisms k -> l are the R-linear
 * combinations of the listed B-matrices (rank_l x rank_k); a morphism is
 * its matrix, so the fiber functor is faithful by construction.
 */
struct DiagramObject {
  std::string name;
  std::size_t rank = 0;
};

class DiagramCategory {
 public:
  DiagramCategory() = default;
  explicit DiagramCategory(AlgebraSpec alg) : alg_(std::move(alg)) {}

  const AlgebraSpec& alg() const { return alg_; }
  std::size_t size() const { return objects_.size(); }
  const DiagramObject& object(std::size_t k) const { return objects_[k]; }
  const std::vector<DiagramObject>& objects() const { return objects_; }
  std::optional<std::size_t> find(const std::string& name) const;

  std::size_t add_object(std::string name, std::size_t rank);
  /// Appends a spanning morphism; the shape is checked.
  void add_hom(std::size_t src, std::size_t dst, Matrix bmat);
  void set_homs(std::size_t src, std::size_t dst, std::vector<Matrix> gens);
  const std::vector<Matrix>& homs(std::size_t src, std::size_t dst) const;

  /// R-rank of the fiber of object k.
  std::size_t fiber_rank(std::size_t k) const;
  FinModule fiber(std::size_t k) const;
  BModule fiber_module(std::size_t k) const;

 private:
  AlgebraSpec alg_;
  std::vector<DiagramObject> objects_;
  std::vector<std::vector<std::vector<Matrix>>> homs_;  // [src][dst]
};

/// R-coordinates of a B-matrix, entries row-major, f coordinates each.
Vector flatten(const AlgebraSpec& alg, const Matrix& bmat);
Matrix unflatten(const AlgebraSpec& alg, const Vector& v, std::size_t rows,
                 std::size_t cols);
/// Columns: the flattened generators.
Matrix span_matrix(const AlgebraSpec& alg, const std::vector<Matrix>& gens,
                   std::size_t rows, std::size_t cols);
/// Coefficients c with sum c_i gens_i = F, if F lies in the R-span.
std::optional<Vector> span_coefficients(const AlgebraSpec& alg,
                                        const std::vector<Matrix>& gens,
                                        const Matrix& F);
bool in_span(const AlgebraSpec& alg, const std::vector<Matrix>& gens,
             const Matrix& F);
Matrix span_combination(const AlgebraSpec& alg, const std::vector<Matrix>& gens,
                        const Vector& coeffs, std::size_t rows, std::size_t cols);
/// The span as an R-module (a submodule of the flattened matrices).
Submodule span_module(const AlgebraSpec& alg, const std::vector<Matrix>& gens,
                      std::size_t rows, std::size_t cols);
/// Every element of the span, without repeats.  Throws BudgetExceeded.
std::vector<Matrix> span_elements(const AlgebraSpec& alg,
                                  const std::vector<Matrix>& gens,
                                  std::size_t rows, std::size_t cols,
                                  std::uint64_t budget);

enum class DiagramFault { None, ShapeMismatch, MissingIdentity, NotClosed };
const char* to_string(DiagramFault f);

/// First violation found: for NotClosed, homs(mid,dst)[second] composed
/// with homs(src,mid)[first] leaves the span of homs(src,dst).
struct DiagramCheck {
  DiagramFault fault = DiagramFault::None;
  std::size_t src = 0;
  std::size_t mid = 0;
  std::size_t dst = 0;
  std::size_t first = 0;
  std::size_t second = 0;
  std::string message;
  bool ok() const { return fault == DiagramFault::None; }
};

DiagramCheck validate(const DiagramCategory& d);

/// Adds identities and composites until every span is closed.  Existing
/// generators are kept in order and only missing elements are appended, so
/// a closed category comes back unchanged.
DiagramCategory hom_closure(const DiagramCategory& d);

/// One object with fiber B and all of Hom_B(B, B) = B as morphisms.
DiagramCategory trivial_diagram(const AlgebraSpec& alg);
/// g objects with fiber B and only the scalar multiples of identities.
DiagramCategory grouplike_diagram(const AlgebraSpec& alg, std::size_t g);
/// One object with fiber B^r and morphisms R * id.
DiagramCategory comatrix_diagram(const AlgebraSpec& alg, std::size_t r);
/// One object with fiber B^r and all B-linear endomorphisms.
DiagramCategory full_endomorphism_diagram(const AlgebraSpec& alg, std::size_t r);

}  // namespace tforge
