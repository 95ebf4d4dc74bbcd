#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tforge/ring.hpp"

namespace tforge {

using Vector = std::vector<RingElem>;

/// Dense row-major matrix over a chain ring.
class Matrix {
 public:
  Matrix() = default;
  Matrix(RingPtr ring, std::size_t rows, std::size_t cols);

  static Matrix identity(RingPtr ring, std::size_t n);
  static Matrix from_columns(RingPtr ring, std::size_t rows,
                             const std::vector<Vector>& columns);
  /// Parses nested integer/polynomial literals given as a row list.
  static Matrix from_rows(RingPtr ring,
                          const std::vector<std::vector<std::string>>& rows);
  static Matrix diagonal(RingPtr ring, const Vector& diag);

  const RingPtr& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  RingElem& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const RingElem& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  Vector column(std::size_t j) const;
  Vector row(std::size_t i) const;
  void set_column(std::size_t j, const Vector& v);

  bool is_zero() const;
  Matrix transpose() const;
  Matrix scaled(const RingElem& s) const;
  /// Rows [r0, r0 + nr) and columns [c0, c0 + nc).
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr,
               std::size_t nc) const;
  Matrix select_columns(const std::vector<std::size_t>& idx) const;
  Matrix select_rows(const std::vector<std::size_t>& idx) const;
  /// Entrywise Frobenius.
  Matrix frobenius() const;

  Vector apply(const Vector& v) const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix& a, const Matrix& b);

  std::string to_string() const;

 private:
  RingPtr ring_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<RingElem> data_;
};

Matrix hstack(const Matrix& a, const Matrix& b);
Matrix vstack(const Matrix& a, const Matrix& b);
/// Block-diagonal sum.
Matrix block_diag(const Matrix& a, const Matrix& b);
/// Kronecker product, row-major multi-index order (i_a, i_b).
Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(RingPtr ring, const Vector& a, const Vector& b);
/// (A_0 (x) ... (x) A_{k-1}) * cols without forming the Kronecker product.
Matrix kron_apply(const std::vector<Matrix>& factors, const Matrix& cols);

Vector add(const ChainRing& r, const Vector& a, const Vector& b);
Vector sub(const ChainRing& r, const Vector& a, const Vector& b);
Vector scale(const ChainRing& r, const RingElem& s, const Vector& a);
bool is_zero(const Vector& v);
Vector unit_vector(RingPtr ring, std::size_t n, std::size_t i);

/**
 * Diagonal normal form over a chain ring: A = U * D * V with U, V
 * invertible and D_ii = p^{invariants[i]}, invariants nondecreasing.
 * An invariant equal to n encodes a zero diagonal entry.  The inverses of
 * U and V are kept alongside since kernels and cokernels need them.
 */
struct SmithForm {
  Matrix U;
  Matrix D;
  Matrix V;
  Matrix U_inv;
  Matrix V_inv;
  std::vector<int> invariants;  // length min(rows, cols)
};

/// Pivot rule: least valuation, ties broken row-major.  Deterministic.
SmithForm smith(const Matrix& a);

/// Only the row transformations (U, U_inv) and the invariants; V and V_inv
/// are left empty.  Cheaper when only the column span matters.
SmithForm smith_left(const Matrix& a);

/// Columns generate {v : A v = 0} as an R-module.
Matrix kernel(const Matrix& a);

/// Cokernel R^rows / (column span of A) in canonical form.
struct Cokernel {
  std::vector<int> exps;  // descending; summand R/p^e
  Matrix proj;            // exps.size() x rows, canonical coordinates
  Matrix section;         // rows x exps.size(), lifts of canonical generators
};
Cokernel cokernel(const Matrix& a);

/// Reduced generating set of the column span.
Matrix image_span(const Matrix& a);

/// Some x with A x = b, if one exists.
std::optional<Vector> solve(const Matrix& a, const Vector& b);

bool is_invertible(const Matrix& a);
/// Inverse of a square invertible matrix; throws NonUnit otherwise.
Matrix inverse(const Matrix& a);

}  // namespace tforge
