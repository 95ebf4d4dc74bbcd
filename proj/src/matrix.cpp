#include "tforge/matrix.hpp"

#include <algorithm>
#include <sstream>

#include "tforge/error.hpp"

namespace tforge {

Matrix::Matrix(RingPtr ring, std::size_t rows, std::size_t cols)
    : ring_(std::move(ring)),
      rows_(rows),
      cols_(cols),
      data_(rows * cols, RingElem{}) {}

Matrix Matrix::identity(RingPtr ring, std::size_t n) {
  Matrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = ring->one();
  return m;
}

Matrix Matrix::from_columns(RingPtr ring, std::size_t rows,
                            const std::vector<Vector>& columns) {
  Matrix m(std::move(ring), rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) {
      throw DimensionMismatch("from_columns: column length mismatch");
    }
    m.set_column(j, columns[j]);
  }
  return m;
}

Matrix Matrix::from_rows(RingPtr ring,
                         const std::vector<std::vector<std::string>>& rows) {
  const std::size_t nc = rows.empty() ? 0 : rows.front().size();
  Matrix m(ring, rows.size(), nc);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != nc) throw DimensionMismatch("ragged matrix literal");
    for (std::size_t j = 0; j < nc; ++j) m(i, j) = ring->parse(rows[i][j]);
  }
  return m;
}

Matrix Matrix::diagonal(RingPtr ring, const Vector& diag) {
  Matrix m(std::move(ring), diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Vector Matrix::row(std::size_t i) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

void Matrix::set_column(std::size_t j, const Vector& v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const RingElem& e) { return e == RingElem{}; });
}

Matrix Matrix::transpose() const {
  Matrix t(ring_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::scaled(const RingElem& s) const {
  Matrix m = *this;
  for (auto& e : m.data_) e = ring_->mul(s, e);
  return m;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                     std::size_t nc) const {
  Matrix m(ring_, nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
  return m;
}

Matrix Matrix::select_columns(const std::vector<std::size_t>& idx) const {
  Matrix m(ring_, rows_, idx.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = (*this)(i, idx[j]);
  return m;
}

Matrix Matrix::select_rows(const std::vector<std::size_t>& idx) const {
  Matrix m(ring_, idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(idx[i], j);
  return m;
}

Matrix Matrix::frobenius() const {
  Matrix m = *this;
  if (ring_ && ring_->f() > 1) {
    for (auto& e : m.data_) e = ring_->frobenius(e);
  }
  return m;
}

Vector Matrix::apply(const Vector& v) const {
  if (v.size() != cols_) throw DimensionMismatch("apply: vector length");
  Vector out(rows_, RingElem{});
  const ChainRing& r = *ring_;
  for (std::size_t i = 0; i < rows_; ++i) {
    RingElem acc{};
    for (std::size_t j = 0; j < cols_; ++j) {
      const RingElem& a = (*this)(i, j);
      if (a == RingElem{} || v[j] == RingElem{}) continue;
      acc = r.add(acc, r.mul(a, v[j]));
    }
    out[i] = acc;
  }
  return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) {
    throw DimensionMismatch("matrix product " + std::to_string(a.rows_) + "x" +
                            std::to_string(a.cols_) + " * " +
                            std::to_string(b.rows_) + "x" +
                            std::to_string(b.cols_));
  }
  RingPtr ring = a.ring_ ? a.ring_ : b.ring_;
  Matrix c(ring, a.rows_, b.cols_);
  if (!ring) return c;
  const ChainRing& r = *ring;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const RingElem& aik = a(i, k);
      if (aik == RingElem{}) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const RingElem& bkj = b(k, j);
        if (bkj == RingElem{}) continue;
        c(i, j) = r.add(c(i, j), r.mul(aik, bkj));
      }
    }
  }
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    throw DimensionMismatch("matrix sum shape");
  }
  Matrix c = a;
  for (std::size_t k = 0; k < c.data_.size(); ++k)
    c.data_[k] = a.ring_->add(a.data_[k], b.data_[k]);
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    throw DimensionMismatch("matrix difference shape");
  }
  Matrix c = a;
  for (std::size_t k = 0; k < c.data_.size(); ++k)
    c.data_[k] = a.ring_->sub(a.data_[k], b.data_[k]);
  return c;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) os << ",";
    os << "[";
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) os << ",";
      os << ring_->format((*this)(i, j));
    }
    os << "]";
  }
  os << "]";
  return os.str();
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("hstack rows");
  RingPtr ring = a.ring() ? a.ring() : b.ring();
  Matrix m(ring, a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
  }
  return m;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw DimensionMismatch("vstack cols");
  RingPtr ring = a.ring() ? a.ring() : b.ring();
  Matrix m(ring, a.rows() + b.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) m(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i) m(a.rows() + i, j) = b(i, j);
  }
  return m;
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
  RingPtr ring = a.ring() ? a.ring() : b.ring();
  Matrix m(ring, a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  RingPtr ring = a.ring() ? a.ring() : b.ring();
  Matrix m(ring, a.rows() * b.rows(), a.cols() * b.cols());
  const ChainRing& r = *ring;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const RingElem& aij = a(i, j);
      if (aij == RingElem{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) {
          const RingElem& bkl = b(k, l);
          if (bkl == RingElem{}) continue;
          m(i * b.rows() + k, j * b.cols() + l) = r.mul(aij, bkl);
        }
    }
  return m;
}

Matrix kron_apply(const std::vector<Matrix>& factors, const Matrix& cols) {
  if (factors.empty()) throw InvalidArgument("kron_apply of no factors");
  const RingPtr& ring = factors.front().ring();
  const ChainRing& r = *ring;
  const std::size_t k = factors.size();
  std::vector<std::size_t> dims(k);
  std::size_t in = 1, out_rows = 1;
  for (std::size_t s = 0; s < k; ++s) {
    dims[s] = factors[s].cols();
    in *= dims[s];
    out_rows *= factors[s].rows();
  }
  if (cols.rows() != in) throw DimensionMismatch("kron_apply: row count");
  Matrix out(ring, out_rows, cols.cols());
  for (std::size_t c = 0; c < cols.cols(); ++c) {
    Vector cur = cols.column(c);
    std::vector<std::size_t> shape = dims;
    // Mode products, one factor at a time; identities are skipped.
    for (std::size_t s = 0; s < k; ++s) {
      const Matrix& a = factors[s];
      if (a.rows() == a.cols() && a == Matrix::identity(ring, a.rows())) continue;
      std::size_t pre = 1, post = 1;
      for (std::size_t t = 0; t < s; ++t) pre *= shape[t];
      for (std::size_t t = s + 1; t < k; ++t) post *= shape[t];
      Vector next(pre * a.rows() * post, RingElem{});
      for (std::size_t u = 0; u < pre; ++u)
        for (std::size_t i = 0; i < a.cols(); ++i)
          for (std::size_t w = 0; w < post; ++w) {
            const RingElem& x = cur[(u * a.cols() + i) * post + w];
            if (x == RingElem{}) continue;
            for (std::size_t ip = 0; ip < a.rows(); ++ip) {
              const RingElem& e = a(ip, i);
              if (e == RingElem{}) continue;
              RingElem& d = next[(u * a.rows() + ip) * post + w];
              d = r.add(d, r.mul(e, x));
            }
          }
      cur = std::move(next);
      shape[s] = a.rows();
    }
    out.set_column(c, cur);
  }
  return out;
}

Vector kron(RingPtr ring, const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size(), RingElem{});
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == RingElem{}) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i * b.size() + j] = ring->mul(a[i], b[j]);
    }
  }
  return out;
}

Vector add(const ChainRing& r, const Vector& a, const Vector& b) {
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = r.add(a[i], b[i]);
  return out;
}

Vector sub(const ChainRing& r, const Vector& a, const Vector& b) {
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = r.sub(a[i], b[i]);
  return out;
}

Vector scale(const ChainRing& r, const RingElem& s, const Vector& a) {
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = r.mul(s, a[i]);
  return out;
}

bool is_zero(const Vector& v) {
  return std::all_of(v.begin(), v.end(),
                     [](const RingElem& e) { return e == RingElem{}; });
}

Vector unit_vector(RingPtr ring, std::size_t n, std::size_t i) {
  Vector v(n, RingElem{});
  v[i] = ring->one();
  return v;
}

namespace {

// Elementary operations that keep A = U * work * V (and the inverses) in
// sync.  `left` tracks U/U_inv, `right` tracks V/V_inv.
struct SmithState {
  const ChainRing& r;
  Matrix work;
  Matrix U, U_inv, V, V_inv;
  bool right;

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < work.cols(); ++j) std::swap(work(a, j), work(b, j));
    // work' = P work, U' = U P^{-1}: swap columns of U, rows of U_inv
    for (std::size_t i = 0; i < U.rows(); ++i) std::swap(U(i, a), U(i, b));
    for (std::size_t j = 0; j < U_inv.cols(); ++j) std::swap(U_inv(a, j), U_inv(b, j));
  }

  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < work.rows(); ++i) std::swap(work(i, a), work(i, b));
    if (!right) return;
    for (std::size_t j = 0; j < V.cols(); ++j) std::swap(V(a, j), V(b, j));
    for (std::size_t i = 0; i < V_inv.rows(); ++i) std::swap(V_inv(i, a), V_inv(i, b));
  }

  // row_a <- u * row_a (u unit)
  void scale_row(std::size_t a, const RingElem& u) {
    const RingElem ui = r.inv(u);
    for (std::size_t j = 0; j < work.cols(); ++j) work(a, j) = r.mul(u, work(a, j));
    for (std::size_t i = 0; i < U.rows(); ++i) U(i, a) = r.mul(U(i, a), ui);
    for (std::size_t j = 0; j < U_inv.cols(); ++j) U_inv(a, j) = r.mul(u, U_inv(a, j));
  }

  // row_t <- row_t - c * row_s
  void add_row(std::size_t t, std::size_t s, const RingElem& c) {
    if (c == RingElem{}) return;
    for (std::size_t j = 0; j < work.cols(); ++j)
      work(t, j) = r.sub(work(t, j), r.mul(c, work(s, j)));
    // E = I - c e_t e_s^T, E^{-1} = I + c e_t e_s^T; U' = U E^{-1}
    for (std::size_t i = 0; i < U.rows(); ++i)
      U(i, s) = r.add(U(i, s), r.mul(U(i, t), c));
    for (std::size_t j = 0; j < U_inv.cols(); ++j)
      U_inv(t, j) = r.sub(U_inv(t, j), r.mul(c, U_inv(s, j)));
  }

  // col_t <- col_t - c * col_s
  void add_col(std::size_t t, std::size_t s, const RingElem& c) {
    if (c == RingElem{}) return;
    for (std::size_t i = 0; i < work.rows(); ++i)
      work(i, t) = r.sub(work(i, t), r.mul(work(i, s), c));
    if (!right) return;
    // F = I - c e_s e_t^T, F^{-1} = I + c e_s e_t^T; V' = F^{-1} V
    for (std::size_t j = 0; j < V.cols(); ++j)
      V(s, j) = r.add(V(s, j), r.mul(c, V(t, j)));
    for (std::size_t i = 0; i < V_inv.rows(); ++i)
      V_inv(i, t) = r.sub(V_inv(i, t), r.mul(V_inv(i, s), c));
  }
};

SmithForm smith_impl(const Matrix& a, bool right) {
  const RingPtr& ring = a.ring();
  const ChainRing& r = *ring;
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  SmithState st{r,
                a,
                Matrix::identity(ring, m),
                Matrix::identity(ring, m),
                right ? Matrix::identity(ring, n) : Matrix(),
                right ? Matrix::identity(ring, n) : Matrix(),
                right};
  const std::size_t k_max = std::min(m, n);
  std::vector<int> invariants(k_max, r.n());
  for (std::size_t k = 0; k < k_max; ++k) {
    int best = r.n();
    std::size_t bi = k, bj = k;
    for (std::size_t i = k; i < m && best > 0; ++i) {
      for (std::size_t j = k; j < n; ++j) {
        const RingElem& e = st.work(i, j);
        if (e == RingElem{}) continue;
        int v = r.val(e);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
          if (v == 0) break;
        }
      }
    }
    if (best == r.n()) break;  // remaining block is zero
    st.swap_rows(k, bi);
    st.swap_cols(k, bj);
    auto [unit, v] = r.split(st.work(k, k));
    st.scale_row(k, r.inv(unit));
    invariants[k] = v;
    // Every remaining entry has valuation >= v, so it is a multiple of p^v.
    for (std::size_t i = k + 1; i < m; ++i) {
      const RingElem& e = st.work(i, k);
      if (e == RingElem{}) continue;
      st.add_row(i, k, r.divide_p_power(e, v));
    }
    for (std::size_t j = k + 1; j < n; ++j) {
      const RingElem& e = st.work(k, j);
      if (e == RingElem{}) continue;
      st.add_col(j, k, r.divide_p_power(e, v));
    }
  }
  SmithForm out;
  out.D = std::move(st.work);
  out.U = std::move(st.U);
  out.U_inv = std::move(st.U_inv);
  out.V = std::move(st.V);
  out.V_inv = std::move(st.V_inv);
  out.invariants = std::move(invariants);
  return out;
}

}  // namespace

SmithForm smith(const Matrix& a) { return smith_impl(a, true); }

SmithForm smith_left(const Matrix& a) { return smith_impl(a, false); }

Matrix kernel(const Matrix& a) {
  const RingPtr& ring = a.ring();
  SmithForm s = smith(a);
  const int n = ring->n();
  std::vector<Vector> gens;
  // A v = 0  <=>  D (V v) = 0; w = V v ranges over ker D, v = V_inv w.
  for (std::size_t i = 0; i < a.cols(); ++i) {
    int inv = i < s.invariants.size() ? s.invariants[i] : n;
    if (inv == 0) continue;
    Vector w = s.V_inv.column(i);
    if (i < s.invariants.size() && inv < n) {
      w = scale(*ring, ring->p_power(n - inv), w);
    }
    gens.push_back(std::move(w));
  }
  return Matrix::from_columns(ring, a.cols(), gens);
}

Cokernel cokernel(const Matrix& a) {
  const RingPtr& ring = a.ring();
  const int n = ring->n();
  SmithForm s = smith_left(a);
  // Row i of U_inv gives coordinate i, taken modulo p^{a_i}.
  std::vector<std::pair<int, std::size_t>> kept;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    int inv = i < s.invariants.size() ? s.invariants[i] : n;
    if (inv > 0) kept.emplace_back(inv, i);
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  Cokernel out;
  out.proj = Matrix(ring, kept.size(), a.rows());
  out.section = Matrix(ring, a.rows(), kept.size());
  for (std::size_t t = 0; t < kept.size(); ++t) {
    auto [e, i] = kept[t];
    out.exps.push_back(e);
    for (std::size_t j = 0; j < a.rows(); ++j) {
      out.proj(t, j) = ring->reduce_mod_p_power(s.U_inv(i, j), e);
      out.section(j, t) = s.U(j, i);
    }
  }
  return out;
}

Matrix image_span(const Matrix& a) {
  const RingPtr& ring = a.ring();
  SmithForm s = smith_left(a);
  std::vector<Vector> gens;
  for (std::size_t i = 0; i < s.invariants.size(); ++i) {
    if (s.invariants[i] >= ring->n()) continue;
    gens.push_back(scale(*ring, ring->p_power(s.invariants[i]), s.U.column(i)));
  }
  return Matrix::from_columns(ring, a.rows(), gens);
}

std::optional<Vector> solve(const Matrix& a, const Vector& b) {
  if (b.size() != a.rows()) throw DimensionMismatch("solve: rhs length");
  const RingPtr& ring = a.ring();
  const int n = ring->n();
  SmithForm s = smith(a);
  Vector c = s.U_inv.apply(b);
  Vector y(a.cols(), RingElem{});
  for (std::size_t i = 0; i < a.rows(); ++i) {
    int inv = i < s.invariants.size() ? s.invariants[i] : n;
    if (inv >= n) {
      if (c[i] != RingElem{}) return std::nullopt;
      continue;
    }
    if (ring->val(c[i]) < inv) return std::nullopt;
    y[i] = ring->divide_p_power(c[i], inv);
  }
  return s.V_inv.apply(y);
}

bool is_invertible(const Matrix& a) {
  if (a.rows() != a.cols()) return false;
  SmithForm s = smith_left(a);
  return std::all_of(s.invariants.begin(), s.invariants.end(),
                     [](int v) { return v == 0; });
}

Matrix inverse(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("inverse of non-square matrix");
  SmithForm s = smith(a);
  for (int v : s.invariants) {
    if (v != 0) throw NonUnit("matrix is not invertible");
  }
  // D = I, so A^{-1} = V_inv U_inv.
  return s.V_inv * s.U_inv;
}

}  // namespace tforge
