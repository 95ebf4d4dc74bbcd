#include "tforge/algebra.hpp"

#include <sstream>

#include "tforge/error.hpp"

namespace tforge {

AlgebraSpec::AlgebraSpec(RingPtr R, RingPtr B) : R_(std::move(R)), B_(std::move(B)) {
  if (R_->f() != 1) throw InvalidArgument("algebra: R must be GR(p^n,1)");
  if (R_->p() != B_->p() || R_->n() != B_->n()) {
    throw InvalidArgument("algebra: R and B must share p and n");
  }
}

AlgebraSpec AlgebraSpec::make(int p, int n, int f) {
  return AlgebraSpec(ChainRing::make(p, n, 1), ChainRing::make(p, n, f));
}

Matrix AlgebraSpec::mult_matrix(const RingElem& b) const {
  const int f = degree();
  Matrix m(R_, static_cast<std::size_t>(f), static_cast<std::size_t>(f));
  RingElem xs = B_->one();
  for (int s = 0; s < f; ++s) {
    RingElem col = B_->mul(b, xs);
    for (int t = 0; t < f; ++t) m(t, s) = R_->from_int(col.c[t]);
    xs = B_->mul(xs, B_->gen());
  }
  return m;
}

Matrix AlgebraSpec::restrict(const Matrix& bmat) const {
  const std::size_t f = static_cast<std::size_t>(degree());
  Matrix out(R_, bmat.rows() * f, bmat.cols() * f);
  for (std::size_t l = 0; l < bmat.rows(); ++l) {
    for (std::size_t k = 0; k < bmat.cols(); ++k) {
      if (bmat(l, k) == RingElem{}) continue;
      Matrix blk = mult_matrix(bmat(l, k));
      for (std::size_t t = 0; t < f; ++t)
        for (std::size_t s = 0; s < f; ++s) out(l * f + t, k * f + s) = blk(t, s);
    }
  }
  return out;
}

Vector AlgebraSpec::restrict(const Vector& bvec) const {
  const std::size_t f = static_cast<std::size_t>(degree());
  Vector out(bvec.size() * f);
  for (std::size_t i = 0; i < bvec.size(); ++i)
    for (std::size_t s = 0; s < f; ++s) out[i * f + s] = R_->from_int(bvec[i].c[s]);
  return out;
}

Vector AlgebraSpec::extend(const Vector& rvec) const {
  const std::size_t f = static_cast<std::size_t>(degree());
  if (rvec.size() % f) throw DimensionMismatch("extend: length not divisible by f");
  Vector out(rvec.size() / f);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::vector<std::int64_t> coords(f);
    for (std::size_t s = 0; s < f; ++s) coords[s] = rvec[i * f + s].c[0];
    out[i] = B_->from_coords(coords);
  }
  return out;
}

Matrix AlgebraSpec::extend(const Matrix& rmat) const {
  const std::size_t f = static_cast<std::size_t>(degree());
  if (rmat.rows() % f || rmat.cols() % f) {
    throw DimensionMismatch("extend: shape not divisible by f");
  }
  Matrix out(B_, rmat.rows() / f, rmat.cols() / f);
  for (std::size_t l = 0; l < out.rows(); ++l)
    for (std::size_t k = 0; k < out.cols(); ++k) {
      std::vector<std::int64_t> coords(f);
      for (std::size_t s = 0; s < f; ++s) coords[s] = rmat(l * f + s, k * f).c[0];
      out(l, k) = B_->from_coords(coords);
    }
  return out;
}

Matrix AlgebraSpec::x_action(std::size_t rank) const {
  Vector d(rank, B_->gen());
  return restrict(Matrix::diagonal(B_, d));
}

FinModule AlgebraSpec::free_carrier(std::size_t rank) const {
  return FinModule::free(R_, rank * static_cast<std::size_t>(degree()));
}

std::string AlgebraSpec::to_string() const {
  return "alg R=" + R_->name() + " B=" + B_->name();
}

Matrix eval_modulus(const AlgebraSpec& alg, const Matrix& endo) {
  const auto& h = alg.B()->defining_poly();
  const RingPtr& R = alg.R();
  Matrix acc(R, endo.rows(), endo.cols());
  Matrix pw = Matrix::identity(R, endo.rows());
  for (std::size_t k = 0; k < h.size(); ++k) {
    acc = acc + pw.scaled(R->from_int(h[k]));
    if (k + 1 < h.size()) pw = pw * endo;
  }
  return acc;
}

BModule free_bmodule(const AlgebraSpec& alg, std::size_t rank) {
  FinModule c = alg.free_carrier(rank);
  return {c, ModuleMap(c, c, alg.x_action(rank))};
}

const char* to_string(BimoduleFault f) {
  switch (f) {
    case BimoduleFault::None: return "ok";
    case BimoduleFault::ModulusViolation: return "ModulusViolation";
    case BimoduleFault::NonCommutingActions: return "NonCommutingActions";
    case BimoduleFault::NotAMap: return "NotAMap";
  }
  return "?";
}

BimoduleCheck check_bimodule(const AlgebraSpec& alg, const FinModule& carrier,
                             const Matrix& left_x, const Matrix& right_x) {
  BimoduleCheck out;
  const std::size_t r = carrier.rank();
  for (const Matrix* m : {&left_x, &right_x}) {
    if (m->rows() != r || m->cols() != r) {
      throw DimensionMismatch("bimodule action has wrong shape");
    }
    if (!is_well_defined(carrier, carrier, *m)) {
      out.fault = BimoduleFault::NotAMap;
      out.message = std::string(m == &left_x ? "left" : "right") +
                    " action is not a well-defined map";
      return out;
    }
  }
  const char* side[2] = {"left", "right"};
  const Matrix* acts[2] = {&left_x, &right_x};
  for (int s = 0; s < 2; ++s) {
    ModuleMap h(carrier, carrier, eval_modulus(alg, *acts[s]));
    if (!h.is_zero()) {
      out.fault = BimoduleFault::ModulusViolation;
      out.message = std::string(side[s]) + " action of x does not satisfy " +
                    alg.B()->modulus_string() + " = 0";
      return out;
    }
  }
  ModuleMap comm(carrier, carrier, left_x * right_x - right_x * left_x);
  if (!comm.is_zero()) {
    out.fault = BimoduleFault::NonCommutingActions;
    out.message = "left and right actions of x do not commute";
  }
  return out;
}

Bimodule bimodule_make(const AlgebraSpec& alg, const FinModule& carrier,
                       const Matrix& left_x, const Matrix& right_x) {
  BimoduleCheck c = check_bimodule(alg, carrier, left_x, right_x);
  if (!c.ok()) throw BimoduleError(c.fault, c.message);
  return {carrier, ModuleMap(carrier, carrier, left_x),
          ModuleMap(carrier, carrier, right_x)};
}

Bimodule regular_bimodule(const AlgebraSpec& alg) {
  FinModule c = alg.unit_carrier();
  Matrix x = alg.x_action(1);
  return {c, ModuleMap(c, c, x), ModuleMap(c, c, x)};
}

bool is_b_linear(const Matrix& f, const Matrix& src_x, const Matrix& dst_x) {
  return dst_x * f == f * src_x;
}

namespace {

Matrix kron_all(const std::vector<Matrix>& ms) {
  Matrix acc = ms.front();
  for (std::size_t i = 1; i < ms.size(); ++i) acc = kron(acc, ms[i]);
  return acc;
}

}  // namespace

Vector BTensor::pure(const std::vector<Vector>& xs) const {
  if (xs.size() != factors.size()) throw DimensionMismatch("pure: factor count");
  const RingPtr& ring = q.module.ring() ? q.module.ring() : factors.front().ring();
  Vector raw = xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) raw = kron(ring, raw, xs[i]);
  return from_raw(raw);
}

Vector BTensor::from_raw(const Vector& raw) const {
  return q.module.reduce(q.proj.apply(raw));
}

BTensor b_tensor_presented(const RingPtr& R, const std::vector<FinModule>& factors,
                           const std::vector<std::pair<Matrix, Matrix>>& slot_actions) {
  if (factors.empty()) throw InvalidArgument("b_tensor of no factors");
  if (slot_actions.size() + 1 != factors.size()) {
    throw DimensionMismatch("b_tensor: need one slot action pair per inner slot");
  }
  BTensor t;
  t.factors = factors;
  t.raw_exps = {R->n()};
  for (const FinModule& f : factors) {
    std::vector<int> next;
    for (int a : t.raw_exps)
      for (int e : f.exps()) next.push_back(std::min(a, e));
    t.raw_exps = std::move(next);
  }
  const std::size_t k = factors.size();
  t.strides.assign(k, 1);
  for (std::size_t i = k - 1; i-- > 0;) t.strides[i] = t.strides[i + 1] * factors[i + 1].rank();

  Matrix rel(R, t.raw_exps.size(), 0);
  for (std::size_t s = 0; s + 1 < k; ++s) {
    const auto& [a, b] = slot_actions[s];
    if (a.rows() == 0 && b.rows() == 0) continue;
    std::vector<Matrix> lhs, rhs;
    for (std::size_t i = 0; i < k; ++i) {
      Matrix id = Matrix::identity(R, factors[i].rank());
      lhs.push_back(i == s ? a : id);
      rhs.push_back(i == s + 1 ? b : id);
    }
    Matrix d = kron_all(lhs) - kron_all(rhs);
    if (!d.is_zero()) rel = hstack(rel, d);
  }
  t.q = present(R, t.raw_exps, rel);
  return t;
}

namespace {

// X_0 (x)_B X_1 (x)_B ... with X_1, ... free over B.  A pure tensor is
// rewritten from the right: y (x) e_l = sum_j (y . beta_jl) (x) b_j where
// e_l = sum_j beta_jl b_j in the basis b of the next factor.
std::optional<BTensor> b_tensor_free(const AlgebraSpec& alg,
                                     const std::vector<FinModule>& factors,
                                     const std::vector<std::pair<Matrix, Matrix>>& slots) {
  const std::size_t k = factors.size();
  const std::size_t f = static_cast<std::size_t>(alg.degree());
  if (k < 2 || f == 1) return std::nullopt;
  const RingPtr& R = alg.R();
  const ChainRing& ring = *R;
  std::vector<BBasis> bases(k);
  for (std::size_t s = 1; s < k; ++s) {
    const Matrix& left = slots[s - 1].second;
    const Matrix& right = slots[s - 1].first;
    if (left.rows() != factors[s].rank() || right.rows() != factors[s - 1].rank()) {
      return std::nullopt;
    }
    auto bb = b_basis(alg, BModule{factors[s], ModuleMap(factors[s], factors[s], left)});
    if (!bb) return std::nullopt;
    bases[s] = std::move(*bb);
  }
  std::vector<std::size_t> r(k), m(k, 1);
  for (std::size_t s = 0; s < k; ++s) r[s] = factors[s].rank();
  for (std::size_t s = 1; s < k; ++s) m[s] = bases[s].rank;
  // M[s] = m_{s+1} ... m_{k-1};  N[s] = r_s ... r_{k-1}.
  std::vector<std::size_t> M(k + 1, 1), N(k + 1, 1);
  for (std::size_t s = k; s-- > 0;) {
    M[s] = s + 1 < k ? m[s + 1] * M[s + 1] : 1;
    N[s] = r[s] * N[s + 1];
  }

  // W[sigma] for the suffix index sigma at level s: coordinates (i', J) of
  // the image of e_{i_s} (x) ... (x) e_{i_{k-1}} in X_s^{M[s]}.
  std::vector<Vector> W(r[k - 1]);
  for (std::size_t i = 0; i < r[k - 1]; ++i) {
    W[i] = Vector(r[k - 1], RingElem{});
    W[i][i] = ring.one();
  }
  for (std::size_t s = k - 1; s-- > 0;) {
    const Matrix& a = slots[s].first;
    const Matrix& from = bases[s + 1].from_carrier;  // (m f) x r_{s+1}
    const std::size_t rs = r[s], rn = r[s + 1], mj = m[s + 1], tail = M[s + 1];
    // S(i' * mj + j, i * rn + l) = sum_t (a^t)(i', i) from(j f + t, l)
    Matrix S(R, rs * mj, rs * rn);
    Matrix pw = Matrix::identity(R, rs);
    for (std::size_t t = 0; t < f; ++t) {
      for (std::size_t ip = 0; ip < rs; ++ip)
        for (std::size_t i = 0; i < rs; ++i) {
          const RingElem& c = pw(ip, i);
          if (ring.is_zero(c)) continue;
          for (std::size_t j = 0; j < mj; ++j)
            for (std::size_t l = 0; l < rn; ++l) {
              const RingElem& e = from(j * f + t, l);
              if (ring.is_zero(e)) continue;
              RingElem& dst = S(ip * mj + j, i * rn + l);
              dst = ring.add(dst, ring.mul(c, e));
            }
        }
      pw = a * pw;
    }
    std::vector<Vector> next(N[s]);
    for (std::size_t is = 0; is < rs; ++is)
      for (std::size_t sig = 0; sig < N[s + 1]; ++sig) {
        Vector out(rs * M[s], RingElem{});
        const Vector& w = W[sig];
        for (std::size_t l = 0; l < rn; ++l)
          for (std::size_t J = 0; J < tail; ++J) {
            const RingElem& wv = w[l * tail + J];
            if (ring.is_zero(wv)) continue;
            for (std::size_t ip = 0; ip < rs; ++ip)
              for (std::size_t j = 0; j < mj; ++j) {
                const RingElem& c = S(ip * mj + j, is * rn + l);
                if (ring.is_zero(c)) continue;
                RingElem& dst = out[ip * M[s] + j * tail + J];
                dst = ring.add(dst, ring.mul(c, wv));
              }
          }
        next[is * N[s + 1] + sig] = std::move(out);
      }
    W = std::move(next);
  }

  BTensor t;
  t.factors = factors;
  t.strides.assign(k, 1);
  for (std::size_t i = k - 1; i-- > 0;) t.strides[i] = t.strides[i + 1] * r[i + 1];
  const std::size_t raw = N[0];
  const std::size_t total = M[0];
  std::vector<int> exps;
  t.raw_exps.clear();
  for (std::size_t i = 0; i < r[0]; ++i) {
    const int e = factors[0].exp(i);
    for (std::size_t J = 0; J < total; ++J) exps.push_back(e);
    for (std::size_t sig = 0; sig < N[1]; ++sig) {
      int re = e;
      std::size_t rest = sig;
      for (std::size_t s = 1; s < k; ++s) {
        re = std::min(re, factors[s].exp(rest / t.strides[s]));
        rest %= t.strides[s];
      }
      t.raw_exps.push_back(re);
    }
  }
  t.q.module = FinModule(R, exps);
  t.q.proj = Matrix(R, r[0] * total, raw);
  for (std::size_t c = 0; c < raw; ++c)
    for (std::size_t row = 0; row < r[0] * total; ++row)
      t.q.proj(row, c) = ring.reduce_mod_p_power(W[c][row], exps[row]);
  // Lifts: e_i (x) b_{j_1} (x) ... (x) b_{j_{k-1}}.
  t.q.section = Matrix(R, raw, r[0] * total);
  for (std::size_t i = 0; i < r[0]; ++i)
    for (std::size_t J = 0; J < total; ++J) {
      Vector v(r[0], RingElem{});
      v[i] = ring.one();
      std::size_t rest = J;
      for (std::size_t s = 1; s < k; ++s) {
        const std::size_t j = rest / M[s];
        rest %= M[s];
        v = kron(R, v, bases[s].to_carrier.column(j * f));
      }
      t.q.section.set_column(i * total + J, v);
    }
  return t;
}

}  // namespace

BTensor b_tensor(const AlgebraSpec& alg, const std::vector<FinModule>& factors,
                 const std::vector<std::pair<Matrix, Matrix>>& slot_actions) {
  if (factors.empty()) throw InvalidArgument("b_tensor of no factors");
  if (slot_actions.size() + 1 != factors.size()) {
    throw DimensionMismatch("b_tensor: need one slot action pair per inner slot");
  }
  if (auto t = b_tensor_free(alg, factors, slot_actions)) return std::move(*t);
  return b_tensor_presented(alg.R(), factors, slot_actions);
}

BTensor b_tensor(const AlgebraSpec& alg, const BModule& right, const BModule& left) {
  return b_tensor(alg, {right.carrier, left.carrier},
                  {{right.act_x.mat(), left.act_x.mat()}});
}

ModuleMap b_tensor_map(const BTensor& src, const BTensor& dst,
                       const std::vector<Matrix>& maps) {
  if (maps.size() != src.factors.size() || maps.size() != dst.factors.size()) {
    throw DimensionMismatch("b_tensor_map: factor count");
  }
  return ModuleMap(src.module(), dst.module(), dst.q.proj * kron_apply(maps, src.q.section));
}

ModuleMap b_tensor_action(const BTensor& t, std::size_t slot, const Matrix& act) {
  std::vector<Matrix> maps;
  const RingPtr& R = t.factors.front().ring();
  for (std::size_t i = 0; i < t.factors.size(); ++i) {
    maps.push_back(i == slot ? act : Matrix::identity(R, t.factors[i].rank()));
  }
  return b_tensor_map(t, t, maps);
}

ModuleMap left_unit(const AlgebraSpec& alg, const BTensor& t, const BModule& y) {
  const std::size_t f = static_cast<std::size_t>(alg.degree());
  const std::size_t r = y.carrier.rank();
  Matrix act(alg.R(), r, f * r);
  Matrix pw = Matrix::identity(alg.R(), r);
  for (std::size_t s = 0; s < f; ++s) {
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t i = 0; i < r; ++i) act(i, s * r + j) = pw(i, j);
    pw = y.act_x.mat() * pw;
  }
  return ModuleMap(t.module(), y.carrier, act * t.q.section);
}

ModuleMap right_unit(const AlgebraSpec& alg, const BTensor& t, const BModule& x) {
  const std::size_t f = static_cast<std::size_t>(alg.degree());
  const std::size_t r = x.carrier.rank();
  Matrix act(alg.R(), r, r * f);
  Matrix pw = Matrix::identity(alg.R(), r);
  for (std::size_t s = 0; s < f; ++s) {
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t i = 0; i < r; ++i) act(i, j * f + s) = pw(i, j);
    pw = x.act_x.mat() * pw;
  }
  return ModuleMap(t.module(), x.carrier, act * t.q.section);
}

namespace {

// Rank over the residue field of the column span.
std::size_t residue_rank(const Matrix& a) {
  if (a.cols() == 0 || a.rows() == 0) return 0;
  SmithForm s = smith_left(a);
  std::size_t k = 0;
  for (int v : s.invariants) k += (v == 0);
  return k;
}

}  // namespace

std::optional<BBasis> b_basis(const AlgebraSpec& alg, const BModule& m) {
  if (!m.carrier.is_free()) return std::nullopt;
  const std::size_t f = static_cast<std::size_t>(alg.degree());
  const std::size_t total = m.carrier.rank();
  if (total % f) return std::nullopt;
  const RingPtr& R = alg.R();
  Matrix sel(R, total, 0);
  for (std::size_t g = 0; g < total && sel.cols() < total; ++g) {
    Matrix cand(R, total, f);
    Vector v = m.carrier.generator(g);
    for (std::size_t s = 0; s < f; ++s) {
      cand.set_column(s, v);
      v = m.act_x.apply(v);
    }
    Matrix trial = hstack(sel, cand);
    if (residue_rank(trial) == sel.cols() + f) sel = trial;
  }
  if (sel.cols() != total) {
    throw InternalError("b_basis: greedy selection did not span a free module");
  }
  BBasis b;
  b.rank = total / f;
  b.to_carrier = sel;
  b.from_carrier = inverse(sel);
  return b;
}

RingElem BDual::evaluate(const AlgebraSpec& alg, const Vector& xi,
                         const Vector& m) const {
  Vector mb = alg.extend(basis.from_carrier.apply(m));
  Vector xb = alg.extend(xi);
  const ChainRing& B = *alg.B();
  RingElem acc{};
  for (std::size_t i = 0; i < rank; ++i) acc = B.add(acc, B.mul(xb[i], mb[i]));
  return acc;
}

BDual b_dual(const AlgebraSpec& alg, const BModule& m) {
  auto basis = b_basis(alg, m);
  if (!basis) {
    throw NonFree("b_dual: " + m.carrier.to_string() + " is not free over " +
                  alg.B()->name());
  }
  BDual d;
  d.rank = basis->rank;
  d.basis = std::move(*basis);
  d.module = free_bmodule(alg, d.rank);
  return d;
}

}  // namespace tforge
