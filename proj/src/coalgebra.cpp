#include "tforge/coalgebra.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "tforge/error.hpp"

namespace tforge {

namespace {

// Middle-linearity relations are vacuous when B = R.
std::pair<Matrix, Matrix> slot(const AlgebraSpec& alg, const Matrix& right,
                               const Matrix& left) {
  if (alg.degree() == 1) return {Matrix(), Matrix()};
  return {right, left};
}

std::optional<std::size_t> first_difference(const ModuleMap& a, const ModuleMap& b) {
  for (std::size_t i = 0; i < a.src().rank(); ++i) {
    if (a.mat().column(i) != b.mat().column(i)) return i;
  }
  return std::nullopt;
}

AxiomReport fail(AxiomFault f, std::size_t witness, const std::string& what) {
  AxiomReport r;
  r.fault = f;
  r.witness = witness;
  r.message = std::string(to_string(f)) + ": " + what + " fails on generator " +
              std::to_string(witness);
  return r;
}

const Matrix& left_x_of(const Coalgebra& c) { return c.C.left_x.mat(); }
const Matrix& right_x_of(const Coalgebra& c) { return c.C.right_x.mat(); }

// Delta lifted to raw coordinates of C (x)_R C.
Matrix comult_raw(const Coalgebra& c) { return c.CC.q.section * c.comult.mat(); }

// C (x)_B M, the target of a coaction on M.
BTensor coaction_target(const Coalgebra& c, const BModule& m) {
  return b_tensor(c.alg, {c.carrier(), m.carrier},
                  {slot(c.alg, right_x_of(c), m.act_x.mat())});
}

// First column of raw T (x)_R Z that is nonzero in T (x)_B Z, where T has
// the right action t_right.  A B-basis of Z gives T (x)_B Z = T^m column by
// column; otherwise the two-fold tensor is presented.
std::optional<std::size_t> first_nonzero_in_tensor(const AlgebraSpec& alg,
                                                   const FinModule& T,
                                                   const Matrix& t_right,
                                                   const BModule& z, const Matrix& raw) {
  const RingPtr& R = alg.R();
  const ChainRing& ring = *R;
  const std::size_t rt = T.rank(), rz = z.carrier.rank();
  const std::size_t f = static_cast<std::size_t>(alg.degree());
  if (f == 1) {
    for (std::size_t c = 0; c < raw.cols(); ++c)
      for (std::size_t i = 0; i < rt; ++i)
        for (std::size_t l = 0; l < rz; ++l) {
          int e = std::min(T.exp(i), z.carrier.exp(l));
          if (!ring.is_zero(ring.reduce_mod_p_power(raw(i * rz + l, c), e))) return c;
        }
    return std::nullopt;
  }
  if (auto bb = b_basis(alg, z)) {
    const std::size_t m = bb->rank;
    std::vector<Matrix> pw, coeff;  // t_right^t and (from rows j f + t)^T
    Matrix p = Matrix::identity(R, rt);
    for (std::size_t t = 0; t < f; ++t) {
      pw.push_back(p);
      p = t_right * p;
      Matrix ft(R, rz, m);
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t l = 0; l < rz; ++l) ft(l, j) = bb->from_carrier(j * f + t, l);
      coeff.push_back(std::move(ft));
    }
    for (std::size_t c = 0; c < raw.cols(); ++c) {
      Matrix v(R, rt, rz);
      for (std::size_t i = 0; i < rt; ++i)
        for (std::size_t l = 0; l < rz; ++l) v(i, l) = raw(i * rz + l, c);
      Matrix out(R, rt, m);
      for (std::size_t t = 0; t < f; ++t) out = out + pw[t] * (v * coeff[t]);
      for (std::size_t i = 0; i < rt; ++i)
        for (std::size_t j = 0; j < m; ++j)
          if (!ring.is_zero(ring.reduce_mod_p_power(out(i, j), T.exp(i)))) return c;
    }
    return std::nullopt;
  }
  BTensor bt = b_tensor(alg, {T, z.carrier}, {{t_right, z.act_x.mat()}});
  Matrix img = bt.q.proj * raw;
  for (std::size_t c = 0; c < img.cols(); ++c)
    if (!bt.module().is_zero(img.column(c))) return c;
  return std::nullopt;
}

}  // namespace

const char* to_string(AxiomFault f) {
  switch (f) {
    case AxiomFault::None: return "ok";
    case AxiomFault::NotBimoduleMap: return "NotBimoduleMap";
    case AxiomFault::Coassoc: return "Coassoc";
    case AxiomFault::CounitLeft: return "CounitLeft";
    case AxiomFault::CounitRight: return "CounitRight";
  }
  return "?";
}

Coalgebra coalgebra_assemble(const AlgebraSpec& alg, const Bimodule& C,
                             const Matrix& comult, const Matrix& counit) {
  Coalgebra c;
  c.alg = alg;
  c.C = C;
  c.CC = b_tensor(alg, {C.carrier, C.carrier},
                  {slot(alg, C.right_x.mat(), C.left_x.mat())});
  c.comult = ModuleMap(C.carrier, c.CC.module(), comult);
  c.counit = ModuleMap(C.carrier, alg.unit_carrier(), counit);
  return c;
}

Coalgebra coalgebra_assemble_raw(const AlgebraSpec& alg, const Bimodule& C,
                                 const Matrix& comult_raw, const Matrix& counit) {
  Coalgebra c;
  c.alg = alg;
  c.C = C;
  c.CC = b_tensor(alg, {C.carrier, C.carrier},
                  {slot(alg, C.right_x.mat(), C.left_x.mat())});
  if (comult_raw.rows() != c.CC.raw_size() || comult_raw.cols() != C.carrier.rank()) {
    throw DimensionMismatch("comultiplication matrix has wrong shape");
  }
  c.comult = ModuleMap(C.carrier, c.CC.module(), c.CC.q.proj * comult_raw);
  c.counit = ModuleMap(C.carrier, alg.unit_carrier(), counit);
  return c;
}

AxiomReport coalgebra_check(const Coalgebra& c) {
  const AlgebraSpec& alg = c.alg;
  const RingPtr& R = alg.R();
  const FinModule& C = c.carrier();
  const std::size_t rc = C.rank();
  const Matrix& L = left_x_of(c);
  const Matrix& Rx = right_x_of(c);
  const Matrix xB = alg.x_action(1);
  const FinModule Bc = alg.unit_carrier();

  // Bimodule maps.
  {
    ModuleMap lhs(C, c.CC.module(), c.comult.mat() * L);
    ModuleMap rhs(C, c.CC.module(), b_tensor_action(c.CC, 0, L).mat() * c.comult.mat());
    if (auto w = first_difference(lhs, rhs)) {
      return fail(AxiomFault::NotBimoduleMap, *w, "Delta(x.c) = x.Delta(c)");
    }
    lhs = ModuleMap(C, c.CC.module(), c.comult.mat() * Rx);
    rhs = ModuleMap(C, c.CC.module(), b_tensor_action(c.CC, 1, Rx).mat() * c.comult.mat());
    if (auto w = first_difference(lhs, rhs)) {
      return fail(AxiomFault::NotBimoduleMap, *w, "Delta(c.x) = Delta(c).x");
    }
    for (const Matrix* act : {&L, &Rx}) {
      ModuleMap a(C, Bc, c.counit.mat() * *act);
      ModuleMap b(C, Bc, xB * c.counit.mat());
      if (auto w = first_difference(a, b)) {
        return fail(AxiomFault::NotBimoduleMap, *w, "eps is B-linear");
      }
    }
  }
  const Matrix draw = comult_raw(c);
  // Counit laws, then coassociativity.
  {
    BTensor BC = b_tensor(alg, {Bc, C}, {slot(alg, xB, L)});
    Matrix e1 = BC.q.proj * (kron(c.counit.mat(), Matrix::identity(R, rc)) * draw);
    ModuleMap back = left_unit(alg, BC, c.C.left());
    ModuleMap lhs(C, C, back.mat() * e1);
    if (auto w = first_difference(lhs, ModuleMap::identity(C))) {
      return fail(AxiomFault::CounitLeft, *w, "(eps x id) Delta = id");
    }
    BTensor CB = b_tensor(alg, {C, Bc}, {slot(alg, Rx, xB)});
    Matrix e2 = CB.q.proj * (kron(Matrix::identity(R, rc), c.counit.mat()) * draw);
    ModuleMap back2 = right_unit(alg, CB, c.C.right());
    ModuleMap rhs(C, C, back2.mat() * e2);
    if (auto w = first_difference(rhs, ModuleMap::identity(C))) {
      return fail(AxiomFault::CounitRight, *w, "(id x eps) Delta = id");
    }
  }
  // Coassociativity in (C (x)_B C) (x)_B C, compared on raw lifts.
  {
    Matrix id = Matrix::identity(R, rc);
    Matrix a = kron_apply({c.comult.mat(), id}, draw);
    Matrix b = kron_apply({c.CC.q.proj, id}, kron_apply({id, draw}, draw));
    Matrix t_right = b_tensor_action(c.CC, 1, Rx).mat();
    if (auto w = first_nonzero_in_tensor(alg, c.CC.module(), t_right, c.C.left(), a - b)) {
      return fail(AxiomFault::Coassoc, *w, "(Delta x id) Delta = (id x Delta) Delta");
    }
  }
  return {};
}

CoalgebraPtr coalgebra_make(Coalgebra c) {
  AxiomReport r = coalgebra_check(c);
  if (!r.ok()) throw AxiomError(r);
  return std::make_shared<const Coalgebra>(std::move(c));
}

Comodule comodule_assemble(CoalgebraPtr c, const BModule& m, const Matrix& rho) {
  Comodule out;
  out.CM = coaction_target(*c, m);
  out.rho = ModuleMap(m.carrier, out.CM.module(), rho);
  out.M = m;
  out.coalg = std::move(c);
  return out;
}

Comodule comodule_assemble_raw(CoalgebraPtr c, const BModule& m,
                               const Matrix& rho_raw) {
  BTensor CM = coaction_target(*c, m);
  if (rho_raw.rows() != CM.raw_size() || rho_raw.cols() != m.carrier.rank()) {
    throw DimensionMismatch("coaction matrix has wrong shape");
  }
  Comodule out;
  out.rho = ModuleMap(m.carrier, CM.module(), CM.q.proj * rho_raw);
  out.CM = std::move(CM);
  out.M = m;
  out.coalg = std::move(c);
  return out;
}

AxiomReport comodule_check(const Comodule& m) {
  const Coalgebra& c = *m.coalg;
  const AlgebraSpec& alg = c.alg;
  const RingPtr& R = alg.R();
  const FinModule& M = m.carrier();
  const std::size_t rc = c.carrier().rank();
  const std::size_t rm = M.rank();
  {
    ModuleMap lhs(M, m.CM.module(), m.rho.mat() * m.M.act_x.mat());
    ModuleMap rhs(M, m.CM.module(),
                  b_tensor_action(m.CM, 0, left_x_of(c)).mat() * m.rho.mat());
    if (auto w = first_difference(lhs, rhs)) {
      return fail(AxiomFault::NotBimoduleMap, *w, "rho(x.m) = x.rho(m)");
    }
  }
  const Matrix rraw = m.CM.q.section * m.rho.mat();
  {
    const FinModule Bc = alg.unit_carrier();
    BTensor BM = b_tensor(alg, {Bc, M}, {slot(alg, alg.x_action(1), m.M.act_x.mat())});
    Matrix e = BM.q.proj * (kron(c.counit.mat(), Matrix::identity(R, rm)) * rraw);
    ModuleMap back = left_unit(alg, BM, m.M);
    ModuleMap lhs(M, M, back.mat() * e);
    if (auto w = first_difference(lhs, ModuleMap::identity(M))) {
      return fail(AxiomFault::CounitLeft, *w, "(eps x id) rho = id");
    }
  }
  {
    Matrix a = kron_apply({c.comult.mat(), Matrix::identity(R, rm)}, rraw);
    Matrix b = kron_apply({c.CC.q.proj, Matrix::identity(R, rm)},
                          kron_apply({Matrix::identity(R, rc), rraw}, rraw));
    Matrix t_right = b_tensor_action(c.CC, 1, right_x_of(c)).mat();
    if (auto w = first_nonzero_in_tensor(alg, c.CC.module(), t_right, m.M, a - b)) {
      return fail(AxiomFault::Coassoc, *w, "(Delta x id) rho = (id x rho) rho");
    }
  }
  return {};
}

Comodule comodule_make(Comodule m) {
  AxiomReport r = comodule_check(m);
  if (!r.ok()) throw AxiomError(r);
  return m;
}

ModuleMap coaction_tensor(const Comodule& m, const Comodule& n, const Matrix& f) {
  const RingPtr& R = m.coalg->alg.R();
  Matrix k = kron(Matrix::identity(R, m.coalg->carrier().rank()), f);
  return ModuleMap(m.CM.module(), n.CM.module(), n.CM.q.proj * (k * m.CM.q.section));
}

bool is_comodule_map(const Comodule& m, const Comodule& n, const Matrix& f) {
  if (!is_well_defined(m.carrier(), n.carrier(), f)) return false;
  ModuleMap a(m.carrier(), n.carrier(), n.M.act_x.mat() * f);
  ModuleMap b(m.carrier(), n.carrier(), f * m.M.act_x.mat());
  if (!(a == b)) return false;
  ModuleMap lhs(m.carrier(), n.CM.module(), n.rho.mat() * f);
  ModuleMap rhs(m.carrier(), n.CM.module(),
                coaction_tensor(m, n, f).mat() * m.rho.mat());
  return lhs == rhs;
}

bool HomSpace::contains(const Matrix& f) const {
  if (!is_well_defined(ambient.src, ambient.dst, f)) return false;
  Vector c = ambient.coords(f);
  return preimage(sub.inclusion, c).has_value();
}

Submodule linear_kernel(const FinModule& domain, const Matrix& con,
                        const std::vector<int>& target_exps) {
  const RingPtr& R = domain.ring();
  if (domain.rank() == 0) return submodule(domain, Matrix(R, 0, 0));
  if (con.rows() == 0) {
    return submodule(domain, Matrix::identity(R, domain.rank()));
  }
  Vector d(con.rows());
  for (std::size_t i = 0; i < con.rows(); ++i) d[i] = R->p_power(target_exps[i]);
  Matrix sys = hstack(con, Matrix::diagonal(R, d));
  Matrix ker = kernel(sys);
  Matrix top = ker.block(0, 0, domain.rank(), ker.cols());
  return submodule(domain, top);
}

namespace {

// Appends the entries of an R-matrix between M and N (rows of N), row by
// row, to `col` and the matching exponents to `exps`.
void append_flat(const Matrix& a, const FinModule& dst, Vector& col,
                 std::vector<int>* exps) {
  for (std::size_t j = 0; j < a.rows(); ++j) {
    for (std::size_t i = 0; i < a.cols(); ++i) {
      col.push_back(a(j, i));
      if (exps) exps->push_back(dst.exp(j));
    }
  }
}

HomSpace finish_hom(HomModule h, const std::vector<Vector>& cols,
                    const std::vector<int>& exps) {
  const RingPtr& R = h.src.ring();
  Matrix con(R, exps.size(), cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) con.set_column(k, cols[k]);
  HomSpace out;
  out.sub = linear_kernel(h.module, con, exps);
  for (std::size_t t = 0; t < out.sub.module.rank(); ++t) {
    out.basis.push_back(h.from_coords(out.sub.inclusion.mat().column(t)));
  }
  out.ambient = std::move(h);
  return out;
}

}  // namespace

HomSpace b_hom(const BModule& m, const BModule& n) {
  HomModule h = hom_module(m.carrier, n.carrier);
  std::vector<Vector> cols;
  std::vector<int> exps;
  for (std::size_t k = 0; k < h.slots.size(); ++k) {
    Matrix f = h.basis_map(k).mat();
    Vector col;
    append_flat(n.act_x.mat() * f - f * m.act_x.mat(), n.carrier, col,
                k == 0 ? &exps : nullptr);
    cols.push_back(std::move(col));
  }
  return finish_hom(std::move(h), cols, exps);
}

HomSpace comodule_hom(const Comodule& m, const Comodule& n) {
  if (m.coalg.get() != n.coalg.get()) {
    // Same coalgebra by value is fine as long as the carriers agree.
    if (!(m.coalg->carrier() == n.coalg->carrier()) ||
        !(m.coalg->comult == n.coalg->comult)) {
      throw InvalidArgument("comodule_hom: comodules over different coalgebras");
    }
  }
  HomModule h = hom_module(m.carrier(), n.carrier());
  std::vector<Vector> cols;
  std::vector<int> exps;
  for (std::size_t k = 0; k < h.slots.size(); ++k) {
    Matrix f = h.basis_map(k).mat();
    Vector col;
    std::vector<int>* e = k == 0 ? &exps : nullptr;
    append_flat(n.M.act_x.mat() * f - f * m.M.act_x.mat(), n.carrier(), col, e);
    Matrix lhs = n.rho.mat() * f;
    Matrix rhs = coaction_tensor(m, n, f).mat() * m.rho.mat();
    append_flat(lhs - rhs, n.CM.module(), col, e);
    cols.push_back(std::move(col));
  }
  if (h.slots.empty()) return finish_hom(std::move(h), {}, {});
  return finish_hom(std::move(h), cols, exps);
}

bool is_cauchy(const AlgebraSpec& alg, const Comodule& m) {
  return b_basis(alg, m.M).has_value();
}

Comodule cofree(CoalgebraPtr c, const BModule& n) {
  const AlgebraSpec& alg = c->alg;
  const RingPtr& R = alg.R();
  BTensor CN = coaction_target(*c, n);
  BModule carrier{CN.module(), b_tensor_action(CN, 0, left_x_of(*c))};
  BTensor CM = coaction_target(*c, carrier);
  const std::size_t rc = c->carrier().rank();
  Matrix lifted = kron(comult_raw(*c), Matrix::identity(R, n.carrier.rank())) * CN.q.section;
  Matrix rho = CM.q.proj * (kron(Matrix::identity(R, rc), CN.q.proj) * lifted);
  Comodule out;
  out.rho = ModuleMap(carrier.carrier, CM.module(), rho);
  out.CM = std::move(CM);
  out.M = std::move(carrier);
  out.coalg = std::move(c);
  return out;
}

Comodule transport(const Comodule& m, const Matrix& P) {
  Matrix Pinv = inverse(P);
  BModule nm{m.carrier(), ModuleMap(m.carrier(), m.carrier(),
                                    Pinv * m.M.act_x.mat() * P)};
  Comodule out;
  out.coalg = m.coalg;
  out.M = nm;
  out.CM = coaction_target(*m.coalg, nm);
  ModuleMap change = coaction_tensor(m, out, Pinv);
  out.rho = ModuleMap(m.carrier(), out.CM.module(), change.mat() * m.rho.mat() * P);
  return out;
}

std::vector<Subcomodule> enumerate_subcomodules(const Comodule& m,
                                                std::uint64_t budget) {
  const FinModule& M = m.carrier();
  const RingPtr& R = M.ring();
  const ChainRing& r = *R;
  const int f = m.coalg->alg.degree();
  std::vector<Vector> elems = elements(M, budget);
  auto key_of = [&](const Matrix& gens) {
    Submodule s = submodule(M, gens);
    std::vector<std::uint64_t> key;
    for (const Vector& v : elements(s.module, budget)) {
      Vector w = s.inclusion.apply(v);
      std::uint64_t code = 0;
      for (const RingElem& e : w) code = code * r.size() + r.encode(e);
      key.push_back(code);
    }
    std::sort(key.begin(), key.end());
    return key;
  };
  auto code_of = [&](const Vector& w) {
    std::uint64_t code = 0;
    for (const RingElem& e : w) code = code * r.size() + r.encode(e);
    return code;
  };

  std::map<std::vector<std::uint64_t>, Matrix> found;
  std::vector<std::pair<std::vector<std::uint64_t>, Matrix>> queue;
  Matrix zero(R, M.rank(), 0);
  auto k0 = key_of(zero);
  found.emplace(k0, zero);
  queue.emplace_back(k0, zero);
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const auto key = queue[qi].first;
    const Matrix gens = queue[qi].second;
    std::set<std::uint64_t> members(key.begin(), key.end());
    for (const Vector& v : elems) {
      if (members.count(code_of(v))) continue;
      Matrix add(R, M.rank(), static_cast<std::size_t>(f));
      Vector w = v;
      for (int s = 0; s < f; ++s) {
        add.set_column(static_cast<std::size_t>(s), w);
        w = m.M.act_x.apply(w);
      }
      Matrix g2 = hstack(gens, add);
      auto k2 = key_of(g2);
      if (found.count(k2)) continue;
      found.emplace(k2, g2);
      queue.emplace_back(k2, g2);
    }
  }
  std::vector<std::pair<std::vector<std::uint64_t>, Matrix>> ordered(queue.begin(), queue.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });

  std::vector<Subcomodule> out;
  for (const auto& [key, gens] : ordered) {
    Submodule s = submodule(M, gens);
    const FinModule& S = s.module;
    Matrix act(R, S.rank(), S.rank());
    for (std::size_t t = 0; t < S.rank(); ++t) {
      auto pre = preimage(s.inclusion, m.M.act_x.apply(s.inclusion.mat().column(t)));
      if (!pre) throw InternalError("submodule not stable under x");
      act.set_column(t, *pre);
    }
    BModule sm{S, ModuleMap(S, S, act)};
    BTensor CS = coaction_target(*m.coalg, sm);
    Matrix incl_t = m.CM.q.proj *
                    (kron(Matrix::identity(R, m.coalg->carrier().rank()), s.inclusion.mat()) *
                     CS.q.section);
    ModuleMap it(CS.module(), m.CM.module(), incl_t);
    Matrix rho(R, CS.module().rank(), S.rank());
    bool ok = true;
    for (std::size_t t = 0; t < S.rank() && ok; ++t) {
      auto pre = preimage(it, m.rho.apply(s.inclusion.mat().column(t)));
      if (!pre) {
        ok = false;
        break;
      }
      rho.set_column(t, *pre);
    }
    if (!ok) continue;
    Comodule c;
    c.coalg = m.coalg;
    c.M = sm;
    c.rho = ModuleMap(S, CS.module(), rho);
    c.CM = std::move(CS);
    out.push_back({std::move(c), s.inclusion});
  }
  return out;
}

Coalgebra coalgebra_from_basis(const AlgebraSpec& alg, std::size_t rank,
                               const std::vector<std::vector<TensorTerm>>& comult,
                               const std::vector<RingElem>& counit) {
  const RingPtr& R = alg.R();
  const ChainRing& B = *alg.B();
  const std::size_t f = static_cast<std::size_t>(alg.degree());
  const std::size_t rc = rank * f;
  FinModule C = alg.free_carrier(rank);
  Matrix x = alg.x_action(rank);
  Bimodule bim = bimodule_make(alg, C, x, x);
  Matrix draw(R, rc * rc, rc);
  Matrix eps(R, f, rc);
  for (std::size_t u = 0; u < rank; ++u) {
    Matrix em = alg.mult_matrix(counit[u]);
    RingElem xs = B.one();
    for (std::size_t s = 0; s < f; ++s) {
      for (const TensorTerm& t : comult[u]) {
        RingElem c = B.mul(t.coeff, xs);
        for (std::size_t k = 0; k < f; ++k) {
          std::size_t raw = (t.a * f + k) * rc + t.b * f;
          draw(raw, u * f + s) = R->add(draw(raw, u * f + s), R->from_int(c.c[k]));
        }
      }
      for (std::size_t k = 0; k < f; ++k) eps(k, u * f + s) = em(k, s);
      xs = B.mul(xs, B.gen());
    }
  }
  return coalgebra_assemble_raw(alg, bim, draw, eps);
}

Comodule comodule_from_basis(CoalgebraPtr c, std::size_t rank,
                             const std::vector<std::vector<TensorTerm>>& rho) {
  const AlgebraSpec& alg = c->alg;
  const RingPtr& R = alg.R();
  const ChainRing& B = *alg.B();
  const std::size_t f = static_cast<std::size_t>(alg.degree());
  BModule m = free_bmodule(alg, rank);
  const std::size_t rm = rank * f;
  const std::size_t rc = c->carrier().rank();
  Matrix raw(R, rc * rm, rm);
  for (std::size_t j = 0; j < rank; ++j) {
    RingElem xs = B.one();
    for (std::size_t s = 0; s < f; ++s) {
      for (const TensorTerm& t : rho[j]) {
        RingElem co = B.mul(t.coeff, xs);
        for (std::size_t k = 0; k < f; ++k) {
          std::size_t idx = (t.a * f + k) * rm + t.b * f;
          raw(idx, j * f + s) = R->add(raw(idx, j * f + s), R->from_int(co.c[k]));
        }
      }
      xs = B.mul(xs, B.gen());
    }
  }
  return comodule_assemble_raw(std::move(c), m, raw);
}

CoalgebraPtr trivial_coalgebra(const AlgebraSpec& alg) {
  const RingElem one = alg.B()->one();
  return coalgebra_make(coalgebra_from_basis(alg, 1, {{{0, 0, one}}}, {one}));
}

CoalgebraPtr grouplike_coalgebra(const AlgebraSpec& alg, std::size_t g) {
  const RingElem one = alg.B()->one();
  std::vector<std::vector<TensorTerm>> d(g);
  for (std::size_t i = 0; i < g; ++i) d[i] = {{i, i, one}};
  return coalgebra_make(coalgebra_from_basis(alg, g, d, std::vector<RingElem>(g, one)));
}

CoalgebraPtr comatrix_coalgebra(const AlgebraSpec& alg, std::size_t r) {
  const RingElem one = alg.B()->one();
  std::vector<std::vector<TensorTerm>> d(r * r);
  std::vector<RingElem> eps(r * r, alg.B()->zero());
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      for (std::size_t k = 0; k < r; ++k) d[i * r + j].push_back({i * r + k, k * r + j, one});
    }
    eps[i * r + i] = one;
  }
  return coalgebra_make(coalgebra_from_basis(alg, r * r, d, eps));
}

Comodule trivial_comodule(CoalgebraPtr c, std::size_t rank) {
  const RingElem one = c->alg.B()->one();
  std::vector<std::vector<TensorTerm>> rho(rank);
  for (std::size_t j = 0; j < rank; ++j) rho[j] = {{0, j, one}};
  return comodule_make(comodule_from_basis(std::move(c), rank, rho));
}

Comodule grouplike_line(CoalgebraPtr c, std::size_t i) {
  const RingElem one = c->alg.B()->one();
  return comodule_make(comodule_from_basis(std::move(c), 1, {{{i, 0, one}}}));
}

Comodule standard_comatrix_comodule(CoalgebraPtr c, std::size_t r) {
  const RingElem one = c->alg.B()->one();
  std::vector<std::vector<TensorTerm>> rho(r);
  // rho(e_j) = sum_i c_ji (x) e_i; this is the left coaction for
  // Delta(c_ij) = sum_k c_ik (x) c_kj.
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < r; ++i) rho[j].push_back({j * r + i, i, one});
  return comodule_make(comodule_from_basis(std::move(c), r, rho));
}

}  // namespace tforge
