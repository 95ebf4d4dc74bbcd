#include "tforge/mf.hpp"

#include <algorithm>

#include "tforge/error.hpp"

namespace tforge {

namespace {

Matrix sigma(const Matrix& m) { return m.frobenius(); }

// First column on which a and b differ as elements of m.
std::optional<std::size_t> first_diff(const FinModule& m, const Matrix& a, const Matrix& b) {
  for (std::size_t c = 0; c < a.cols(); ++c) {
    if (!m.equal(a.column(c), b.column(c))) return c;
  }
  return std::nullopt;
}

// Canonical reordering of a direct sum of cyclic modules.
Quotient sorted_sum(const RingPtr& ring, const std::vector<int>& exps) {
  return present(ring, exps, Matrix());
}

// J with big * J = small, or the first column of small outside the image.
struct Factor {
  std::optional<Matrix> J;
  std::size_t failing = 0;
};
Factor factor_through(const FinModule& M, const FilStep& big, const FilStep& small) {
  Factor out;
  ModuleMap g(big.module, M, big.incl);
  Matrix J(M.ring(), big.module.rank(), small.module.rank());
  for (std::size_t c = 0; c < small.module.rank(); ++c) {
    auto y = preimage(g, small.incl.column(c));
    if (!y) {
      out.failing = c;
      return out;
    }
    J.set_column(c, *y);
  }
  out.J = std::move(J);
  return out;
}

MFCheck fault(MFFault f, int step, std::size_t witness, const std::string& what) {
  MFCheck c;
  c.fault = f;
  c.step = step;
  c.witness = witness;
  c.message = std::string(to_string(f)) + ": " + what;
  return c;
}

Matrix zero_cols(const RingPtr& ring, std::size_t rows) { return Matrix(ring, rows, 0); }

Matrix hstack_all(const RingPtr& ring, std::size_t rows, const std::vector<Matrix>& ms) {
  Matrix out = zero_cols(ring, rows);
  for (const Matrix& m : ms) out = hstack(out, m);
  return out;
}

// Reduces row j modulo p^{exps[j]}.
Matrix reduce_rows(const FinModule& m, Matrix a) {
  const ChainRing& ring = *m.ring();
  for (std::size_t j = 0; j < a.rows(); ++j)
    for (std::size_t c = 0; c < a.cols(); ++c) a(j, c) = ring.reduce_mod_p_power(a(j, c), m.exp(j));
  return a;
}

struct Built {
  MFCheck check;
  std::optional<FilteredFModule> object;
};

Built build(const MFData& d) {
  Built out;
  const RingPtr& W = d.alg.B();
  const std::size_t r = d.m_exps.size();
  if (d.fil_gens.size() != d.phi_gens.size()) {
    out.check = fault(MFFault::Shape, d.lo, 0, "fil and phi windows differ in length");
    return out;
  }
  for (std::size_t k = 0; k < d.fil_gens.size(); ++k) {
    const Matrix& g = d.fil_gens[k];
    const Matrix& p = d.phi_gens[k];
    const int i = d.lo + static_cast<int>(k);
    if (g.rows() != r || p.rows() != r || p.cols() != g.cols()) {
      out.check = fault(MFFault::Shape, i, 0, "fil " + std::to_string(i) + " / phi " +
                                                   std::to_string(i) + " have the wrong shape");
      return out;
    }
    if ((g.cols() && !g.ring()->same_as(*W)) || (p.cols() && !p.ring()->same_as(*W))) {
      out.check = fault(MFFault::Shape, i, 0, "matrices must have entries in W");
      return out;
    }
  }
  for (std::size_t j = 0; j < r; ++j) {
    if (d.m_exps[j] < 1 || d.m_exps[j] > W->n()) {
      out.check = fault(MFFault::NotAnnihilated, d.lo, j,
                        "generator " + std::to_string(j) + " has order p^" +
                            std::to_string(d.m_exps[j]) + ", not a module over W_" +
                            std::to_string(W->n()));
      return out;
    }
    if (j > 0 && d.m_exps[j] > d.m_exps[j - 1]) {
      out.check = fault(MFFault::Shape, d.lo, j, "module exponents must be descending");
      return out;
    }
  }
  FilteredFModule x;
  x.alg = d.alg;
  x.M = FinModule(W, d.m_exps);
  x.lo = d.lo;
  for (std::size_t k = 0; k < d.fil_gens.size(); ++k) {
    const int i = d.lo + static_cast<int>(k);
    const Matrix& gens = d.fil_gens[k];
    FinModule free = FinModule::free(W, gens.cols());
    ModuleMap gm(free, x.M, gens);
    // phi is given on generators; it must kill their relations.
    Matrix ker = kernel_generators(gm);
    Matrix img = d.phi_gens[k] * sigma(ker);
    for (std::size_t c = 0; c < img.cols(); ++c) {
      if (!x.M.is_zero(img.column(c))) {
        out.check = fault(MFFault::PhiIllDefined, i, c,
                          "phi " + std::to_string(i) +
                              " does not vanish on a relation among the Fil generators");
        return out;
      }
    }
    Submodule s = submodule(x.M, gens);
    Matrix phi(W, r, s.module.rank());
    for (std::size_t c = 0; c < s.module.rank(); ++c) {
      auto y = preimage(gm, s.inclusion.mat().column(c));
      if (!y) throw InternalError("mf_make: submodule generator outside the span");
      Matrix col = d.phi_gens[k] * sigma(Matrix::from_columns(W, y->size(), {*y}));
      phi.set_column(c, x.M.reduce(col.column(0)));
    }
    x.fil.push_back({s.module, s.inclusion.mat()});
    x.phi.push_back(std::move(phi));
  }
  out.object = std::move(x);
  return out;
}

}  // namespace

const char* to_string(MFFault f) {
  switch (f) {
    case MFFault::None: return "ok";
    case MFFault::Shape: return "Shape";
    case MFFault::NotAnnihilated: return "NotAnnihilated";
    case MFFault::PhiIllDefined: return "PhiIllDefined";
    case MFFault::NotInclusion: return "NotInclusion";
    case MFFault::NotExhaustive: return "NotExhaustive";
    case MFFault::NotDecreasing: return "NotDecreasing";
    case MFFault::PhiIncompatible: return "PhiIncompatible";
    case MFFault::SpanFails: return "SpanFails";
  }
  return "?";
}

FilStep FilteredFModule::step(int i) const {
  if (fil.empty() || i > hi()) return {FinModule::zero(M.ring()), zero_cols(M.ring(), M.rank())};
  if (i < lo) return fil.front();
  return fil[static_cast<std::size_t>(i - lo)];
}

Matrix FilteredFModule::phi_at(int i) const {
  if (phi.empty() || i > hi()) return zero_cols(M.ring(), M.rank());
  if (i < lo) return phi.front().scaled(M.ring()->p_power(lo - i));
  return phi[static_cast<std::size_t>(i - lo)];
}

MFCheck mf_check(const MFData& data, bool require_span) {
  Built b = build(data);
  if (!b.check.ok()) return b.check;
  return mf_validate(*b.object, require_span);
}

FilteredFModule mf_make(const MFData& data, bool require_span) {
  Built b = build(data);
  if (!b.check.ok()) throw MFError(b.check);
  MFCheck c = mf_validate(*b.object, require_span);
  if (!c.ok()) throw MFError(c);
  return std::move(*b.object);
}

MFCheck mf_validate(const FilteredFModule& x, bool require_span) {
  const RingPtr& W = x.alg.B();
  const FinModule& M = x.M;
  if (!M.ring()->same_as(*W)) return fault(MFFault::Shape, x.lo, 0, "M must be a W-module");
  if (x.fil.size() != x.phi.size()) {
    return fault(MFFault::Shape, x.lo, 0, "fil and phi windows differ in length");
  }
  for (std::size_t k = 0; k < x.fil.size(); ++k) {
    const int i = x.lo + static_cast<int>(k);
    const FilStep& s = x.fil[k];
    if (s.incl.rows() != M.rank() || s.incl.cols() != s.module.rank() ||
        x.phi[k].rows() != M.rank() || x.phi[k].cols() != s.module.rank()) {
      return fault(MFFault::Shape, i, 0, "step " + std::to_string(i) + " has the wrong shape");
    }
  }
  for (std::size_t k = 0; k < x.fil.size(); ++k) {
    const int i = x.lo + static_cast<int>(k);
    const FilStep& s = x.fil[k];
    if (!is_well_defined(s.module, M, s.incl) || !is_injective(ModuleMap(s.module, M, s.incl))) {
      return fault(MFFault::NotInclusion, i, 0,
                   "Fil^" + std::to_string(i) + " -> M is not an injective module map");
    }
    if (!is_well_defined(s.module, M, x.phi[k])) {
      return fault(MFFault::PhiIllDefined, i, 0,
                   "phi " + std::to_string(i) + " does not respect the orders of Fil generators");
    }
  }
  if (!M.is_zero()) {
    if (x.fil.empty() ||
        !is_surjective(ModuleMap(x.fil.front().module, M, x.fil.front().incl))) {
      return fault(MFFault::NotExhaustive, x.lo, 0,
                   "Fil^" + std::to_string(x.lo) + " must be all of M");
    }
  }
  std::vector<Matrix> J;
  for (std::size_t k = 0; k + 1 < x.fil.size(); ++k) {
    const int i = x.lo + static_cast<int>(k) + 1;
    Factor f = factor_through(M, x.fil[k], x.fil[k + 1]);
    if (!f.J) {
      return fault(MFFault::NotDecreasing, i, f.failing,
                   "Fil^" + std::to_string(i) + " is not contained in Fil^" +
                       std::to_string(i - 1));
    }
    J.push_back(std::move(*f.J));
  }
  const RingElem p = W->p_power(1);
  for (std::size_t k = 0; k + 1 < x.fil.size(); ++k) {
    const int i = x.lo + static_cast<int>(k);
    Matrix lhs = x.phi[k] * sigma(J[k]);
    Matrix rhs = x.phi[k + 1].scaled(p);
    if (auto w = first_diff(M, lhs, rhs)) {
      return fault(MFFault::PhiIncompatible, i + 1, *w,
                   "phi " + std::to_string(i) + " restricted to Fil^" + std::to_string(i + 1) +
                       " is not p * phi " + std::to_string(i + 1));
    }
  }
  if (require_span && !M.is_zero()) {
    Quotient q = quotient(M, hstack_all(W, M.rank(), x.phi));
    for (std::size_t g = 0; g < M.rank(); ++g) {
      if (!q.module.is_zero(q.module.reduce(q.proj.column(g)))) {
        return fault(MFFault::SpanFails, x.lo, g, "the images of the phi^i do not span M");
      }
    }
  }
  return {};
}

FilteredFModule tate(const AlgebraSpec& alg, int i) {
  FilteredFModule x;
  x.alg = alg;
  x.M = FinModule::free(alg.B(), 1);
  x.lo = i;
  x.fil.push_back({x.M, Matrix::identity(alg.B(), 1)});
  x.phi.push_back(Matrix::identity(alg.B(), 1));
  return x;
}

FilteredFModule mf_direct_sum(const FilteredFModule& x, const FilteredFModule& y) {
  if (!x.alg.B()->same_as(*y.alg.B())) throw RingMismatch("mf_direct_sum: different W");
  const RingPtr& W = x.alg.B();
  FilteredFModule out;
  out.alg = x.alg;
  std::vector<int> mexps = x.M.exps();
  mexps.insert(mexps.end(), y.M.exps().begin(), y.M.exps().end());
  Quotient qm = sorted_sum(W, mexps);
  out.M = qm.module;
  const bool xe = x.fil.empty(), ye = y.fil.empty();
  if (xe && ye) {
    out.lo = std::min(x.lo, y.lo);
    return out;
  }
  out.lo = xe ? y.lo : ye ? x.lo : std::min(x.lo, y.lo);
  const int hi = xe ? y.hi() : ye ? x.hi() : std::max(x.hi(), y.hi());
  for (int i = out.lo; i <= hi; ++i) {
    FilStep sx = x.step(i), sy = y.step(i);
    std::vector<int> fexps = sx.module.exps();
    fexps.insert(fexps.end(), sy.module.exps().begin(), sy.module.exps().end());
    Quotient qf = sorted_sum(W, fexps);
    Matrix incl = qm.proj * block_diag(sx.incl, sy.incl) * qf.section;
    Matrix phi = qm.proj * block_diag(x.phi_at(i), y.phi_at(i)) * qf.section;
    out.fil.push_back({qf.module, std::move(incl)});
    out.phi.push_back(std::move(phi));
  }
  return out;
}

FilteredFModule mf_with_phi(const FilteredFModule& x, std::vector<Matrix> phi) {
  FilteredFModule out = x;
  out.phi = std::move(phi);
  return out;
}

MBarResult mbar(const FilteredFModule& x) {
  const RingPtr& W = x.alg.B();
  const FinModule& M = x.M;
  MBarResult r;
  std::vector<int> raw_exps;
  for (const FilStep& s : x.fil) {
    r.offsets.push_back(raw_exps.size());
    raw_exps.insert(raw_exps.end(), s.module.exps().begin(), s.module.exps().end());
  }
  const std::size_t raw = raw_exps.size();
  // [x]_{i-1} - [p x]_i for the generators x of Fil^i.
  Matrix rel = zero_cols(W, raw);
  const RingElem p = W->p_power(1);
  for (std::size_t k = 1; k < x.fil.size(); ++k) {
    Factor f = factor_through(M, x.fil[k - 1], x.fil[k]);
    if (!f.J) throw InternalError("mbar: filtration is not decreasing");
    Matrix block(W, raw, x.fil[k].module.rank());
    for (std::size_t c = 0; c < block.cols(); ++c) {
      for (std::size_t j = 0; j < f.J->rows(); ++j) block(r.offsets[k - 1] + j, c) = (*f.J)(j, c);
      block(r.offsets[k] + c, c) = W->neg(p);
    }
    rel = hstack(rel, block);
  }
  r.q = present(W, raw_exps, rel.cols() ? rel : Matrix());
  r.Mbar = r.q.module;
  Matrix phiall = hstack_all(W, M.rank(), x.phi);
  Matrix bad = phiall * sigma(rel);
  for (std::size_t c = 0; c < bad.cols(); ++c) {
    if (!M.is_zero(bad.column(c))) throw InternalError("mbar: phibar does not descend");
  }
  r.phibar = reduce_rows(M, phiall * sigma(r.q.section));
  for (std::size_t k = 0; k < x.fil.size(); ++k) {
    r.slotmaps.push_back(r.q.proj.block(0, r.offsets[k], r.Mbar.rank(), x.fil[k].module.rank()));
  }
  r.length_M = M.length();
  r.length_Mbar = r.Mbar.length();
  if (r.length_M != r.length_Mbar) {
    throw InternalError("mbar: len(Mbar) = " + std::to_string(r.length_Mbar) +
                        " differs from len(M) = " + std::to_string(r.length_M));
  }
  return r;
}

bool phibar_surjective(const FilteredFModule& x) {
  MBarResult r = mbar(x);
  return is_surjective(ModuleMap(r.Mbar, x.M, r.phibar));
}

bool is_mf_fl(const FilteredFModule& x) {
  MBarResult r = mbar(x);
  return is_isomorphism(ModuleMap(r.Mbar, x.M, r.phibar));
}

bool is_mf_proj(const FilteredFModule& x) { return x.M.is_free() && is_mf_fl(x); }

std::vector<Matrix> MFHom::elements(const AlgebraSpec& alg, std::uint64_t budget) const {
  std::vector<Matrix> out;
  const ChainRing& B = *alg.B();
  for (const Vector& c : tforge::elements(module, budget)) {
    Matrix g(alg.B(), target.rank(), source_rank);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (c[k] == RingElem{}) continue;
      g = g + basis[k].scaled(B.from_int(c[k].c[0]));
    }
    out.push_back(reduce_rows(target, std::move(g)));
  }
  return out;
}

MFHom mf_hom(const FilteredFModule& x, const FilteredFModule& y) {
  if (!x.alg.B()->same_as(*y.alg.B())) throw RingMismatch("mf_hom: different W");
  const AlgebraSpec& alg = x.alg;
  const RingPtr& R = alg.R();
  const RingPtr& W = alg.B();
  const ChainRing& B = *W;
  const std::size_t f = static_cast<std::size_t>(alg.degree());
  MFHom out;
  out.target = y.M;
  out.source_rank = x.M.rank();

  int lo = std::min(x.lo, y.lo);
  int hi = std::max(x.hi(), y.hi());

  // Unknowns: g, then h_i : Fil^i X -> Fil^i Y with incl'_i h_i = g incl_i.
  struct Gen {
    int block;  // -1 for g, else index into steps
    std::size_t k;
    std::size_t t;
  };
  std::vector<Gen> gens;
  std::vector<int> pexps;
  std::vector<HomModule> homs;
  HomModule hg = hom_module(x.M, y.M);
  for (std::size_t k = 0; k < hg.module.rank(); ++k)
    for (std::size_t t = 0; t < f; ++t) {
      gens.push_back({-1, k, t});
      pexps.push_back(hg.module.exp(k));
    }
  const std::size_t gcount = gens.size();
  std::vector<FilStep> sx, sy;
  std::vector<Matrix> px, py;
  for (int i = lo; i <= hi; ++i) {
    sx.push_back(x.step(i));
    sy.push_back(y.step(i));
    px.push_back(x.phi_at(i));
    py.push_back(y.phi_at(i));
    homs.push_back(hom_module(sx.back().module, sy.back().module));
    const int b = i - lo;
    for (std::size_t k = 0; k < homs.back().module.rank(); ++k)
      for (std::size_t t = 0; t < f; ++t) {
        gens.push_back({b, k, t});
        pexps.push_back(homs.back().module.exp(k));
      }
  }
  if (gcount == 0) {
    out.module = FinModule::zero(R);
    return out;
  }

  // Targets: for each i, two copies of Hom(Fil^i X, M') as columns in M'.
  std::vector<int> texps;
  std::vector<std::size_t> toff;
  const std::size_t ry = y.M.rank();
  for (std::size_t b = 0; b < sx.size(); ++b) {
    toff.push_back(texps.size());
    for (int copy = 0; copy < 2; ++copy)
      for (std::size_t c = 0; c < sx[b].module.rank(); ++c)
        for (std::size_t j = 0; j < ry; ++j)
          for (std::size_t s = 0; s < f; ++s) texps.push_back(y.M.exp(j));
  }
  const std::size_t nt = texps.size();
  Matrix C(R, nt, gens.size());
  auto write = [&](std::size_t col, std::size_t b, int copy, const Matrix& m) {
    const std::size_t cols = sx[b].module.rank();
    for (std::size_t c = 0; c < cols; ++c) {
      Vector v = alg.restrict(m.column(c));
      const std::size_t base = toff[b] + (static_cast<std::size_t>(copy) * cols + c) * ry * f;
      for (std::size_t e = 0; e < v.size(); ++e) C(base + e, col) = R->add(C(base + e, col), v[e]);
    }
  };
  for (std::size_t col = 0; col < gens.size(); ++col) {
    const Gen& gn = gens[col];
    const RingElem xt = B.pow(B.gen(), gn.t);
    if (gn.block < 0) {
      Matrix g = hg.basis_map(gn.k).mat().scaled(xt);
      for (std::size_t b = 0; b < sx.size(); ++b) {
        write(col, b, 0, (g * sx[b].incl).scaled(B.neg(B.one())));
        write(col, b, 1, (g * px[b]).scaled(B.neg(B.one())));
      }
    } else {
      const std::size_t b = static_cast<std::size_t>(gn.block);
      Matrix h = homs[b].basis_map(gn.k).mat().scaled(xt);
      write(col, b, 0, sy[b].incl * h);
      write(col, b, 1, py[b] * sigma(h));
    }
  }
  Quotient qp = sorted_sum(R, pexps);
  Quotient qt = sorted_sum(R, texps);
  Matrix cm = qt.proj * C * qp.section;
  for (std::size_t j = 0; j < cm.rows(); ++j)
    for (std::size_t c = 0; c < cm.cols(); ++c)
      cm(j, c) = R->reduce_mod_p_power(cm(j, c), qt.module.exp(j));
  Matrix ker = kernel_generators(ModuleMap(qp.module, qt.module, cm));
  Matrix raw = qp.section * ker;

  // Project to the g coordinates.
  std::vector<int> gexps(pexps.begin(), pexps.begin() + static_cast<std::ptrdiff_t>(gcount));
  Quotient qg = sorted_sum(R, gexps);
  Matrix graw(R, gcount, raw.cols());
  for (std::size_t r = 0; r < gcount; ++r)
    for (std::size_t c = 0; c < raw.cols(); ++c) graw(r, c) = raw(r, c);
  Submodule sub = submodule(qg.module, qg.proj * graw);
  out.module = sub.module;
  for (std::size_t j = 0; j < sub.module.rank(); ++j) {
    Vector v = qg.section.apply(sub.inclusion.mat().column(j));
    Matrix g(W, ry, x.M.rank());
    for (std::size_t r = 0; r < gcount; ++r) {
      if (v[r] == RingElem{}) continue;
      const Gen& gn = gens[r];
      RingElem coef = B.mul(B.from_int(v[r].c[0]), B.pow(B.gen(), gn.t));
      g = g + hg.basis_map(gn.k).mat().scaled(coef);
    }
    out.basis.push_back(reduce_rows(y.M, std::move(g)));
  }
  return out;
}

bool is_mf_morphism(const FilteredFModule& x, const FilteredFModule& y, const Matrix& g) {
  if (g.rows() != y.M.rank() || g.cols() != x.M.rank()) return false;
  if (!is_well_defined(x.M, y.M, g)) return false;
  int lo = std::min(x.lo, y.lo);
  int hi = std::max(x.hi(), y.hi());
  for (int i = lo; i <= hi; ++i) {
    FilStep sx = x.step(i), sy = y.step(i);
    Matrix px = x.phi_at(i), py = y.phi_at(i);
    ModuleMap iy(sy.module, y.M, sy.incl);
    for (std::size_t c = 0; c < sx.module.rank(); ++c) {
      Vector v = (g * sx.incl).column(c);
      auto h = preimage(iy, v);
      if (!h) return false;
      Vector lhs = (py * sigma(Matrix::from_columns(g.ring(), h->size(), {*h}))).column(0);
      Vector rhs = (g * px).column(c);
      if (!y.M.equal(lhs, rhs)) return false;
    }
  }
  return true;
}

DiagramCategory mf_to_diagram(const std::vector<FilteredFModule>& objects,
                              const std::vector<std::string>& names) {
  if (objects.empty()) throw InvalidArgument("mf_to_diagram: no objects");
  const AlgebraSpec& alg = objects.front().alg;
  DiagramCategory d(alg);
  for (std::size_t k = 0; k < objects.size(); ++k) {
    const FilteredFModule& x = objects[k];
    if (!x.alg.B()->same_as(*alg.B())) throw RingMismatch("mf_to_diagram: different W");
    if (!x.M.is_free()) throw NonFree("object " + std::to_string(k) + " is not free over W");
    if (!is_mf_fl(x)) {
      throw InvalidArgument("object " + std::to_string(k) + " is not Fontaine-Laffaille");
    }
    d.add_object(k < names.size() ? names[k] : "X" + std::to_string(k), x.M.rank());
  }
  for (std::size_t k = 0; k < objects.size(); ++k)
    for (std::size_t l = 0; l < objects.size(); ++l)
      d.set_homs(k, l, mf_hom(objects[k], objects[l]).basis);
  DiagramCheck c = validate(d);
  if (!c.ok()) throw InternalError("mf_to_diagram: " + c.message);
  return d;
}

MFColimitResult mf_colimit_probe(const std::vector<FilteredFModule>& objects,
                                 const ColimitProbe& probe) {
  MFColimitResult res;
  if (objects.empty()) throw InvalidArgument("mf_colimit_probe: no objects");
  const AlgebraSpec& alg = objects.front().alg;
  const RingPtr& W = alg.B();
  for (std::size_t node : probe.nodes) {
    if (node >= objects.size()) throw InvalidArgument("probe node out of range");
    if (!objects[node].alg.B()->same_as(*W)) throw RingMismatch("probe: different W");
  }
  for (const ColimitProbe::Arrow& a : probe.arrows) {
    if (a.from >= probe.nodes.size() || a.to >= probe.nodes.size()) {
      throw InvalidArgument("probe arrow between missing nodes");
    }
    if (!is_mf_morphism(objects[probe.nodes[a.from]], objects[probe.nodes[a.to]], a.map)) {
      throw InvalidArgument("probe arrow is not a morphism of filtered F-modules");
    }
  }
  const std::size_t nn = probe.nodes.size();
  auto obj = [&](std::size_t node) -> const FilteredFModule& { return objects[probe.nodes[node]]; };

  std::vector<int> raw_exps;
  std::vector<std::size_t> off;
  for (std::size_t v = 0; v < nn; ++v) {
    off.push_back(raw_exps.size());
    raw_exps.insert(raw_exps.end(), obj(v).M.exps().begin(), obj(v).M.exps().end());
  }
  const std::size_t raw = raw_exps.size();
  Matrix rel = zero_cols(W, raw);
  for (const ColimitProbe::Arrow& a : probe.arrows) {
    const std::size_t rs = obj(a.from).M.rank();
    Matrix block(W, raw, rs);
    for (std::size_t c = 0; c < rs; ++c) {
      for (std::size_t j = 0; j < a.map.rows(); ++j) block(off[a.to] + j, c) = a.map(j, c);
      block(off[a.from] + c, c) = W->sub(block(off[a.from] + c, c), W->one());
    }
    rel = hstack(rel, block);
  }
  Quotient Q = present(W, raw_exps, rel.cols() ? rel : Matrix());
  res.fiber = Q.module;
  if (!Q.module.is_free()) {
    res.verdict = Verdict::NotApplicable;
    res.reason = "fiber colimit " + Q.module.to_string() + " is not free over W";
    return res;
  }

  FilteredFModule X;
  X.alg = alg;
  X.M = Q.module;
  bool any = false;
  int lo = 0, hi = -1;
  for (std::size_t v = 0; v < nn; ++v) {
    if (obj(v).fil.empty()) continue;
    lo = any ? std::min(lo, obj(v).lo) : obj(v).lo;
    hi = any ? std::max(hi, obj(v).hi()) : obj(v).hi();
    any = true;
  }
  X.lo = lo;
  for (int i = lo; any && i <= hi; ++i) {
    std::vector<int> fexps;
    std::vector<std::size_t> foff;
    for (std::size_t v = 0; v < nn; ++v) {
      foff.push_back(fexps.size());
      FilStep s = obj(v).step(i);
      fexps.insert(fexps.end(), s.module.exps().begin(), s.module.exps().end());
    }
    Quotient qf = sorted_sum(W, fexps);
    Matrix inclraw(W, raw, fexps.size());
    Matrix phiraw(W, raw, fexps.size());
    for (std::size_t v = 0; v < nn; ++v) {
      FilStep s = obj(v).step(i);
      Matrix ph = obj(v).phi_at(i);
      for (std::size_t j = 0; j < s.incl.rows(); ++j)
        for (std::size_t c = 0; c < s.incl.cols(); ++c) {
          inclraw(off[v] + j, foff[v] + c) = s.incl(j, c);
          phiraw(off[v] + j, foff[v] + c) = ph(j, c);
        }
    }
    Matrix pi = reduce_rows(Q.module, Q.proj * inclraw * qf.section);
    Matrix phic = Q.proj * phiraw * qf.section;
    ModuleMap pim(qf.module, Q.module, pi);
    Matrix ker = kernel_generators(pim);
    Matrix bad = phic * sigma(ker);
    for (std::size_t c = 0; c < bad.cols(); ++c) {
      if (!Q.module.is_zero(bad.column(c))) {
        res.verdict = Verdict::Refuted;
        res.reason = "phi " + std::to_string(i) + " does not descend to the colimit";
        return res;
      }
    }
    Submodule S = submodule(Q.module, pi);
    Matrix phi(W, Q.module.rank(), S.module.rank());
    for (std::size_t c = 0; c < S.module.rank(); ++c) {
      auto y = preimage(pim, S.inclusion.mat().column(c));
      if (!y) throw InternalError("mf_colimit_probe: image generator without preimage");
      Matrix col = phic * sigma(Matrix::from_columns(W, y->size(), {*y}));
      phi.set_column(c, Q.module.reduce(col.column(0)));
    }
    X.fil.push_back({S.module, S.inclusion.mat()});
    X.phi.push_back(std::move(phi));
  }
  MFCheck c = mf_validate(X, true);
  if (!c.ok()) {
    res.verdict = Verdict::Refuted;
    res.reason = "induced structure is invalid: " + c.message;
    return res;
  }
  if (!is_mf_fl(X)) {
    res.verdict = Verdict::Refuted;
    res.reason = "induced object is not Fontaine-Laffaille";
    return res;
  }
  res.verdict = Verdict::Verified;
  res.reason = "colimit " + Q.module.to_string() + " carries an MF_fl structure";
  res.colimit = std::move(X);
  return res;
}

}  // namespace tforge
