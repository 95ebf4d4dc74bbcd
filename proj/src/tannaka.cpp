#include "tforge/tannaka.hpp"

#include "tforge/error.hpp"

namespace tforge {

namespace {

bool columns_vanish(const FinModule& m, const Matrix& a) {
  for (std::size_t j = 0; j < a.cols(); ++j)
    if (!m.is_zero(a.column(j))) return false;
  return true;
}

// R-coordinates (in w(k)^vee) of xi o F for xi = x^t e_b^vee.
Vector dual_pullback(const AlgebraSpec& alg, const Matrix& F, std::size_t b,
                     std::size_t t) {
  const ChainRing& B = *alg.B();
  RingElem xt = B.pow(B.gen(), t);
  Vector row(F.cols());
  for (std::size_t j = 0; j < F.cols(); ++j) row[j] = B.mul(xt, F(b, j));
  return alg.restrict(row);
}

// The functional x^t e_b^vee : w(k) -> B as an f x d_k R-matrix.
Matrix dual_functional(const AlgebraSpec& alg, std::size_t rank, std::size_t b,
                       std::size_t t) {
  Matrix row(alg.B(), 1, rank);
  row(0, b) = alg.B()->pow(alg.B()->gen(), t);
  return alg.restrict(row);
}

// Action of an R-matrix on one tensor factor of every raw block.
Matrix raw_block_action(const DiagramCategory& d, const CoendResult& cr, bool left) {
  const AlgebraSpec& alg = d.alg();
  Matrix out(alg.R(), cr.raw_dim, cr.raw_dim);
  for (std::size_t k = 0; k < d.size(); ++k) {
    const std::size_t dk = d.fiber_rank(k);
    Matrix X = alg.x_action(d.object(k).rank);
    Matrix I = Matrix::identity(alg.R(), dk);
    Matrix blk = left ? kron(X, I) : kron(I, X);
    for (std::size_t i = 0; i < dk * dk; ++i)
      for (std::size_t j = 0; j < dk * dk; ++j)
        out(cr.offsets[k] + i, cr.offsets[k] + j) = blk(i, j);
  }
  return out;
}

}  // namespace

std::size_t CoendResult::raw_index(std::size_t k, std::size_t u, std::size_t v) const {
  return offsets[k] + u * dims[k] + v;
}

Vector CoendResult::class_of(const DiagramCategory& d, std::size_t k, const Vector& x,
                             const Vector& xi) const {
  const RingPtr& R = d.alg().R();
  Vector raw(raw_dim, RingElem{});
  Vector pure = kron(R, x, xi);
  for (std::size_t i = 0; i < pure.size(); ++i) raw[offsets[k] + i] = pure[i];
  return classmap.apply(raw);
}

Matrix coend_comult_raw(const DiagramCategory& d, const CoendResult& cr) {
  const AlgebraSpec& alg = d.alg();
  const RingPtr& R = alg.R();
  const std::size_t f = static_cast<std::size_t>(alg.degree());
  const std::size_t rl = cr.L->carrier().rank();
  Matrix raw(R, rl * rl, cr.raw_dim);
  for (std::size_t k = 0; k < d.size(); ++k) {
    const std::size_t dk = d.fiber_rank(k);
    for (std::size_t u = 0; u < dk; ++u)
      for (std::size_t v = 0; v < dk; ++v) {
        Vector col(rl * rl, RingElem{});
        for (std::size_t i = 0; i < d.object(k).rank; ++i) {
          Vector a = cr.classmap.column(cr.raw_index(k, u, i * f));
          Vector b = cr.classmap.column(cr.raw_index(k, i * f, v));
          col = add(*R, col, kron(R, a, b));
        }
        raw.set_column(cr.raw_index(k, u, v), col);
      }
  }
  return cr.L->CC.q.proj * raw;
}

Matrix coend_counit_raw(const DiagramCategory& d, const CoendResult& cr) {
  const AlgebraSpec& alg = d.alg();
  const ChainRing& B = *alg.B();
  const std::size_t f = static_cast<std::size_t>(alg.degree());
  Matrix out(alg.R(), f, cr.raw_dim);
  for (std::size_t k = 0; k < d.size(); ++k) {
    const std::size_t dk = d.fiber_rank(k);
    for (std::size_t u = 0; u < dk; ++u)
      for (std::size_t v = 0; v < dk; ++v) {
        if (u / f != v / f) continue;
        RingElem e = B.pow(B.gen(), u % f + v % f);
        Vector c = alg.restrict(Vector{e});
        for (std::size_t s = 0; s < f; ++s) out(s, cr.raw_index(k, u, v)) = c[s];
      }
  }
  return out;
}

CoendResult coend(const DiagramCategory& d) {
  const AlgebraSpec& alg = d.alg();
  const RingPtr& R = alg.R();
  const std::size_t f = static_cast<std::size_t>(alg.degree());
  CoendResult cr;
  for (std::size_t k = 0; k < d.size(); ++k) {
    cr.offsets.push_back(cr.raw_dim);
    cr.dims.push_back(d.fiber_rank(k));
    cr.raw_dim += d.fiber_rank(k) * d.fiber_rank(k);
  }
  // (F x) (x) xi - x (x) (xi o F) for every generator F : k -> l.
  std::vector<Vector> rels;
  for (std::size_t k = 0; k < d.size(); ++k)
    for (std::size_t l = 0; l < d.size(); ++l)
      for (const Matrix& F : d.homs(k, l)) {
        const std::size_t dk = d.fiber_rank(k), dl = d.fiber_rank(l);
        Matrix Fr = alg.restrict(F);
        for (std::size_t u = 0; u < dk; ++u)
          for (std::size_t v = 0; v < dl; ++v) {
            Vector col(cr.raw_dim, RingElem{});
            for (std::size_t w = 0; w < dl; ++w) col[cr.offsets[l] + w * dl + v] = Fr(w, u);
            Vector pull = dual_pullback(alg, F, v / f, v % f);
            for (std::size_t w = 0; w < dk; ++w) {
              RingElem& e = col[cr.offsets[k] + u * dk + w];
              e = R->sub(e, pull[w]);
            }
            if (!is_zero(col)) rels.push_back(std::move(col));
          }
      }
  cr.relations = Matrix::from_columns(R, cr.raw_dim, rels);
  Quotient q = present(R, std::vector<int>(cr.raw_dim, R->n()), cr.relations);
  cr.classmap = q.proj;
  cr.section = q.section;
  const FinModule& Lm = q.module;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const std::size_t dk = d.fiber_rank(k);
    cr.perobject.push_back(cr.classmap.block(0, cr.offsets[k], Lm.rank(), dk * dk));
  }

  Matrix left_raw = raw_block_action(d, cr, true);
  Matrix right_raw = raw_block_action(d, cr, false);
  if (!columns_vanish(Lm, cr.classmap * (left_raw * cr.relations)) ||
      !columns_vanish(Lm, cr.classmap * (right_raw * cr.relations))) {
    throw InternalError("coend: B-actions do not descend to the quotient");
  }
  Bimodule C = bimodule_make(alg, Lm, cr.classmap * left_raw * cr.section,
                             cr.classmap * right_raw * cr.section);

  // Placeholder comultiplication so that the tensor square is available.
  const std::size_t rl = Lm.rank();
  Coalgebra draft = coalgebra_assemble_raw(alg, C, Matrix(R, rl * rl, rl),
                                           Matrix(R, f, rl));
  cr.L = std::make_shared<const Coalgebra>(draft);
  Matrix delta = coend_comult_raw(d, cr);
  Matrix eps = coend_counit_raw(d, cr);
  if (!columns_vanish(draft.CC.module(), delta * cr.relations) ||
      !columns_vanish(alg.unit_carrier(), eps * cr.relations)) {
    throw InternalError("coend: Delta or eps does not descend to the quotient");
  }
  Coalgebra L = coalgebra_assemble(alg, C, delta * cr.section, eps * cr.section);
  cr.L = coalgebra_make(std::move(L));
  return cr;
}

bool same_presentation(const CoendResult& a, const CoendResult& b) {
  if (a.raw_dim != b.raw_dim || a.offsets != b.offsets) return false;
  const FinModule& La = a.L->carrier();
  const FinModule& Lb = b.L->carrier();
  if (!(La == Lb)) return false;
  if (!columns_vanish(La, a.classmap * b.relations)) return false;
  if (!columns_vanish(Lb, b.classmap * a.relations)) return false;
  ModuleMap P(Lb, La, a.classmap * b.section);
  if (!is_isomorphism(P)) return false;
  const Coalgebra& ca = *a.L;
  const Coalgebra& cb = *b.L;
  if (!(compose(ca.C.left_x, P) == compose(P, cb.C.left_x))) return false;
  if (!(compose(ca.C.right_x, P) == compose(P, cb.C.right_x))) return false;
  if (!(compose(ca.counit, P) == cb.counit)) return false;
  ModuleMap PP = b_tensor_map(cb.CC, ca.CC, {P.mat(), P.mat()});
  return compose(ca.comult, P) == compose(PP, cb.comult);
}

std::vector<Comodule> lift_coaction(const DiagramCategory& d, const CoendResult& cr) {
  const AlgebraSpec& alg = d.alg();
  const RingPtr& R = alg.R();
  const std::size_t f = static_cast<std::size_t>(alg.degree());
  const std::size_t rl = cr.L->carrier().rank();
  std::vector<Comodule> out;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const std::size_t dk = d.fiber_rank(k);
    Matrix raw(R, rl * dk, dk);
    for (std::size_t u = 0; u < dk; ++u) {
      Vector col(rl * dk, RingElem{});
      for (std::size_t i = 0; i < d.object(k).rank; ++i) {
        Vector c = cr.classmap.column(cr.raw_index(k, u, i * f));
        col = add(*R, col, kron(R, c, unit_vector(R, dk, i * f)));
      }
      raw.set_column(u, col);
    }
    out.push_back(comodule_assemble_raw(cr.L, d.fiber_module(k), raw));
  }
  return out;
}

const char* to_string(UnitVerdict v) {
  switch (v) {
    case UnitVerdict::Equal: return "equal";
    case UnitVerdict::StrictlySmaller: return "strictly_smaller";
    case UnitVerdict::NotComoduleMaps: return "not_comodule_maps";
  }
  return "?";
}

std::vector<UnitPairResult> unit_fully_faithful_check(
    const DiagramCategory& d, const std::vector<Comodule>& lifts) {
  const AlgebraSpec& alg = d.alg();
  std::vector<UnitPairResult> out;
  for (std::size_t k = 0; k < d.size(); ++k)
    for (std::size_t l = 0; l < d.size(); ++l) {
      UnitPairResult r;
      r.src = k;
      r.dst = l;
      HomModule amb = hom_module(d.fiber(k), d.fiber(l));
      std::vector<Vector> cols;
      for (const Matrix& F : d.homs(k, l)) {
        Matrix Fr = alg.restrict(F);
        if (!r.witness && !is_comodule_map(lifts[k], lifts[l], Fr)) {
          r.verdict = UnitVerdict::NotComoduleMaps;
          r.witness = F;
        }
        cols.push_back(amb.coords(Fr));
      }
      Submodule span = submodule(
          amb.module, Matrix::from_columns(alg.R(), amb.module.rank(), cols));
      HomSpace comod = comodule_hom(lifts[k], lifts[l]);
      r.span_length = span.module.length();
      r.hom_length = comod.module().length();
      if (r.verdict == UnitVerdict::Equal) {
        for (const ModuleMap& g : comod.basis) {
          if (preimage(span.inclusion, amb.coords(g)).has_value()) continue;
          r.verdict = UnitVerdict::StrictlySmaller;
          r.witness = alg.extend(g.mat());
          break;
        }
      }
      out.push_back(std::move(r));
    }
  return out;
}

FamilyDiagram family_diagram(CoalgebraPtr c, const std::vector<Comodule>& family) {
  const AlgebraSpec& alg = c->alg;
  FamilyDiagram fd;
  fd.diagram = DiagramCategory(alg);
  for (std::size_t k = 0; k < family.size(); ++k) {
    if (family[k].coalg.get() != c.get()) {
      throw InvalidArgument("family member " + std::to_string(k) +
                            " is a comodule over another coalgebra");
    }
    std::optional<BBasis> b = b_basis(alg, family[k].M);
    if (!b) throw NonFree("family member " + std::to_string(k) + " is not Cauchy");
    fd.diagram.add_object("F" + std::to_string(k), b->rank);
    fd.bases.push_back(std::move(*b));
  }
  for (std::size_t k = 0; k < family.size(); ++k)
    for (std::size_t l = 0; l < family.size(); ++l) {
      HomSpace hs = comodule_hom(family[k], family[l]);
      for (const ModuleMap& g : hs.basis) {
        if (g.is_zero()) continue;
        Matrix in_basis = fd.bases[l].from_carrier * g.mat() * fd.bases[k].to_carrier;
        fd.diagram.add_hom(k, l, alg.extend(in_basis));
      }
    }
  return fd;
}

CounitResult counit_map(CoalgebraPtr c, const std::vector<Comodule>& family) {
  const AlgebraSpec& alg = c->alg;
  const RingPtr& R = alg.R();
  const std::size_t f = static_cast<std::size_t>(alg.degree());
  CounitResult res;
  res.family = family_diagram(c, family);
  const DiagramCategory& d = res.family.diagram;
  res.coend = coend(d);
  const CoendResult& cr = res.coend;
  const FinModule& Cm = c->carrier();
  const std::size_t rc = Cm.rank();

  BModule unit = free_bmodule(alg, 1);
  BTensor CB = b_tensor(c->alg, c->C.right(), unit);
  Matrix back = right_unit(alg, CB, c->C.right()).mat() * CB.q.proj;
  Matrix nu_raw(R, rc, cr.raw_dim);
  for (std::size_t k = 0; k < d.size(); ++k) {
    const Comodule& m = family[k];
    const BBasis& basis = res.family.bases[k];
    const std::size_t dk = d.fiber_rank(k);
    Matrix rho_raw = m.CM.q.section * m.rho.mat() * basis.to_carrier;  // per column u
    for (std::size_t v = 0; v < dk; ++v) {
      Matrix xi = dual_functional(alg, d.object(k).rank, v / f, v % f) * basis.from_carrier;
      Matrix apply = back * kron(Matrix::identity(R, rc), xi) * rho_raw;
      for (std::size_t u = 0; u < dk; ++u) nu_raw.set_column(cr.raw_index(k, u, v), apply.column(u));
    }
  }
  res.well_defined = columns_vanish(Cm, nu_raw * cr.relations);
  res.nu = ModuleMap(cr.L->carrier(), Cm, nu_raw * cr.section);
  const Coalgebra& L = *cr.L;
  const ModuleMap& nu = res.nu;
  res.bimodule_map = compose(c->C.left_x, nu) == compose(nu, L.C.left_x) &&
                     compose(c->C.right_x, nu) == compose(nu, L.C.right_x);
  if (res.bimodule_map) {
    ModuleMap nn = b_tensor_map(L.CC, c->CC, {nu.mat(), nu.mat()});
    res.coalgebra_map = compose(c->counit, nu) == L.counit &&
                        compose(c->comult, nu) == compose(nn, L.comult);
  }
  res.injective = is_injective(nu);
  res.surjective = is_surjective(nu);
  return res;
}

bool flatness_check(const AlgebraSpec& alg, const Bimodule& carrier) {
  return b_basis(alg, carrier.right()).has_value();
}

bool flatness_check(const Coalgebra& l) { return flatness_check(l.alg, l.C); }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "verified";
    case Verdict::Refuted: return "refuted";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::NotApplicable: return "not_applicable";
  }
  return "?";
}

std::optional<Matrix> find_comodule_iso(const Comodule& m, const Comodule& n,
                                        std::uint64_t budget) {
  if (!(m.carrier() == n.carrier())) return std::nullopt;
  HomSpace hs = comodule_hom(m, n);
  for (const Vector& v : elements(hs.module(), budget)) {
    ModuleMap g = hs.ambient.from_coords(hs.sub.inclusion.apply(v));
    if (is_isomorphism(g)) return g.mat();
  }
  return std::nullopt;
}

EssentialSurjectivityProbe essential_surjectivity_probe(
    const CoendResult& cr, const std::vector<Comodule>& lifts, std::size_t max_rank,
    std::uint64_t budget) {
  const AlgebraSpec& alg = cr.L->alg;
  const RingPtr& R = alg.R();
  EssentialSurjectivityProbe out;
  try {
    for (std::size_t r = 1; r <= max_rank; ++r) {
      BModule M = free_bmodule(alg, r);
      const std::size_t dm = M.carrier.rank();
      Comodule shell = comodule_assemble_raw(
          cr.L, M, Matrix(R, cr.L->carrier().rank() * dm, dm));
      BModule target{shell.CM.module(),
                     b_tensor_action(shell.CM, 0, cr.L->C.left_x.mat())};
      HomSpace hs = b_hom(M, target);
      for (const Vector& v : elements(hs.module(), budget)) {
        ++out.structures;
        Matrix rho = hs.ambient.from_coords(hs.sub.inclusion.apply(v)).mat();
        Comodule cand = comodule_assemble(cr.L, M, rho);
        if (!comodule_check(cand).ok()) continue;
        ++out.comodules;
        bool found = false;
        for (const Comodule& lift : lifts) {
          if (find_comodule_iso(cand, lift, budget)) {
            found = true;
            break;
          }
        }
        if (!found) {
          out.verdict = Verdict::Refuted;
          out.reason = "a rank " + std::to_string(r) +
                       " comodule is isomorphic to no lifted fiber";
          out.witness = std::move(cand);
          return out;
        }
      }
    }
  } catch (const BudgetExceeded& e) {
    out.verdict = Verdict::Inconclusive;
    out.reason = e.what();
    return out;
  }
  out.verdict = Verdict::Verified;
  out.reason = "every comodule structure up to rank " + std::to_string(max_rank) +
               " is isomorphic to a lifted fiber";
  return out;
}

}  // namespace tforge
