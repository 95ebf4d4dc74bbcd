#include "tforge/recognition.hpp"

#include <unordered_map>

#include "tforge/error.hpp"

namespace tforge {

namespace {

// Columns restrict(gens_i) * u: the map span -> fiber, c |-> (sum c_i gens_i) u.
Matrix apply_columns(const AlgebraSpec& alg, const std::vector<Matrix>& gens,
                     std::size_t rows, const Vector& u) {
  std::vector<Vector> cols;
  for (const Matrix& g : gens) cols.push_back(alg.restrict(g).apply(u));
  return Matrix::from_columns(alg.R(), rows, cols);
}

bool reachable(const Matrix& a, const Vector& target) {
  if (a.cols() == 0) return is_zero(target);
  return solve(a, target).has_value();
}

std::uint64_t vector_code(const ChainRing& r, const Vector& v) {
  std::uint64_t code = 0;
  for (const RingElem& e : v) code = code * r.size() + r.encode(e);
  return code;
}

// Elements of every fiber, with reachability tables
// reach[m][iu][k][iv] = some morphism m -> k sends element iu to element iv.
class ElementTable {
 public:
  ElementTable(const DiagramCategory& d, std::uint64_t budget) : d_(d) {
    const AlgebraSpec& alg = d.alg();
    std::uint64_t total = 0;
    for (std::size_t k = 0; k < d.size(); ++k) {
      elems_.push_back(elements(d.fiber(k), budget));
      total += elems_.back().size();
      if (total > budget) throw BudgetExceeded("category of elements exceeds budget");
      std::unordered_map<std::uint64_t, std::size_t> idx;
      for (std::size_t i = 0; i < elems_.back().size(); ++i)
        idx[vector_code(*alg.R(), elems_.back()[i])] = i;
      index_.push_back(std::move(idx));
    }
    total_ = total;
    if (total * total > (std::uint64_t{1} << 28)) {
      throw BudgetExceeded("reachability table for " + std::to_string(total) +
                           " elements is too large");
    }
    reach_.resize(d.size());
    for (std::size_t m = 0; m < d.size(); ++m) {
      reach_[m].resize(elems_[m].size());
      for (std::size_t iu = 0; iu < elems_[m].size(); ++iu) {
        reach_[m][iu].resize(d.size());
        for (std::size_t k = 0; k < d.size(); ++k) {
          std::vector<bool>& row = reach_[m][iu][k];
          row.assign(elems_[k].size(), false);
          Matrix a = apply_columns(alg, d.homs(m, k), d.fiber_rank(k), elems_[m][iu]);
          Submodule img = submodule(d.fiber(k), a);
          for (const Vector& c : elements(img.module, budget)) {
            row[index_of(k, img.inclusion.apply(c))] = true;
          }
        }
      }
    }
  }

  std::uint64_t total() const { return total_; }
  const std::vector<Vector>& elems(std::size_t k) const { return elems_[k]; }
  std::size_t index_of(std::size_t k, const Vector& v) const {
    return index_[k].at(vector_code(*d_.alg().R(), d_.fiber(k).reduce(v)));
  }
  bool reaches(std::size_t m, std::size_t iu, std::size_t k, std::size_t iv) const {
    return reach_[m][iu][k][iv];
  }

  bool cone(std::size_t ka, std::size_t ia, std::size_t kb, std::size_t ib) const {
    for (std::size_t m = 0; m < d_.size(); ++m)
      for (std::size_t iu = 0; iu < elems_[m].size(); ++iu)
        if (reach_[m][iu][ka][ia] && reach_[m][iu][kb][ib]) return true;
    return false;
  }

 private:
  const DiagramCategory& d_;
  std::vector<std::vector<Vector>> elems_;
  std::vector<std::unordered_map<std::uint64_t, std::size_t>> index_;
  std::vector<std::vector<std::vector<std::vector<bool>>>> reach_;
  std::uint64_t total_ = 0;
};

// Generators (as B-matrices) of {H in span(m, k) : D H = 0}.
std::vector<Matrix> annihilated(const DiagramCategory& d, std::size_t m, std::size_t k,
                                const Matrix& D) {
  const AlgebraSpec& alg = d.alg();
  const auto& gens = d.homs(m, k);
  if (gens.empty()) return {};
  std::vector<Matrix> prods;
  for (const Matrix& h : gens) prods.push_back(D * h);
  Matrix sys = span_matrix(alg, prods, D.rows(), d.object(m).rank);
  Matrix ker = kernel(sys);
  std::vector<Matrix> out;
  for (std::size_t j = 0; j < ker.cols(); ++j) {
    out.push_back(span_combination(alg, gens, ker.column(j), d.object(k).rank,
                                   d.object(m).rank));
  }
  return out;
}

Matrix hstack_all(const RingPtr& R, std::size_t rows, const std::vector<Matrix>& parts) {
  Matrix out(R, rows, 0);
  for (const Matrix& p : parts) out = hstack(out, p);
  return out;
}

// Generators of the cocones from the probe into object c, each as the list
// of per-node B-matrices.
std::vector<std::vector<Matrix>> cocone_generators(const DiagramCategory& d,
                                                   const ColimitProbe& probe,
                                                   std::size_t c) {
  const AlgebraSpec& alg = d.alg();
  const RingPtr& R = alg.R();
  const std::size_t rc = d.object(c).rank;
  std::vector<std::size_t> start;
  std::size_t total = 0;
  for (std::size_t node : probe.nodes) {
    start.push_back(total);
    total += d.homs(node, c).size();
  }
  if (total == 0) return {};
  Matrix sys(R, 0, total);
  for (const auto& a : probe.arrows) {
    const std::size_t ni = probe.nodes[a.from], nj = probe.nodes[a.to];
    const std::size_t rows = rc * d.object(ni).rank * static_cast<std::size_t>(alg.degree());
    Matrix block(R, rows, total);
    const auto& gj = d.homs(nj, c);
    for (std::size_t g = 0; g < gj.size(); ++g) {
      Vector col = flatten(alg, gj[g] * a.map);
      for (std::size_t r = 0; r < rows; ++r) block(r, start[a.to] + g) = col[r];
    }
    const auto& gi = d.homs(ni, c);
    for (std::size_t g = 0; g < gi.size(); ++g) {
      Vector col = flatten(alg, gi[g]);
      for (std::size_t r = 0; r < rows; ++r)
        block(r, start[a.from] + g) = R->sub(block(r, start[a.from] + g), col[r]);
    }
    sys = vstack(sys, block);
  }
  Matrix ker = sys.rows() ? kernel(sys) : Matrix::identity(R, total);
  std::vector<std::vector<Matrix>> out;
  for (std::size_t j = 0; j < ker.cols(); ++j) {
    Vector coeff = ker.column(j);
    std::vector<Matrix> q;
    for (std::size_t i = 0; i < probe.nodes.size(); ++i) {
      const auto& gens = d.homs(probe.nodes[i], c);
      Vector part(coeff.begin() + static_cast<std::ptrdiff_t>(start[i]),
                  coeff.begin() + static_cast<std::ptrdiff_t>(start[i] + gens.size()));
      q.push_back(span_combination(alg, gens, part, rc, d.object(probe.nodes[i]).rank));
    }
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace

IsoReflection check_iso_reflection(const DiagramCategory& d, std::uint64_t budget) {
  const AlgebraSpec& alg = d.alg();
  IsoReflection out;
  try {
    for (std::size_t k = 0; k < d.size(); ++k)
      for (std::size_t l = 0; l < d.size(); ++l) {
        if (d.object(k).rank != d.object(l).rank) continue;
        const std::size_t r = d.object(k).rank;
        for (const Matrix& F : span_elements(alg, d.homs(k, l), r, r, budget)) {
          ++out.morphisms_checked;
          Matrix Fr = alg.restrict(F);
          if (!is_invertible(Fr)) continue;
          Matrix G = alg.extend(inverse(Fr));
          if (in_span(alg, d.homs(l, k), G)) continue;
          out.verdict = Verdict::Refuted;
          out.reason = "a morphism " + d.object(k).name + " -> " + d.object(l).name +
                       " is invertible on fibers but its inverse is not a morphism";
          out.witness = IsoWitness{k, l, F};
          return out;
        }
      }
  } catch (const BudgetExceeded& e) {
    out.verdict = Verdict::Inconclusive;
    out.reason = e.what();
    return out;
  }
  out.verdict = Verdict::Verified;
  out.reason = "every morphism invertible on fibers has its inverse among the morphisms (" +
               std::to_string(out.morphisms_checked) + " checked)";
  return out;
}

bool iso_witness_holds(const DiagramCategory& d, const IsoWitness& w) {
  const AlgebraSpec& alg = d.alg();
  if (!in_span(alg, d.homs(w.src, w.dst), w.F)) return false;
  Matrix Fr = alg.restrict(w.F);
  if (!is_invertible(Fr)) return false;
  return !in_span(alg, d.homs(w.dst, w.src), alg.extend(inverse(Fr)));
}

bool has_cone(const DiagramCategory& d, const ElementObject& a, const ElementObject& b,
              std::uint64_t budget) {
  const AlgebraSpec& alg = d.alg();
  for (std::size_t m = 0; m < d.size(); ++m) {
    for (const Vector& u : elements(d.fiber(m), budget)) {
      Matrix ma = apply_columns(alg, d.homs(m, a.obj), d.fiber_rank(a.obj), u);
      if (!reachable(ma, a.v)) continue;
      Matrix mb = apply_columns(alg, d.homs(m, b.obj), d.fiber_rank(b.obj), u);
      if (reachable(mb, b.v)) return true;
    }
  }
  return false;
}

bool has_equalizer(const DiagramCategory& d, const ElementObject& src, std::size_t dst,
                   const Matrix& D, std::uint64_t budget) {
  (void)dst;
  const AlgebraSpec& alg = d.alg();
  if (is_zero(src.v)) return true;  // the zero morphism from anywhere
  for (std::size_t m = 0; m < d.size(); ++m) {
    std::vector<Matrix> hs = annihilated(d, m, src.obj, D);
    if (hs.empty()) continue;
    for (const Vector& u : elements(d.fiber(m), budget)) {
      if (reachable(apply_columns(alg, hs, d.fiber_rank(src.obj), u), src.v)) return true;
    }
  }
  return false;
}

bool cone_witness_holds(const DiagramCategory& d, const ConeWitness& w,
                        std::uint64_t budget) {
  return !has_cone(d, w.a, w.b, budget);
}

bool equalizer_witness_holds(const DiagramCategory& d, const EqualizerWitness& w,
                             std::uint64_t budget) {
  const AlgebraSpec& alg = d.alg();
  if (!in_span(alg, d.homs(w.source.obj, w.dst), w.D)) return false;
  if (!is_zero(alg.restrict(w.D).apply(w.source.v))) return false;
  return !has_equalizer(d, w.source, w.dst, w.D, budget);
}

Cofilteredness check_cofiltered(const DiagramCategory& d, std::uint64_t budget) {
  const AlgebraSpec& alg = d.alg();
  Cofilteredness out;
  if (d.size() == 0) {
    out.verdict = Verdict::Refuted;
    out.empty = true;
    out.reason = "the category of elements is empty";
    return out;
  }
  try {
    ElementTable table(d, budget);
    out.elements = table.total();
    // Cones over every pair of elements.
    for (std::size_t ka = 0; ka < d.size(); ++ka)
      for (std::size_t ia = 0; ia < table.elems(ka).size(); ++ia)
        for (std::size_t kb = ka; kb < d.size(); ++kb)
          for (std::size_t ib = (kb == ka ? ia + 1 : 0); ib < table.elems(kb).size(); ++ib) {
            if (table.cone(ka, ia, kb, ib)) continue;
            out.verdict = Verdict::Refuted;
            out.cone = ConeWitness{{ka, table.elems(ka)[ia]}, {kb, table.elems(kb)[ib]}};
            out.reason = "two elements have no common cone";
            return out;
          }
    // Equalizers of parallel pairs, through their differences.
    for (std::size_t k = 0; k < d.size(); ++k)
      for (std::size_t l = 0; l < d.size(); ++l) {
        const std::vector<Matrix> span =
            span_elements(alg, d.homs(k, l), d.object(l).rank, d.object(k).rank, budget);
        for (const Vector& v : table.elems(k)) {
          if (is_zero(v)) continue;
          for (const Matrix& D : span) {
            if (D.is_zero() || !is_zero(alg.restrict(D).apply(v))) continue;
            if (has_equalizer(d, {k, v}, l, D, budget)) continue;
            out.verdict = Verdict::Refuted;
            out.equalizer = EqualizerWitness{{k, v}, l, D};
            out.reason = "a parallel pair out of an element is equalized by nothing";
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
  out.reason = "exhaustive over " + std::to_string(out.elements) + " elements";
  return out;
}

ProbeResult check_colimit_probe(const DiagramCategory& d, const ColimitProbe& probe,
                                std::uint64_t budget) {
  const AlgebraSpec& alg = d.alg();
  const RingPtr& R = alg.R();
  const std::size_t f = static_cast<std::size_t>(alg.degree());
  ProbeResult res;
  res.probe = probe;
  for (const auto& a : probe.arrows) {
    if (a.from >= probe.nodes.size() || a.to >= probe.nodes.size()) {
      throw InvalidArgument("probe '" + probe.label + "': arrow endpoint out of range");
    }
    if (!in_span(alg, d.homs(probe.nodes[a.from], probe.nodes[a.to]), a.map)) {
      throw InvalidArgument("probe '" + probe.label + "': arrow is not a morphism");
    }
  }
  // Fiber colimit: direct sum of the node fibers modulo x - F x.
  std::vector<std::size_t> off;
  std::size_t total = 0;
  Matrix xs(R, 0, 0);
  for (std::size_t node : probe.nodes) {
    off.push_back(total);
    total += d.fiber_rank(node);
    xs = block_diag(xs, alg.x_action(d.object(node).rank));
  }
  std::vector<Vector> rels;
  for (const auto& a : probe.arrows) {
    Matrix Fr = alg.restrict(a.map);
    const std::size_t di = d.fiber_rank(probe.nodes[a.from]);
    const std::size_t dj = d.fiber_rank(probe.nodes[a.to]);
    for (std::size_t u = 0; u < di; ++u) {
      Vector col(total, RingElem{});
      for (std::size_t w = 0; w < dj; ++w) col[off[a.to] + w] = Fr(w, u);
      col[off[a.from] + u] = R->sub(col[off[a.from] + u], R->one());
      if (!is_zero(col)) rels.push_back(std::move(col));
    }
  }
  Quotient q = present(R, std::vector<int>(total, R->n()),
                       Matrix::from_columns(R, total, rels));
  BModule colim{q.module, ModuleMap(q.module, q.module, q.proj * xs * q.section)};
  if (!b_basis(alg, colim)) {
    res.verdict = Verdict::NotApplicable;
    res.reason = "fiber colimit " + q.module.to_string() + " is not free over B";
    return res;
  }
  res.fiber_colimit_rank = q.module.rank() / f;
  auto cocone_matrix = [&](const std::vector<Matrix>& parts) {
    std::vector<Matrix> rs;
    for (const Matrix& p : parts) rs.push_back(alg.restrict(p));
    return hstack_all(R, rs.empty() ? 0 : rs.front().rows(), rs) * q.section;
  };
  try {
    for (std::size_t c = 0; c < d.size(); ++c) {
      if (d.fiber_rank(c) != q.module.rank()) continue;
      const std::size_t dc = d.fiber_rank(c);
      auto gens = cocone_generators(d, probe, c);
      if (dc == 0) {
        // The colimit of a diagram into a zero fiber: every cocone into any
        // object is zero, so c is a colimit iff 0 : c -> e is a morphism.
        res.verdict = Verdict::Verified;
        res.colimit_object = c;
        res.cocone = Matrix(R, 0, total);
        res.reason = "zero object " + d.object(c).name;
        return res;
      }
      // Enumerate the cocone module through its generators.
      FinModule coeffs = FinModule::free(R, gens.size());
      for (const Vector& cvec : elements(coeffs, budget)) {
        std::vector<Matrix> qparts;
        for (std::size_t i = 0; i < probe.nodes.size(); ++i) {
          Matrix part(alg.B(), d.object(c).rank, d.object(probe.nodes[i]).rank);
          for (std::size_t g = 0; g < gens.size(); ++g) {
            if (cvec[g] == RingElem{}) continue;
            part = part + gens[g][i].scaled(alg.B()->from_int(cvec[g].c[0]));
          }
          qparts.push_back(std::move(part));
        }
        Matrix qbar = cocone_matrix(qparts);
        if (!is_invertible(qbar)) continue;
        Matrix qinv = inverse(qbar);
        bool universal = true;
        for (std::size_t e = 0; e < d.size() && universal; ++e) {
          for (const auto& t : cocone_generators(d, probe, e)) {
            Matrix s = cocone_matrix(t) * qinv;
            Matrix sb = alg.extend(s);
            if (!(alg.restrict(sb) == s) || !in_span(alg, d.homs(c, e), sb)) {
              universal = false;
              break;
            }
          }
        }
        if (!universal) continue;
        res.verdict = Verdict::Verified;
        res.colimit_object = c;
        std::vector<Matrix> rs;
        for (const Matrix& p : qparts) rs.push_back(alg.restrict(p));
        res.cocone = hstack_all(R, dc, rs);
        res.reason = "colimit " + d.object(c).name + " maps isomorphically to the fiber colimit";
        return res;
      }
    }
  } catch (const BudgetExceeded& e) {
    res.verdict = Verdict::Inconclusive;
    res.reason = e.what();
    return res;
  }
  res.verdict = Verdict::Refuted;
  res.reason = "fiber colimit is free of B-rank " + std::to_string(res.fiber_colimit_rank) +
               " but no object carries a universal cocone onto it";
  return res;
}

std::vector<ColimitProbe> auto_probes(const DiagramCategory& d, std::size_t limit) {
  std::vector<ColimitProbe> out;
  for (std::size_t k = 0; k < d.size(); ++k)
    for (std::size_t l = 0; l < d.size(); ++l) {
      const auto& gens = d.homs(k, l);
      Matrix zero(d.alg().B(), d.object(l).rank, d.object(k).rank);
      for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i; j <= gens.size(); ++j) {
          if (out.size() >= limit) return out;
          const Matrix& g = j < gens.size() ? gens[j] : zero;
          if (j == i) continue;
          ColimitProbe p;
          p.label = "coeq(" + d.object(k).name + "->" + d.object(l).name + " #" +
                    std::to_string(i) + ", " +
                    (j < gens.size() ? "#" + std::to_string(j) : std::string("0")) + ")";
          p.nodes = {k, l};
          p.arrows = {{0, 1, gens[i]}, {0, 1, g}};
          out.push_back(std::move(p));
        }
    }
  return out;
}

RecognitionReport recognition_check(const DiagramCategory& d, std::uint64_t budget,
                                    const std::vector<ColimitProbe>& probes) {
  RecognitionReport rep;
  rep.closure = validate(d);
  if (!rep.closure.ok()) {
    const std::string why = "not a category: " + rep.closure.message;
    rep.reflects_isos.reason = why;
    rep.cofiltered.reason = why;
    rep.rigid_colimits.reason = why;
    return rep;
  }
  rep.reflects_isos = check_iso_reflection(d, budget);
  rep.cofiltered = check_cofiltered(d, budget);

  std::vector<ColimitProbe> all = auto_probes(d, 64);
  all.insert(all.end(), probes.begin(), probes.end());
  RigidColimits& rc = rep.rigid_colimits;
  std::size_t applicable = 0, refuted = 0, open = 0;
  for (const ColimitProbe& p : all) {
    rc.probes.push_back(check_colimit_probe(d, p, budget));
    switch (rc.probes.back().verdict) {
      case Verdict::Refuted: ++refuted; ++applicable; break;
      case Verdict::Inconclusive: ++open; ++applicable; break;
      case Verdict::Verified: ++applicable; break;
      case Verdict::NotApplicable: break;
    }
  }
  if (refuted) {
    rc.verdict = Verdict::Refuted;
    rc.reason = std::to_string(refuted) + " of " + std::to_string(applicable) +
                " applicable probes have no preserved colimit";
  } else if (open) {
    rc.verdict = Verdict::Inconclusive;
    rc.reason = std::to_string(open) + " probes exceeded the budget";
  } else {
    rc.verdict = Verdict::Verified;
    rc.reason = std::to_string(applicable) + " applicable probes of " +
                std::to_string(all.size()) + " verified";
  }
  return rep;
}

}  // namespace tforge
