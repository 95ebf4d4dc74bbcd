#include "tforge/verify/oracles.hpp"

#include <algorithm>
#include <map>

#include "tforge/error.hpp"

namespace tforge::oracle {

Code encode(const ChainRing& r, const Vector& v) {
  Code c(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) c[i] = r.encode(v[i]);
  return c;
}

Vector decode(const ChainRing& r, const Code& c) {
  Vector v(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) v[i] = r.decode(c[i]);
  return v;
}

std::vector<Vector> all_vectors(const ChainRing& r, std::size_t n,
                                std::uint64_t budget) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total *= r.size();
    if (total > budget) throw BudgetExceeded("all_vectors: too many vectors");
  }
  std::vector<Vector> out;
  out.reserve(total);
  Code c(n, 0);
  for (std::uint64_t k = 0; k < total; ++k) {
    out.push_back(decode(r, c));
    for (std::size_t i = n; i-- > 0;) {
      if (++c[i] < r.size()) break;
      c[i] = 0;
    }
  }
  return out;
}

std::set<Code> span(const ChainRing& r, std::size_t n,
                    const std::vector<Vector>& gens, std::uint64_t budget) {
  std::set<Code> s{Code(n, 0)};
  for (const Vector& g : gens) {
    std::set<Code> next;
    for (const Code& c : s) {
      Vector v = decode(r, c);
      for (std::uint64_t k = 0; k < r.size(); ++k) {
        RingElem t = r.decode(k);
        Vector w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = r.add(v[i], r.mul(t, g[i]));
        next.insert(encode(r, w));
        if (next.size() > budget) throw BudgetExceeded("span: too large");
      }
    }
    s = std::move(next);
  }
  return s;
}

std::set<Code> kernel_set(const Matrix& a) {
  const ChainRing& r = *a.ring();
  std::set<Code> out;
  for (const Vector& v : all_vectors(r, a.cols())) {
    if (is_zero(a.apply(v))) out.insert(encode(r, v));
  }
  return out;
}

std::set<Code> column_span(const Matrix& a) {
  std::vector<Vector> cols;
  for (std::size_t j = 0; j < a.cols(); ++j) cols.push_back(a.column(j));
  return span(*a.ring(), a.rows(), cols);
}

bool in_column_span(const Matrix& a, const Vector& b) {
  return column_span(a).count(encode(*a.ring(), b)) > 0;
}

std::uint64_t module_size(const ChainRing& r, const std::vector<int>& exps) {
  std::uint64_t s = 1;
  for (int e : exps) {
    for (int k = 0; k < e * r.f(); ++k) s *= static_cast<std::uint64_t>(r.p());
  }
  return s;
}

std::optional<RingElem> inverse_by_search(const ChainRing& r,
                                          const RingElem& a) {
  for (std::uint64_t k = 0; k < r.size(); ++k) {
    RingElem b = r.decode(k);
    if (r.mul(a, b) == r.one()) return b;
  }
  return std::nullopt;
}

std::set<Code> module_span(const FinModule& m, const std::vector<Vector>& gens,
                           std::uint64_t budget) {
  const ChainRing& r = *m.ring();
  std::set<Code> s{encode(r, m.zero_vector())};
  for (const Vector& g : gens) {
    std::set<Code> next;
    for (const Code& c : s) {
      Vector v = decode(r, c);
      // Multiples t*g for t in R already cover R/p^e; iterate all of R.
      for (std::uint64_t k = 0; k < r.size(); ++k) {
        Vector w = add(r, v, scale(r, r.decode(k), g));
        next.insert(encode(r, m.reduce(w)));
        if (next.size() > budget) throw BudgetExceeded("module_span: too large");
      }
    }
    s = std::move(next);
  }
  return s;
}

std::set<Code> element_set(const FinModule& m, std::uint64_t budget) {
  std::vector<Vector> gens;
  for (std::size_t i = 0; i < m.rank(); ++i) gens.push_back(m.generator(i));
  return module_span(m, gens, budget);
}

std::vector<Matrix> hom_enumerate(const FinModule& m, const FinModule& n,
                                  std::uint64_t budget) {
  const RingPtr& ring = m.ring();
  const ChainRing& r = *ring;
  // Candidate values for each entry: R modulo p^{d_j}.
  std::vector<std::vector<RingElem>> values(n.rank());
  for (std::size_t j = 0; j < n.rank(); ++j) {
    std::set<RingElem> seen;
    for (std::uint64_t k = 0; k < r.size(); ++k) {
      seen.insert(r.reduce_mod_p_power(r.decode(k), n.exp(j)));
    }
    values[j].assign(seen.begin(), seen.end());
  }
  const std::size_t cells = n.rank() * m.rank();
  std::uint64_t total = 1;
  for (std::size_t c = 0; c < cells; ++c) {
    total *= values[c / std::max<std::size_t>(m.rank(), 1)].size();
    if (total > budget) throw BudgetExceeded("hom_enumerate: too many candidates");
  }
  std::vector<Matrix> out;
  std::vector<std::size_t> idx(cells, 0);
  for (std::uint64_t t = 0; t < total; ++t) {
    Matrix a(ring, n.rank(), m.rank());
    for (std::size_t c = 0; c < cells; ++c) {
      a(c / m.rank(), c % m.rank()) = values[c / m.rank()][idx[c]];
    }
    bool ok = true;
    for (std::size_t i = 0; i < m.rank() && ok; ++i) {
      Vector img = scale(r, r.p_power(m.exp(i)), a.column(i));
      ok = n.is_zero(img);
    }
    if (ok) out.push_back(a);
    for (std::size_t c = cells; c-- > 0;) {
      if (++idx[c] < values[c / m.rank()].size()) break;
      idx[c] = 0;
    }
  }
  return out;
}

std::uint64_t tensor_size(const FinModule& m, const FinModule& n) {
  const RingPtr& ring = m.ring();
  const std::size_t k = m.rank() * n.rank();
  std::vector<Vector> rels;
  for (std::size_t i = 0; i < m.rank(); ++i) {
    for (std::size_t j = 0; j < n.rank(); ++j) {
      Vector a = unit_vector(ring, k, i * n.rank() + j);
      rels.push_back(scale(*ring, ring->p_power(m.exp(i)), a));
      rels.push_back(scale(*ring, ring->p_power(n.exp(j)), a));
    }
  }
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= ring->size();
  return total / span(*ring, k, rels).size();
}

bool has_split_surjection(const FinModule& m, std::uint64_t budget) {
  const RingPtr& ring = m.ring();
  const ChainRing& r = *ring;
  const std::size_t k = m.rank();
  if (k == 0) return true;
  FinModule free = FinModule::free(ring, k);
  std::vector<Vector> elems = elements(m, budget);
  // Sections M -> R^k.
  std::vector<Matrix> sections = hom_enumerate(m, free, budget);
  std::uint64_t combos = 1;
  for (std::size_t i = 0; i < k; ++i) {
    combos *= elems.size();
    if (combos > budget) throw BudgetExceeded("has_split_surjection: too many maps");
  }
  std::vector<std::size_t> idx(k, 0);
  for (std::uint64_t t = 0; t < combos; ++t) {
    Matrix pi(ring, k, k);
    for (std::size_t c = 0; c < k; ++c) pi.set_column(c, elems[idx[c]]);
    for (const Matrix& s : sections) {
      Matrix comp = pi * s;
      bool id = true;
      for (std::size_t i = 0; i < k && id; ++i) {
        Vector col = comp.column(i);
        col[i] = r.sub(col[i], r.one());
        id = m.is_zero(col);
      }
      if (id) return true;
    }
    for (std::size_t c = k; c-- > 0;) {
      if (++idx[c] < elems.size()) break;
      idx[c] = 0;
    }
  }
  return false;
}

std::uint64_t b_tensor_size(const AlgebraSpec& alg, const BModule& right,
                            const BModule& left) {
  const RingPtr& R = alg.R();
  const FinModule& X = right.carrier;
  const FinModule& Y = left.carrier;
  const std::size_t k = X.rank() * Y.rank();
  std::vector<Vector> rels;
  for (std::size_t i = 0; i < X.rank(); ++i) {
    for (std::size_t j = 0; j < Y.rank(); ++j) {
      Vector a = unit_vector(R, k, i * Y.rank() + j);
      rels.push_back(scale(*R, R->p_power(X.exp(i)), a));
      rels.push_back(scale(*R, R->p_power(Y.exp(j)), a));
      Vector xa = X.generator(i);
      Vector yb = Y.generator(j);
      for (int s = 1; s < alg.degree(); ++s) {
        xa = right.act_x.apply(xa);
        yb = left.act_x.apply(yb);
        rels.push_back(sub(*R, kron(R, xa, Y.generator(j)), kron(R, X.generator(i), yb)));
      }
    }
  }
  std::uint64_t full = 1;
  for (std::size_t i = 0; i < k; ++i) full *= R->size();
  return full / span(*R, k, rels).size();
}

std::vector<Matrix> comodule_hom_enumerate(const Comodule& m, const Comodule& n,
                                           std::uint64_t budget) {
  std::vector<Matrix> out;
  for (const Matrix& f : hom_enumerate(m.carrier(), n.carrier(), budget)) {
    if (is_comodule_map(m, n, f)) out.push_back(f);
  }
  return out;
}

}  // namespace tforge::oracle

namespace tforge::oracle {

namespace {

Vector apply_phi(const Matrix& phi, const Vector& v) {
  const ChainRing& r = *phi.ring();
  Vector out(phi.rows());
  for (std::size_t j = 0; j < phi.rows(); ++j)
    for (std::size_t c = 0; c < v.size(); ++c)
      out[j] = r.add(out[j], r.mul(phi(j, c), r.frobenius(v[c])));
  return out;
}

}  // namespace

std::vector<Matrix> mf_hom_enumerate(const FilteredFModule& x, const FilteredFModule& y,
                                     std::uint64_t budget) {
  const ChainRing& r = *x.M.ring();
  const int lo = std::min(x.lo, y.lo);
  const int hi = std::max(x.hi(), y.hi());
  // Per step: every element of Fil^i as (image in M, phi^i of it).
  struct Table {
    std::vector<std::pair<Vector, Vector>> xs;
    std::map<Code, Code> ys;
  };
  std::vector<Table> tables;
  for (int i = lo; i <= hi; ++i) {
    Table t;
    FilStep sx = x.step(i), sy = y.step(i);
    Matrix px = x.phi_at(i), py = y.phi_at(i);
    for (const Vector& v : all_vectors(r, sx.module.rank(), budget))
      t.xs.emplace_back(sx.incl.apply(v), apply_phi(px, v));
    for (const Vector& v : all_vectors(r, sy.module.rank(), budget))
      t.ys.emplace(encode(r, y.M.reduce(sy.incl.apply(v))), encode(r, y.M.reduce(apply_phi(py, v))));
    tables.push_back(std::move(t));
  }
  std::vector<Matrix> out;
  for (const Matrix& g : hom_enumerate(x.M, y.M, budget)) {
    bool ok = true;
    for (const Table& t : tables) {
      for (const auto& [inc, ph] : t.xs) {
        auto it = t.ys.find(encode(r, y.M.reduce(g.apply(inc))));
        if (it == t.ys.end() || it->second != encode(r, y.M.reduce(g.apply(ph)))) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) out.push_back(g);
  }
  return out;
}

}  // namespace tforge::oracle
