#include "tforge/module.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "tforge/error.hpp"

namespace tforge {

namespace {

void require_same_ring(const RingPtr& a, const RingPtr& b, const char* what) {
  if (a.get() != b.get() && !a->same_as(*b)) {
    throw RingMismatch(std::string(what) + ": modules over different rings");
  }
}

// Stable permutation putting exps in descending order.
std::vector<std::size_t> descending_order(const std::vector<int>& exps) {
  std::vector<std::size_t> idx(exps.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return exps[a] > exps[b];
  });
  return idx;
}

}  // namespace

FinModule::FinModule(RingPtr ring, std::vector<int> exps)
    : ring_(std::move(ring)), exps_(std::move(exps)) {
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (exps_[i] < 1 || exps_[i] > ring_->n()) {
      throw InvalidArgument("module exponent " + std::to_string(exps_[i]) +
                            " outside 1.." + std::to_string(ring_->n()));
    }
    if (i > 0 && exps_[i] > exps_[i - 1]) {
      throw InvalidArgument("module exponents must be descending");
    }
  }
}

FinModule FinModule::free(RingPtr ring, std::size_t rank) {
  int n = ring->n();
  return FinModule(std::move(ring), std::vector<int>(rank, n));
}

bool FinModule::is_free() const {
  return std::all_of(exps_.begin(), exps_.end(),
                     [&](int e) { return e == ring_->n(); });
}

int FinModule::length() const {
  return std::accumulate(exps_.begin(), exps_.end(), 0);
}

int FinModule::prime_length() const { return length() * ring_->f(); }

std::uint64_t FinModule::size() const {
  const int bits_per = 64 - __builtin_clzll(static_cast<std::uint64_t>(ring_->p()));
  if (static_cast<long>(prime_length()) * bits_per > 62) {
    throw BudgetExceeded("module too large to count: " + to_string());
  }
  std::uint64_t s = 1;
  for (int k = 0; k < prime_length(); ++k) s *= static_cast<std::uint64_t>(ring_->p());
  return s;
}

Vector FinModule::reduce(const Vector& v) const {
  if (v.size() != rank()) throw DimensionMismatch("element has wrong length");
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = ring_->reduce_mod_p_power(v[i], exps_[i]);
  }
  return out;
}

bool FinModule::equal(const Vector& a, const Vector& b) const {
  return reduce(a) == reduce(b);
}

bool FinModule::is_zero(const Vector& v) const {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (ring_->val(v[i]) < exps_[i]) return false;
  }
  return true;
}

Vector FinModule::generator(std::size_t i) const {
  return unit_vector(ring_, rank(), i);
}

Matrix FinModule::relation_matrix() const {
  Vector d(rank());
  for (std::size_t i = 0; i < rank(); ++i) d[i] = ring_->p_power(exps_[i]);
  return Matrix::diagonal(ring_, d);
}

std::string FinModule::to_string() const {
  std::ostringstream os;
  os << "mod(";
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (i) os << ",";
    os << exps_[i];
  }
  os << ") over " << (ring_ ? ring_->name() : "?");
  return os.str();
}

bool operator==(const FinModule& a, const FinModule& b) {
  if (a.exps_ != b.exps_) return false;
  if (!a.ring_ || !b.ring_) return a.ring_ == b.ring_;
  return a.ring_->same_as(*b.ring_);
}

bool is_well_defined(const FinModule& src, const FinModule& dst,
                     const Matrix& mat) {
  const ChainRing& r = *src.ring();
  for (std::size_t j = 0; j < dst.rank(); ++j) {
    for (std::size_t i = 0; i < src.rank(); ++i) {
      int need = dst.exp(j) - src.exp(i);
      if (need > 0 && r.val(mat(j, i)) < need) return false;
    }
  }
  return true;
}

ModuleMap::ModuleMap(FinModule src, FinModule dst, Matrix mat)
    : src_(std::move(src)), dst_(std::move(dst)), mat_(std::move(mat)) {
  require_same_ring(src_.ring(), dst_.ring(), "ModuleMap");
  if (mat_.rows() != dst_.rank() || mat_.cols() != src_.rank()) {
    throw DimensionMismatch("ModuleMap: matrix is " + std::to_string(mat_.rows()) +
                            "x" + std::to_string(mat_.cols()) + ", expected " +
                            std::to_string(dst_.rank()) + "x" +
                            std::to_string(src_.rank()));
  }
  if (!mat_.ring()) mat_ = Matrix(src_.ring(), dst_.rank(), src_.rank());
  const ChainRing& r = *src_.ring();
  for (std::size_t j = 0; j < dst_.rank(); ++j) {
    for (std::size_t i = 0; i < src_.rank(); ++i) {
      int need = dst_.exp(j) - src_.exp(i);
      if (need > 0 && r.val(mat_(j, i)) < need) {
        throw InvalidArgument(
            "ModuleMap: entry (" + std::to_string(j) + "," + std::to_string(i) +
            ") = " + r.format(mat_(j, i)) + " is not divisible by p^" +
            std::to_string(need) + ", map is not well defined");
      }
      mat_(j, i) = r.reduce_mod_p_power(mat_(j, i), dst_.exp(j));
    }
  }
}

ModuleMap ModuleMap::identity(const FinModule& m) {
  return ModuleMap(m, m, Matrix::identity(m.ring(), m.rank()));
}

ModuleMap ModuleMap::zero(const FinModule& src, const FinModule& dst) {
  return ModuleMap(src, dst, Matrix(src.ring(), dst.rank(), src.rank()));
}

Vector ModuleMap::apply(const Vector& v) const {
  return dst_.reduce(mat_.apply(v));
}

bool operator==(const ModuleMap& a, const ModuleMap& b) {
  return a.src_ == b.src_ && a.dst_ == b.dst_ && a.mat_ == b.mat_;
}

ModuleMap compose(const ModuleMap& g, const ModuleMap& f) {
  if (!(f.dst() == g.src())) throw DimensionMismatch("compose: not composable");
  return ModuleMap(f.src(), g.dst(), g.mat() * f.mat());
}

ModuleMap add(const ModuleMap& a, const ModuleMap& b) {
  if (!(a.src() == b.src()) || !(a.dst() == b.dst())) {
    throw DimensionMismatch("add: maps have different shapes");
  }
  return ModuleMap(a.src(), a.dst(), a.mat() + b.mat());
}

ModuleMap sub(const ModuleMap& a, const ModuleMap& b) {
  if (!(a.src() == b.src()) || !(a.dst() == b.dst())) {
    throw DimensionMismatch("sub: maps have different shapes");
  }
  return ModuleMap(a.src(), a.dst(), a.mat() - b.mat());
}

ModuleMap scale(const RingElem& s, const ModuleMap& a) {
  return ModuleMap(a.src(), a.dst(), a.mat().scaled(s));
}

Quotient module_from_presentation(const Matrix& P) {
  Cokernel c = cokernel(P);
  Quotient q;
  q.module = FinModule(P.ring(), c.exps);
  q.proj = std::move(c.proj);
  q.section = std::move(c.section);
  return q;
}

Quotient present(const RingPtr& ring, const std::vector<int>& raw_exps,
                 const Matrix& relations) {
  const std::size_t k = raw_exps.size();
  if (relations.rows() != k && !(relations.rows() == 0 && relations.cols() == 0)) {
    throw DimensionMismatch("present: relation rows != generator count");
  }
  std::vector<std::size_t> torsion;
  for (std::size_t i = 0; i < k; ++i) {
    if (raw_exps[i] < ring->n()) torsion.push_back(i);
  }
  const std::size_t nrel = relations.rows() == k ? relations.cols() : 0;
  // Fast path: no relations beyond the torsion, only a reordering.
  bool trivial = nrel == 0;
  if (!trivial) {
    trivial = relations.is_zero();
  }
  if (trivial) {
    std::vector<std::size_t> order = descending_order(raw_exps);
    std::vector<int> exps;
    for (std::size_t t : order) exps.push_back(raw_exps[t]);
    Quotient q;
    q.module = FinModule(ring, exps);
    q.proj = Matrix(ring, order.size(), k);
    q.section = Matrix(ring, k, order.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      q.proj(pos, order[pos]) = ring->one();
      q.section(order[pos], pos) = ring->one();
    }
    return q;
  }
  Matrix full(ring, k, nrel + torsion.size());
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < nrel; ++j) full(i, j) = relations(i, j);
  for (std::size_t t = 0; t < torsion.size(); ++t) {
    full(torsion[t], nrel + t) = ring->p_power(raw_exps[torsion[t]]);
  }
  return module_from_presentation(full);
}

Quotient quotient(const FinModule& m, const Matrix& gens) {
  if (gens.rows() != m.rank() && gens.cols() != 0) {
    throw DimensionMismatch("quotient: generator length");
  }
  Matrix g = gens.rows() == m.rank() ? gens : Matrix(m.ring(), m.rank(), 0);
  return present(m.ring(), m.exps(), g);
}

Submodule submodule(const FinModule& m, const Matrix& gens) {
  const RingPtr& ring = m.ring();
  const std::size_t k = gens.rows() == m.rank() ? gens.cols() : 0;
  Matrix g = k ? gens : Matrix(ring, m.rank(), 0);
  // Relations among the generators: c with g c = 0 in M.
  Matrix rel;
  if (k == 0) {
    rel = Matrix(ring, 0, 0);
  } else {
    Matrix sys = hstack(g, m.relation_matrix());
    Matrix ker = kernel(sys);
    rel = ker.block(0, 0, k, ker.cols());
  }
  Quotient q = k ? module_from_presentation(rel)
                 : Quotient{FinModule::zero(ring), Matrix(ring, 0, 0),
                            Matrix(ring, 0, 0)};
  Matrix incl = k ? g * q.section : Matrix(ring, m.rank(), 0);
  Submodule s;
  s.module = q.module;
  s.inclusion = ModuleMap(q.module, m, incl);
  return s;
}

Matrix kernel_generators(const ModuleMap& g) {
  const RingPtr& ring = g.src().ring();
  const std::size_t mr = g.src().rank();
  if (mr == 0) return Matrix(ring, 0, 0);
  Matrix sys = hstack(g.mat(), g.dst().relation_matrix());
  Matrix ker = kernel(sys);
  Matrix top = ker.block(0, 0, mr, ker.cols());
  for (std::size_t j = 0; j < top.cols(); ++j) top.set_column(j, g.src().reduce(top.column(j)));
  return top;
}

Submodule map_kernel(const ModuleMap& g) {
  return submodule(g.src(), kernel_generators(g));
}

Submodule map_image(const ModuleMap& g) { return submodule(g.dst(), g.mat()); }

CokernelMap map_cokernel(const ModuleMap& g) {
  Quotient q = quotient(g.dst(), g.mat());
  CokernelMap c;
  c.module = q.module;
  c.proj = ModuleMap(g.dst(), q.module, q.proj);
  c.section = q.section;
  return c;
}

bool is_injective(const ModuleMap& g) {
  return map_image(g).module.length() == g.src().length();
}

bool is_surjective(const ModuleMap& g) {
  return map_image(g).module.length() == g.dst().length();
}

bool is_isomorphism(const ModuleMap& g) {
  return g.src().length() == g.dst().length() && is_surjective(g);
}

std::optional<Vector> preimage(const ModuleMap& g, const Vector& v) {
  const std::size_t mr = g.src().rank();
  Matrix sys = hstack(g.mat(), g.dst().relation_matrix());
  auto x = solve(sys, v);
  if (!x) return std::nullopt;
  Vector top(x->begin(), x->begin() + static_cast<std::ptrdiff_t>(mr));
  return g.src().reduce(top);
}

ModuleMap HomModule::basis_map(std::size_t k) const {
  const Slot& s = slots[k];
  Matrix m(src.ring(), dst.rank(), src.rank());
  m(s.j, s.i) = src.ring()->p_power(s.shift);
  return ModuleMap(src, dst, m);
}

std::vector<ModuleMap> HomModule::basis() const {
  std::vector<ModuleMap> out;
  out.reserve(slots.size());
  for (std::size_t k = 0; k < slots.size(); ++k) out.push_back(basis_map(k));
  return out;
}

Vector HomModule::coords(const ModuleMap& f) const { return coords(f.mat()); }

Vector HomModule::coords(const Matrix& mat) const {
  const ChainRing& r = *src.ring();
  Vector c(slots.size());
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const Slot& s = slots[k];
    RingElem e = r.reduce_mod_p_power(mat(s.j, s.i), dst.exp(s.j));
    if (r.val(e) < s.shift) {
      throw InvalidArgument("HomModule::coords: matrix is not a well-defined map");
    }
    c[k] = r.reduce_mod_p_power(r.divide_p_power(e, s.shift), module.exp(k));
  }
  return c;
}

ModuleMap HomModule::from_coords(const Vector& c) const {
  const ChainRing& r = *src.ring();
  Matrix m(src.ring(), dst.rank(), src.rank());
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const Slot& s = slots[k];
    m(s.j, s.i) = r.add(m(s.j, s.i), r.mul(c[k], r.p_power(s.shift)));
  }
  return ModuleMap(src, dst, m);
}

Matrix HomModule::flatten_matrix() const {
  const ChainRing& r = *src.ring();
  Matrix out(src.ring(), dst.rank() * src.rank(), slots.size());
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const Slot& s = slots[k];
    out(s.j * src.rank() + s.i, k) = r.p_power(s.shift);
  }
  return out;
}

HomModule hom_module(const FinModule& m, const FinModule& n) {
  require_same_ring(m.ring(), n.ring(), "hom_module");
  HomModule h;
  h.src = m;
  h.dst = n;
  std::vector<int> orders;
  std::vector<HomModule::Slot> raw;
  for (std::size_t j = 0; j < n.rank(); ++j) {
    for (std::size_t i = 0; i < m.rank(); ++i) {
      raw.push_back({j, i, std::max(0, n.exp(j) - m.exp(i))});
      orders.push_back(std::min(m.exp(i), n.exp(j)));
    }
  }
  std::vector<std::size_t> order = descending_order(orders);
  std::vector<int> exps;
  for (std::size_t t : order) {
    h.slots.push_back(raw[t]);
    exps.push_back(orders[t]);
  }
  h.module = FinModule(m.ring(), exps);
  return h;
}

Vector TensorModule::pure(const Vector& x, const Vector& y) const {
  return from_raw(kron(left.ring(), x, y));
}

Vector TensorModule::from_raw(const Vector& raw) const {
  Vector c(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) c[k] = raw[order[k]];
  return module.reduce(c);
}

Vector TensorModule::to_raw(const Vector& canonical) const {
  Vector raw(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) raw[order[k]] = canonical[k];
  return raw;
}

Matrix TensorModule::from_raw_matrix() const {
  Matrix m(left.ring(), order.size(), order.size());
  for (std::size_t k = 0; k < order.size(); ++k) m(k, order[k]) = left.ring()->one();
  return m;
}

Matrix TensorModule::to_raw_matrix() const { return from_raw_matrix().transpose(); }

TensorModule tensor_over_ring(const FinModule& m, const FinModule& n) {
  require_same_ring(m.ring(), n.ring(), "tensor_over_ring");
  TensorModule t;
  t.left = m;
  t.right = n;
  std::vector<int> raw;
  for (std::size_t i = 0; i < m.rank(); ++i)
    for (std::size_t j = 0; j < n.rank(); ++j)
      raw.push_back(std::min(m.exp(i), n.exp(j)));
  t.order = descending_order(raw);
  t.position.assign(raw.size(), 0);
  std::vector<int> exps;
  for (std::size_t k = 0; k < t.order.size(); ++k) {
    exps.push_back(raw[t.order[k]]);
    t.position[t.order[k]] = k;
  }
  t.module = FinModule(m.ring(), exps);
  return t;
}

ModuleMap tensor_maps(const TensorModule& src, const TensorModule& dst,
                      const ModuleMap& f, const ModuleMap& g) {
  Matrix k = kron(f.mat(), g.mat());
  return ModuleMap(src.module, dst.module,
                   dst.from_raw_matrix() * k * src.to_raw_matrix());
}

RingElem DualModule::evaluate(const Vector& xi, const Vector& x) const {
  const ChainRing& r = *src.ring();
  RingElem acc{};
  for (std::size_t i = 0; i < src.rank(); ++i) {
    acc = r.add(acc, r.mul(r.mul(xi[i], x[i]), r.p_power(r.n() - src.exp(i))));
  }
  return acc;
}

DualModule dual(const FinModule& m) { return DualModule{m, m}; }

bool is_projective(const FinModule& m) { return m.is_free(); }

DirectSum direct_sum(const std::vector<FinModule>& parts) {
  if (parts.empty()) throw InvalidArgument("direct_sum of no modules");
  const RingPtr& ring = parts.front().ring();
  std::vector<int> raw;
  std::vector<std::size_t> offset;
  for (const FinModule& p : parts) {
    require_same_ring(ring, p.ring(), "direct_sum");
    offset.push_back(raw.size());
    raw.insert(raw.end(), p.exps().begin(), p.exps().end());
  }
  std::vector<std::size_t> order = descending_order(raw);
  std::vector<std::size_t> position(raw.size());
  std::vector<int> exps;
  for (std::size_t k = 0; k < order.size(); ++k) {
    position[order[k]] = k;
    exps.push_back(raw[order[k]]);
  }
  DirectSum d;
  d.module = FinModule(ring, exps);
  for (std::size_t t = 0; t < parts.size(); ++t) {
    Matrix inj(ring, raw.size(), parts[t].rank());
    for (std::size_t i = 0; i < parts[t].rank(); ++i) {
      inj(position[offset[t] + i], i) = ring->one();
    }
    d.injections.emplace_back(parts[t], d.module, inj);
    d.projections.emplace_back(d.module, parts[t], inj.transpose());
  }
  return d;
}

ElementCursor::ElementCursor(const FinModule& m) : m_(&m) {
  const ChainRing& r = *m.ring();
  for (std::size_t i = 0; i < m.rank(); ++i) {
    std::uint64_t lim = 1;
    for (int k = 0; k < m.exp(i); ++k) lim *= static_cast<std::uint64_t>(r.p());
    for (int t = 0; t < r.f(); ++t) limits_.push_back(lim);
  }
  digits_.assign(limits_.size(), 0);
  current_ = m.zero_vector();
}

void ElementCursor::next() {
  if (done_) return;
  const int f = m_->ring()->f();
  // Coordinate 0 is most significant; inside a coordinate, the constant
  // term is most significant.
  for (std::size_t d = digits_.size(); d-- > 0;) {
    if (++digits_[d] < limits_[d]) {
      current_[d / f].c[d % f] = static_cast<std::int32_t>(digits_[d]);
      return;
    }
    digits_[d] = 0;
    current_[d / f].c[d % f] = 0;
  }
  done_ = true;
}

std::vector<Vector> elements(const FinModule& m, std::uint64_t budget) {
  if (m.prime_length() > 62 || m.size() > budget) {
    throw BudgetExceeded("enumerating " + m.to_string() + " exceeds budget " +
                         std::to_string(budget));
  }
  std::vector<Vector> out;
  out.reserve(m.size());
  for (ElementCursor c(m); !c.done(); c.next()) out.push_back(c.value());
  return out;
}

}  // namespace tforge
