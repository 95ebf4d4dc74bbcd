#include "tforge/diagram.hpp"

#include <set>

#include "tforge/error.hpp"

namespace tforge {

std::optional<std::size_t> DiagramCategory::find(const std::string& name) const {
  for (std::size_t k = 0; k < objects_.size(); ++k)
    if (objects_[k].name == name) return k;
  return std::nullopt;
}

std::size_t DiagramCategory::add_object(std::string name, std::size_t rank) {
  objects_.push_back({std::move(name), rank});
  const std::size_t n = objects_.size();
  for (auto& row : homs_) row.resize(n);
  homs_.emplace_back(n);
  return n - 1;
}

void DiagramCategory::add_hom(std::size_t src, std::size_t dst, Matrix bmat) {
  if (src >= size() || dst >= size()) throw InvalidArgument("add_hom: no such object");
  if (bmat.rows() != objects_[dst].rank || bmat.cols() != objects_[src].rank) {
    throw DimensionMismatch("morphism " + objects_[src].name + " -> " +
                            objects_[dst].name + " has the wrong shape");
  }
  if (!bmat.ring()->same_as(*alg_.B())) {
    throw RingMismatch("morphism matrices must have entries in B");
  }
  homs_[src][dst].push_back(std::move(bmat));
}

void DiagramCategory::set_homs(std::size_t src, std::size_t dst,
                               std::vector<Matrix> gens) {
  if (src >= size() || dst >= size()) throw InvalidArgument("set_homs: no such object");
  homs_[src][dst].clear();
  for (Matrix& g : gens) add_hom(src, dst, std::move(g));
}

const std::vector<Matrix>& DiagramCategory::homs(std::size_t src,
                                                 std::size_t dst) const {
  return homs_.at(src).at(dst);
}

std::size_t DiagramCategory::fiber_rank(std::size_t k) const {
  return objects_[k].rank * static_cast<std::size_t>(alg_.degree());
}

FinModule DiagramCategory::fiber(std::size_t k) const {
  return alg_.free_carrier(objects_[k].rank);
}

BModule DiagramCategory::fiber_module(std::size_t k) const {
  return free_bmodule(alg_, objects_[k].rank);
}

Vector flatten(const AlgebraSpec& alg, const Matrix& bmat) {
  const std::size_t f = static_cast<std::size_t>(alg.degree());
  Vector out;
  out.reserve(bmat.rows() * bmat.cols() * f);
  for (std::size_t i = 0; i < bmat.rows(); ++i)
    for (std::size_t j = 0; j < bmat.cols(); ++j)
      for (std::size_t s = 0; s < f; ++s) out.push_back(alg.R()->from_int(bmat(i, j).c[s]));
  return out;
}

Matrix unflatten(const AlgebraSpec& alg, const Vector& v, std::size_t rows,
                 std::size_t cols) {
  const std::size_t f = static_cast<std::size_t>(alg.degree());
  if (v.size() != rows * cols * f) throw DimensionMismatch("unflatten: length");
  Matrix out(alg.B(), rows, cols);
  std::vector<std::int64_t> coords(f);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t s = 0; s < f; ++s) coords[s] = v[(i * cols + j) * f + s].c[0];
      out(i, j) = alg.B()->from_coords(coords);
    }
  return out;
}

Matrix span_matrix(const AlgebraSpec& alg, const std::vector<Matrix>& gens,
                   std::size_t rows, std::size_t cols) {
  std::vector<Vector> columns;
  for (const Matrix& g : gens) columns.push_back(flatten(alg, g));
  return Matrix::from_columns(alg.R(), rows * cols * static_cast<std::size_t>(alg.degree()),
                              columns);
}

std::optional<Vector> span_coefficients(const AlgebraSpec& alg,
                                        const std::vector<Matrix>& gens,
                                        const Matrix& F) {
  Vector target = flatten(alg, F);
  if (gens.empty()) {
    if (is_zero(target)) return Vector{};
    return std::nullopt;
  }
  return solve(span_matrix(alg, gens, F.rows(), F.cols()), target);
}

bool in_span(const AlgebraSpec& alg, const std::vector<Matrix>& gens,
             const Matrix& F) {
  return span_coefficients(alg, gens, F).has_value();
}

Matrix span_combination(const AlgebraSpec& alg, const std::vector<Matrix>& gens,
                        const Vector& coeffs, std::size_t rows, std::size_t cols) {
  if (coeffs.size() != gens.size()) throw DimensionMismatch("span_combination");
  Matrix out(alg.B(), rows, cols);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (coeffs[i] == RingElem{}) continue;
    RingElem c = alg.B()->from_int(coeffs[i].c[0]);
    out = out + gens[i].scaled(c);
  }
  return out;
}

Submodule span_module(const AlgebraSpec& alg, const std::vector<Matrix>& gens,
                      std::size_t rows, std::size_t cols) {
  const std::size_t dim = rows * cols * static_cast<std::size_t>(alg.degree());
  FinModule ambient = FinModule::free(alg.R(), dim);
  if (gens.empty()) return submodule(ambient, Matrix(alg.R(), dim, 0));
  return submodule(ambient, span_matrix(alg, gens, rows, cols));
}

std::vector<Matrix> span_elements(const AlgebraSpec& alg,
                                  const std::vector<Matrix>& gens,
                                  std::size_t rows, std::size_t cols,
                                  std::uint64_t budget) {
  Submodule s = span_module(alg, gens, rows, cols);
  std::vector<Matrix> out;
  for (const Vector& v : elements(s.module, budget)) {
    out.push_back(unflatten(alg, s.inclusion.apply(v), rows, cols));
  }
  return out;
}

const char* to_string(DiagramFault f) {
  switch (f) {
    case DiagramFault::None: return "none";
    case DiagramFault::ShapeMismatch: return "shape_mismatch";
    case DiagramFault::MissingIdentity: return "missing_identity";
    case DiagramFault::NotClosed: return "not_closed";
  }
  return "?";
}

DiagramCheck validate(const DiagramCategory& d) {
  const AlgebraSpec& alg = d.alg();
  const std::size_t n = d.size();
  DiagramCheck out;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t i = 0; i < d.homs(k, l).size(); ++i) {
        const Matrix& g = d.homs(k, l)[i];
        if (g.rows() != d.object(l).rank || g.cols() != d.object(k).rank) {
          out.fault = DiagramFault::ShapeMismatch;
          out.src = k;
          out.dst = l;
          out.first = i;
          out.message = "generator " + std::to_string(i) + " of " + d.object(k).name +
                        " -> " + d.object(l).name + " has the wrong shape";
          return out;
        }
      }
  for (std::size_t k = 0; k < n; ++k) {
    Matrix id = Matrix::identity(alg.B(), d.object(k).rank);
    if (!in_span(alg, d.homs(k, k), id)) {
      out.fault = DiagramFault::MissingIdentity;
      out.src = out.mid = out.dst = k;
      out.message = "identity of " + d.object(k).name + " is not in its hom span";
      return out;
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t l = 0; l < n; ++l) {
        const auto& first = d.homs(k, m);
        const auto& second = d.homs(m, l);
        for (std::size_t i = 0; i < first.size(); ++i)
          for (std::size_t j = 0; j < second.size(); ++j) {
            if (in_span(alg, d.homs(k, l), second[j] * first[i])) continue;
            out.fault = DiagramFault::NotClosed;
            out.src = k;
            out.mid = m;
            out.dst = l;
            out.first = i;
            out.second = j;
            out.message = "composite " + d.object(k).name + " -> " + d.object(m).name +
                          " -> " + d.object(l).name + " (generators " +
                          std::to_string(i) + ", " + std::to_string(j) +
                          ") is not in the hom span";
            return out;
          }
      }
  return out;
}

DiagramCategory hom_closure(const DiagramCategory& d) {
  DiagramCategory out = d;
  const AlgebraSpec& alg = d.alg();
  const std::size_t n = d.size();
  for (std::size_t k = 0; k < n; ++k) {
    Matrix id = Matrix::identity(alg.B(), d.object(k).rank);
    if (!in_span(alg, out.homs(k, k), id)) out.add_hom(k, k, id);
  }
  // Each pass appends only products outside the current span, so spans
  // grow strictly inside finite modules and the loop stops.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t l = 0; l < n; ++l) {
          const std::vector<Matrix> first = out.homs(k, m);
          const std::vector<Matrix> second = out.homs(m, l);
          for (const Matrix& a : first)
            for (const Matrix& b : second) {
              Matrix c = b * a;
              if (!in_span(alg, out.homs(k, l), c)) {
                out.add_hom(k, l, std::move(c));
                changed = true;
              }
            }
        }
  }
  return out;
}

DiagramCategory trivial_diagram(const AlgebraSpec& alg) {
  return full_endomorphism_diagram(alg, 1);
}

DiagramCategory grouplike_diagram(const AlgebraSpec& alg, std::size_t g) {
  DiagramCategory d(alg);
  for (std::size_t i = 0; i < g; ++i) {
    std::size_t k = d.add_object("G" + std::to_string(i), 1);
    d.add_hom(k, k, Matrix::identity(alg.B(), 1));
  }
  return d;
}

DiagramCategory comatrix_diagram(const AlgebraSpec& alg, std::size_t r) {
  DiagramCategory d(alg);
  d.add_object("V", r);
  d.add_hom(0, 0, Matrix::identity(alg.B(), r));
  return d;
}

DiagramCategory full_endomorphism_diagram(const AlgebraSpec& alg, std::size_t r) {
  DiagramCategory d(alg);
  d.add_object(r == 1 ? "B" : "V", r);
  const ChainRing& B = *alg.B();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      for (int s = 0; s < alg.degree(); ++s) {
        Matrix e(alg.B(), r, r);
        e(i, j) = B.pow(B.gen(), static_cast<std::uint64_t>(s));
        d.add_hom(0, 0, std::move(e));
      }
  return d;
}

}  // namespace tforge
