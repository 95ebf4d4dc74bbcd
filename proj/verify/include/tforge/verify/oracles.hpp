#pragma once

// Brute-force reference computations.  Everything here enumerates; nothing
// calls the normal-form machinery, so agreement with the library is a real
// cross-check.  Only usable on desk-scale inputs.

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "tforge/algebra.hpp"
#include "tforge/coalgebra.hpp"
#include "tforge/matrix.hpp"
#include "tforge/mf.hpp"
#include "tforge/module.hpp"
#include "tforge/ring.hpp"

namespace tforge::oracle {

using Code = std::vector<std::uint64_t>;

Code encode(const ChainRing& r, const Vector& v);
Vector decode(const ChainRing& r, const Code& c);

/// Every vector of R^n, in lexicographic code order.
std::vector<Vector> all_vectors(const ChainRing& r, std::size_t n,
                                std::uint64_t budget = 1u << 16);

/// The R-submodule generated by the given vectors, grown by closure.
std::set<Code> span(const ChainRing& r, std::size_t n,
                    const std::vector<Vector>& gens,
                    std::uint64_t budget = 1u << 16);

std::set<Code> kernel_set(const Matrix& a);
std::set<Code> column_span(const Matrix& a);
bool in_column_span(const Matrix& a, const Vector& b);

/// Number of elements of an R-module with exponent list exps.
std::uint64_t module_size(const ChainRing& r, const std::vector<int>& exps);

/// Inverse by exhaustive search over R (nullopt if a is not a unit).
std::optional<RingElem> inverse_by_search(const ChainRing& r,
                                          const RingElem& a);

/// Elements of M generated by the given coordinate vectors (reduced).
std::set<Code> module_span(const FinModule& m, const std::vector<Vector>& gens,
                           std::uint64_t budget = 1u << 16);
std::set<Code> element_set(const FinModule& m, std::uint64_t budget = 1u << 16);

/// Every well-defined R-linear map M -> N, found by trying all matrices
/// with entries reduced modulo p^{d_j} and keeping those that kill
/// p^{e_i} g_i.  Matrices come back with reduced entries.
std::vector<Matrix> hom_enumerate(const FinModule& m, const FinModule& n,
                                  std::uint64_t budget = 1u << 14);

/// |M (x)_R N|, counted from the naive presentation on pure tensors.
std::uint64_t tensor_size(const FinModule& m, const FinModule& n);

/// Searches a surjection R^k -> M (k = rank M) admitting a section.
bool has_split_surjection(const FinModule& m, std::uint64_t budget = 1u << 16);

/// |X (x)_B Y| from the span of all relations x^s a (x) b - a (x) x^s b
/// on generator pairs (every power of x, not just x itself).
std::uint64_t b_tensor_size(const AlgebraSpec& alg, const BModule& right,
                            const BModule& left);

/// Comodule maps M -> N found by filtering every R-linear map.
std::vector<Matrix> comodule_hom_enumerate(const Comodule& m, const Comodule& n,
                                           std::uint64_t budget = 1u << 14);

/// MF morphisms X -> Y: every W-linear map M -> M', kept when it carries
/// each Fil^i into Fil^i and commutes with phi^i on every element of Fil^i.
std::vector<Matrix> mf_hom_enumerate(const FilteredFModule& x, const FilteredFModule& y,
                                     std::uint64_t budget = 1u << 14);

}  // namespace tforge::oracle
