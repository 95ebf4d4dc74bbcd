#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tforge/algebra.hpp"
#include "tforge/diagram.hpp"
#include "tforge/recognition.hpp"
#include "tforge/tannaka.hpp"

namespace tforge {

/**
 * Filtered F-modules over W = GR(p^n, f), with R = Z/p^n as the base of
 * linearity (alg.R() = R, alg.B() = W).
 *
 * The filtration lives in the window lo..hi: Fil^i = Fil^lo = M below the
 * window and Fil^i = 0 above it.  fil[k] is the step i = lo + k, given as a
 * W-module with its inclusion matrix into M.  phi[k] encodes the
 * sigma-semilinear map phi^i : Fil^i -> M by phi^i(v) = Phi^i sigma(v),
 * with sigma applied to coordinates.
 */
struct FilStep {
  FinModule module;
  Matrix incl;  // W-matrix, rank(M) x rank(Fil^i)
};

struct FilteredFModule {
  AlgebraSpec alg;
  FinModule M;
  int lo = 0;
  std::vector<FilStep> fil;
  std::vector<Matrix> phi;

  int hi() const { return lo + static_cast<int>(fil.size()) - 1; }
  /// Step i for any integer i, following the window convention; below the
  /// window phi^i = p^{lo - i} phi^lo, above it everything is zero.
  FilStep step(int i) const;
  Matrix phi_at(int i) const;
};

enum class MFFault {
  None,
  Shape,
  NotAnnihilated,
  PhiIllDefined,
  NotInclusion,
  NotExhaustive,
  NotDecreasing,
  PhiIncompatible,
  SpanFails,
};
const char* to_string(MFFault f);

struct MFCheck {
  MFFault fault = MFFault::None;
  int step = 0;             // filtration index i
  std::size_t witness = 0;  // generator of Fil^i (or of M for SpanFails)
  std::string message;
  bool ok() const { return fault == MFFault::None; }
};

class MFError : public Error {
 public:
  explicit MFError(MFCheck c) : Error(c.message), check_(std::move(c)) {}
  const MFCheck& check() const { return check_; }

 private:
  MFCheck check_;
};

/// Raw input: M = sum W/p^{m_exps}, Fil^i generated by the columns of
/// fil_gens[k] and phi^i given on those generators by phi_gens[k].
struct MFData {
  AlgebraSpec alg;
  std::vector<int> m_exps;
  int lo = 0;
  std::vector<Matrix> fil_gens;
  std::vector<Matrix> phi_gens;
};

/// Order: Shape, NotAnnihilated, PhiIllDefined, then mf_validate.
MFCheck mf_check(const MFData& data, bool require_span = false);
/// Throws MFError on the first violation.
FilteredFModule mf_make(const MFData& data, bool require_span = false);

/// Order: Shape, NotInclusion, PhiIllDefined, NotExhaustive, NotDecreasing,
/// PhiIncompatible, SpanFails (only with require_span).
MFCheck mf_validate(const FilteredFModule& x, bool require_span = false);

/// Rank-one object W with Fil^i = W, Fil^{i+1} = 0 and phi^i = sigma.
FilteredFModule tate(const AlgebraSpec& alg, int i);
FilteredFModule mf_direct_sum(const FilteredFModule& x, const FilteredFModule& y);
/// The object on M with a different phi (no validation).
FilteredFModule mf_with_phi(const FilteredFModule& x, std::vector<Matrix> phi);

/// Mbar = (sum_{i in window} Fil^i) / <[x]_{i-1} - [p x]_i>, with phibar
/// the map induced by the phi^i.  Throws InternalError if phibar does not
/// descend or len(Mbar) != len(M).
struct MBarResult {
  FinModule Mbar;
  Quotient q;                    // raw = slots lo..hi stacked
  std::vector<std::size_t> offsets;
  Matrix phibar;                 // phibar(w) = phibar * sigma(w)
  std::vector<Matrix> slotmaps;  // Fil^i -> Mbar
  int length_M = 0;
  int length_Mbar = 0;
};
MBarResult mbar(const FilteredFModule& x);

bool phibar_surjective(const FilteredFModule& x);
bool is_mf_fl(const FilteredFModule& x);
bool is_mf_proj(const FilteredFModule& x);

/// Hom in MF as a module over R = Z/p^n.  basis[k] is the W-matrix of the
/// k-th canonical generator of `module`.
struct MFHom {
  FinModule module;
  std::vector<Matrix> basis;
  FinModule target;  // M of the codomain
  std::size_t source_rank = 0;
  /// Every morphism, without repeats.  Throws BudgetExceeded.
  std::vector<Matrix> elements(const AlgebraSpec& alg, std::uint64_t budget) const;
};
MFHom mf_hom(const FilteredFModule& x, const FilteredFModule& y);

/// Direct test of the three constraint families on a W-matrix.
bool is_mf_morphism(const FilteredFModule& x, const FilteredFModule& y, const Matrix& g);

/// Objects must pass is_mf_proj (NonFree / InvalidArgument otherwise).
/// Homs are the mf_hom bases; the result is validated as a category.
DiagramCategory mf_to_diagram(const std::vector<FilteredFModule>& objects,
                              const std::vector<std::string>& names = {});

/// Colimit of a finite diagram of MF objects: probe nodes index into
/// `objects` and arrows must be morphisms.  A free fiber colimit gets the
/// induced filtration (images of the Fil^i) and phi; the verdict is
/// Verified when that structure descends and lies in MF_fl.
struct MFColimitResult {
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
  FinModule fiber;
  std::optional<FilteredFModule> colimit;
};
MFColimitResult mf_colimit_probe(const std::vector<FilteredFModule>& objects,
                                 const ColimitProbe& probe);

}  // namespace tforge
