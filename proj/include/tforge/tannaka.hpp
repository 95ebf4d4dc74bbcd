#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tforge/coalgebra.hpp"
#include "tforge/diagram.hpp"

namespace tforge {

/**
 * The coend L = int^k w(k) (x)_R w(k)^vee of a diagram category.
 *
 * Raw coordinates: the direct sum over objects of w(k) (x)_R w(k)^vee,
 * object k occupying [offsets[k], offsets[k] + d_k^2) with d_k the R-rank
 * of w(k).  Inside a block, the pure tensor of R-basis vector x_u of w(k)
 * (u = a f + s for x^s e_a) and dual basis vector xi_v (v = b f + t for
 * x^t e_b^vee) sits at u d_k + v.
 */
struct CoendResult {
  CoalgebraPtr L;
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> dims;  // d_k
  std::size_t raw_dim = 0;
  Matrix relations;  // raw_dim x (number of relations)
  Matrix classmap;   // raw -> canonical coordinates of L
  Matrix section;    // canonical -> raw lifts
  std::vector<Matrix> perobject;

  std::size_t raw_index(std::size_t k, std::size_t u, std::size_t v) const;
  /// Class of x (x) xi for R-coordinates x of w(k) and xi of w(k)^vee.
  Vector class_of(const DiagramCategory& d, std::size_t k, const Vector& x,
                  const Vector& xi) const;
};

/// Computes L, checks that Delta and eps vanish on every relation and runs
/// the coalgebra axioms.  Failures throw InternalError / AxiomError.
CoendResult coend(const DiagramCategory& d);

/// Raw-coordinate Delta (into the canonical coordinates of L (x)_B L) and
/// eps; exposed so the descent through the class map can be re-checked.
Matrix coend_comult_raw(const DiagramCategory& d, const CoendResult& cr);
Matrix coend_counit_raw(const DiagramCategory& d, const CoendResult& cr);

/// Same quotient of the same raw space, and the identity on raw
/// coordinates carries one Delta and eps to the other.
bool same_presentation(const CoendResult& a, const CoendResult& b);

/// The coaction rho_k(x) = sum_i [x (x) e_i^vee]_k (x) e_i on every fiber.
std::vector<Comodule> lift_coaction(const DiagramCategory& d, const CoendResult& cr);

enum class UnitVerdict { Equal, StrictlySmaller, NotComoduleMaps };
const char* to_string(UnitVerdict v);

struct UnitPairResult {
  std::size_t src = 0;
  std::size_t dst = 0;
  UnitVerdict verdict = UnitVerdict::Equal;
  int span_length = 0;  // composition length of the hom span over R
  int hom_length = 0;   // of the comodule hom module
  /// StrictlySmaller: a comodule map outside the span.  NotComoduleMaps: the
  /// offending generator.  Both as B-matrices.
  std::optional<Matrix> witness;
};

/// Compares each hom span with the full comodule hom of the lifts.
std::vector<UnitPairResult> unit_fully_faithful_check(
    const DiagramCategory& d, const std::vector<Comodule>& lifts);

/// A family of Cauchy comodules as a diagram category: fibers in B-basis
/// coordinates and homs the full comodule homs.
struct FamilyDiagram {
  DiagramCategory diagram;
  std::vector<BBasis> bases;
};
/// Throws NonFree if a member is not Cauchy.
FamilyDiagram family_diagram(CoalgebraPtr c, const std::vector<Comodule>& family);

struct CounitResult {
  FamilyDiagram family;
  CoendResult coend;
  ModuleMap nu;  // L(family) -> C
  bool well_defined = false;
  bool bimodule_map = false;
  bool coalgebra_map = false;
  bool injective = false;
  bool surjective = false;
  bool iso() const { return injective && surjective; }
};

/// nu[m (x) xi] = (id (x) xi)(rho(m)) through C (x)_B B = C.
CounitResult counit_map(CoalgebraPtr c, const std::vector<Comodule>& family);

/// Right B-module of L free over B.
bool flatness_check(const Coalgebra& l);
bool flatness_check(const AlgebraSpec& alg, const Bimodule& carrier);

enum class Verdict { Verified, Refuted, Inconclusive, NotApplicable };
const char* to_string(Verdict v);

/// Every comodule structure on B^r (r <= max_rank), tested for isomorphism
/// with some lifted fiber.
struct EssentialSurjectivityProbe {
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
  std::uint64_t structures = 0;  // candidate coactions examined
  std::uint64_t comodules = 0;   // of which valid
  std::optional<Comodule> witness;  // a comodule matching no lift
};
EssentialSurjectivityProbe essential_surjectivity_probe(
    const CoendResult& cr, const std::vector<Comodule>& lifts, std::size_t max_rank,
    std::uint64_t budget);

/// An isomorphism of comodules M -> N, if one exists (exhaustive search).
std::optional<Matrix> find_comodule_iso(const Comodule& m, const Comodule& n,
                                        std::uint64_t budget);

}  // namespace tforge
