#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tforge/diagram.hpp"
#include "tforge/tannaka.hpp"

namespace tforge {

/// F : src -> dst invertible on fibers whose inverse is not a morphism.
struct IsoWitness {
  std::size_t src = 0;
  std::size_t dst = 0;
  Matrix F;  // B-matrix
};

/// An object (k, v) of the category of elements; v in R-coordinates.
struct ElementObject {
  std::size_t obj = 0;
  Vector v;
};

/// A pair of elements with no common cone.
struct ConeWitness {
  ElementObject a;
  ElementObject b;
};

/// A parallel pair F, G : (k, v) -> (l, F v) that no morphism into (k, v)
/// equalizes; only the difference D = F - G matters, so G = 0 and F = D.
struct EqualizerWitness {
  ElementObject source;
  std::size_t dst = 0;
  Matrix D;  // B-matrix with D v = 0
};

/// A finite diagram inside the category: nodes are object indices (repeats
/// allowed) and arrows are morphisms between nodes.
struct ColimitProbe {
  struct Arrow {
    std::size_t from = 0;  // node index
    std::size_t to = 0;
    Matrix map;            // B-matrix, must lie in the hom span
  };
  std::string label;
  std::vector<std::size_t> nodes;
  std::vector<Arrow> arrows;
};

struct ProbeResult {
  ColimitProbe probe;
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
  std::size_t fiber_colimit_rank = 0;  // B-rank when free
  std::optional<std::size_t> colimit_object;
  Matrix cocone;  // the chosen cocone maps, hstacked over nodes (R-matrix)
};

struct IsoReflection {
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
  std::uint64_t morphisms_checked = 0;
  std::optional<IsoWitness> witness;
};

struct Cofilteredness {
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
  std::uint64_t elements = 0;
  bool empty = false;
  std::optional<ConeWitness> cone;
  std::optional<EqualizerWitness> equalizer;
};

struct RigidColimits {
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
  std::vector<ProbeResult> probes;
};

struct RecognitionReport {
  DiagramCheck closure;
  IsoReflection reflects_isos;
  Cofilteredness cofiltered;
  RigidColimits rigid_colimits;
};

/// i) reflection of isomorphisms, ii) cofilteredness of the category of
/// elements, iii) rigid colimits on the automatic coequalizer probes plus
/// `probes`.  Budget exhaustion yields Inconclusive verdicts.
RecognitionReport recognition_check(const DiagramCategory& d, std::uint64_t budget,
                                    const std::vector<ColimitProbe>& probes = {});

IsoReflection check_iso_reflection(const DiagramCategory& d, std::uint64_t budget);
Cofilteredness check_cofiltered(const DiagramCategory& d, std::uint64_t budget);
ProbeResult check_colimit_probe(const DiagramCategory& d, const ColimitProbe& probe,
                                std::uint64_t budget);
/// Coequalizers of pairs of generators (and of each generator with 0).
std::vector<ColimitProbe> auto_probes(const DiagramCategory& d, std::size_t limit);

/// Standalone re-validation of refutation witnesses.
bool iso_witness_holds(const DiagramCategory& d, const IsoWitness& w);
bool cone_witness_holds(const DiagramCategory& d, const ConeWitness& w,
                        std::uint64_t budget);
bool equalizer_witness_holds(const DiagramCategory& d, const EqualizerWitness& w,
                             std::uint64_t budget);

/// Is there a cone over the two elements?  Exhaustive over the elements of
/// every fiber.
bool has_cone(const DiagramCategory& d, const ElementObject& a, const ElementObject& b,
              std::uint64_t budget);
/// Is D (with D v = 0) equalized by some morphism into (k, v)?
bool has_equalizer(const DiagramCategory& d, const ElementObject& src, std::size_t dst,
                   const Matrix& D, std::uint64_t budget);

}  // namespace tforge
