#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tforge/coalgebra.hpp"
#include "tforge/diagram.hpp"
#include "tforge/mf.hpp"
#include "tforge/recognition.hpp"

namespace tforge {

/**
 * Plain-text inputs.  `#` starts a comment; whitespace is free.
 *
 * Ring names: `GR(p^n,f)`, `Z/m` (m = p^n), `Fq` (q = p^f).  R = GR(p^n,1)
 * and B is the named ring.
 *
 * Matrices are row lists, `[[1,x],[0,1]]`, entries polynomial literals in x.
 * `[[],[]]` is 2 x 0 and `[]` is 0 x 0.
 *
 * Diagram:
 *   alg GR(4,2)
 *   object A rank 2
 *   hom A B = [<matrix>, <matrix>]
 *   probe <label> nodes A A     # optional colimit probes
 *   arrow 0 1 = <matrix>        # attaches to the preceding probe
 *
 * Coalgebra with a family of comodules, both on B-bases:
 *   alg F4
 *   coalgebra rank 2
 *   comult 0 = (0,0,1) (1,1,x)  # terms (a, b, c) for c e_a (x) e_b
 *   counit = [1, 0]
 *   comodule L rank 1
 *   rho 0 = (0,0,1)             # terms (a, b, c) for c c_a (x) m_b
 *   # or: builtin grouplike 3 | comatrix 2 | trivial, then family
 *   #     lines | standard | trivial <rank>
 *
 * Filtered F-modules (one or more blocks):
 *   mf X over GR(2^1,1) {
 *     M = mod(1);               # exponents of W/p^e summands
 *     fil 0 = [[1]];  phi 0 = [[1]];
 *     fil 1 = [[]];   phi 1 = [[]];
 *   }
 * Fil^i is spanned by the columns of `fil i`, phi^i is given on them and
 * indices must be consecutive.  The block name is optional.
 */
AlgebraSpec parse_algebra_name(std::string_view name);
std::string algebra_name(const AlgebraSpec& alg);

struct DiagramFile {
  DiagramCategory diagram;
  std::vector<ColimitProbe> probes;
};
DiagramFile parse_diagram(std::string_view text);
std::string print_diagram(const DiagramCategory& d);

struct CoalgebraFile {
  CoalgebraPtr coalgebra;
  std::vector<Comodule> family;
  std::vector<std::string> names;
  AxiomReport axioms;  // of the coalgebra, checked on parse
};
/// The coalgebra axioms are checked but not enforced; comodules that fail
/// comodule_check raise AxiomError.
CoalgebraFile parse_coalgebra(std::string_view text);

struct MFBlock {
  std::string name;
  MFData data;
};
std::vector<MFBlock> parse_mf(std::string_view text);
std::string print_mf(const FilteredFModule& x, const std::string& name = "");

/// Family shorthand such as `M(0),M(1),M(0)+M(1)`: M(i) is the Tate object
/// of weight i and `+` the direct sum.  Names are the trimmed terms.
struct MFNamed {
  std::string name;
  FilteredFModule object;
};
std::vector<MFNamed> parse_mf_family(const AlgebraSpec& alg, std::string_view family);

std::string print_matrix(const Matrix& m);

}  // namespace tforge
