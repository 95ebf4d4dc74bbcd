#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tforge/algebra.hpp"

namespace tforge {

enum class AxiomFault { None, NotBimoduleMap, Coassoc, CounitLeft, CounitRight };

const char* to_string(AxiomFault f);

/// Outcome of an axiom check.  `witness` is the carrier generator on which
/// the first failing identity was observed.
struct AxiomReport {
  AxiomFault fault = AxiomFault::None;
  std::size_t witness = 0;
  std::string message;
  bool ok() const { return fault == AxiomFault::None; }
};

class AxiomError : public Error {
 public:
  explicit AxiomError(AxiomReport r) : Error(r.message), report_(std::move(r)) {}
  const AxiomReport& report() const { return report_; }

 private:
  AxiomReport report_;
};

/// B-B-coalgebra: bimodule C with Delta : C -> C (x)_B C and eps : C -> B.
struct Coalgebra {
  AlgebraSpec alg;
  Bimodule C;
  BTensor CC;
  ModuleMap comult;
  ModuleMap counit;

  const FinModule& carrier() const { return C.carrier; }
};

using CoalgebraPtr = std::shared_ptr<const Coalgebra>;

/// Assembles a coalgebra without checking the axioms.  comult is given in
/// canonical coordinates of C (x)_B C; counit as a map into B = R^{f}.
Coalgebra coalgebra_assemble(const AlgebraSpec& alg, const Bimodule& C,
                             const Matrix& comult, const Matrix& counit);
/// Same, with comult in raw Kronecker coordinates of C (x)_R C.
Coalgebra coalgebra_assemble_raw(const AlgebraSpec& alg, const Bimodule& C,
                                 const Matrix& comult_raw, const Matrix& counit);

AxiomReport coalgebra_check(const Coalgebra& c);
/// Checks and wraps; throws AxiomError on failure.
CoalgebraPtr coalgebra_make(Coalgebra c);

/// Left comodule (M, rho : M -> C (x)_B M).
struct Comodule {
  CoalgebraPtr coalg;
  BModule M;
  BTensor CM;
  ModuleMap rho;

  const FinModule& carrier() const { return M.carrier; }
};

Comodule comodule_assemble(CoalgebraPtr c, const BModule& m, const Matrix& rho);
Comodule comodule_assemble_raw(CoalgebraPtr c, const BModule& m,
                               const Matrix& rho_raw);
/// NotBimoduleMap stands for "rho is not left B-linear" here.
AxiomReport comodule_check(const Comodule& m);
Comodule comodule_make(Comodule m);

/// (1 (x) f) : C (x)_B M -> C (x)_B N.
ModuleMap coaction_tensor(const Comodule& m, const Comodule& n, const Matrix& f);

/// True iff f : M -> N is B-linear and commutes with the coactions.
bool is_comodule_map(const Comodule& m, const Comodule& n, const Matrix& f);

/// An R-submodule of Hom_R(M, N) with an explicit generating set.
struct HomSpace {
  HomModule ambient;
  Submodule sub;  // inside ambient.module
  std::vector<ModuleMap> basis;

  const FinModule& module() const { return sub.module; }
  /// Membership of an R-linear map.
  bool contains(const Matrix& f) const;
};

HomSpace comodule_hom(const Comodule& m, const Comodule& n);
/// Hom_B(M, N) of left B-modules, as a HomSpace.
HomSpace b_hom(const BModule& m, const BModule& n);

/// Solutions c of  sum_k c_k con[:, k] = 0  in a target whose rows are
/// cyclic of order p^{target_exps[row]}; c ranges over `domain`.
Submodule linear_kernel(const FinModule& domain, const Matrix& con,
                        const std::vector<int>& target_exps);

bool is_cauchy(const AlgebraSpec& alg, const Comodule& m);

/// C (x)_B N with coaction Delta (x) id.
Comodule cofree(CoalgebraPtr c, const BModule& n);

/// Every subcomodule of M: B-submodules S with rho(S) inside the image of
/// C (x)_B S.  Throws BudgetExceeded when |M| > budget.
struct Subcomodule {
  Comodule comodule;
  ModuleMap inclusion;
};
std::vector<Subcomodule> enumerate_subcomodules(const Comodule& m,
                                                std::uint64_t budget);

/// The same comodule in another carrier basis: P maps new coordinates to
/// old ones (P invertible, the carrier free).
Comodule transport(const Comodule& m, const Matrix& P);

/// Builders from a description on a B-basis of a free B-module.  A term
/// (a, b, coeff) in comult[u] stands for coeff * e_a (x) e_b, and a term
/// (a, b, coeff) in rho[j] for coeff * c_a (x) m_b.
struct TensorTerm {
  std::size_t a;
  std::size_t b;
  RingElem coeff;  // in B
};
Coalgebra coalgebra_from_basis(const AlgebraSpec& alg, std::size_t rank,
                               const std::vector<std::vector<TensorTerm>>& comult,
                               const std::vector<RingElem>& counit);
Comodule comodule_from_basis(CoalgebraPtr c, std::size_t rank,
                             const std::vector<std::vector<TensorTerm>>& rho);

/// C = B with Delta the unit isomorphism and eps = id.
CoalgebraPtr trivial_coalgebra(const AlgebraSpec& alg);
/// B^g with Delta(g_i) = g_i (x) g_i and eps(g_i) = 1.
CoalgebraPtr grouplike_coalgebra(const AlgebraSpec& alg, std::size_t g);
/// Dual of the r x r matrix algebra: Delta(c_ij) = sum_k c_ik (x) c_kj.
CoalgebraPtr comatrix_coalgebra(const AlgebraSpec& alg, std::size_t r);
/// (B, b |-> 1 (x) b) over the trivial coalgebra.
Comodule trivial_comodule(CoalgebraPtr c, std::size_t rank);
/// The line B with rho(m) = g_i (x) m.
Comodule grouplike_line(CoalgebraPtr c, std::size_t i);
/// B^r with rho(e_j) = sum_i c_ji (x) e_i.
Comodule standard_comatrix_comodule(CoalgebraPtr c, std::size_t r);

}  // namespace tforge
