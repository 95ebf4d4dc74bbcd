#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tforge/error.hpp"
#include "tforge/module.hpp"

namespace tforge {

/**
 * Base algebra B = GR(p^n, f_B) over R = Z/p^n.
 *
 * B is free over R on 1, x, ..., x^{f_B - 1}.  A B-module is an R-module
 * together with the action of x; restricting a B-matrix of shape (a x b)
 * gives an R-matrix of shape (a f_B x b f_B) with coordinate index
 * i * f_B + s for the component i and the power x^s.
 */
class AlgebraSpec {
 public:
  AlgebraSpec() = default;
  AlgebraSpec(RingPtr R, RingPtr B);
  /// R = GR(p^n,1), B = GR(p^n,f).
  static AlgebraSpec make(int p, int n, int f);

  const RingPtr& R() const { return R_; }
  const RingPtr& B() const { return B_; }
  int degree() const { return B_->f(); }

  /// Matrix of multiplication by b on B = R^{f_B}.
  Matrix mult_matrix(const RingElem& b) const;
  Matrix restrict(const Matrix& bmat) const;
  Vector restrict(const Vector& bvec) const;
  /// Inverse of restrict on vectors.
  Vector extend(const Vector& rvec) const;
  /// Reads off the B-matrix of an R-matrix between free B-modules that
  /// commutes with the x-actions (only the x^0 columns are consulted).
  Matrix extend(const Matrix& rmat) const;
  /// Action of x on B^r, restricted to R.
  Matrix x_action(std::size_t rank) const;
  /// Free B-module B^r viewed as an R-module.
  FinModule free_carrier(std::size_t rank) const;
  /// B as a one-sided module over itself.
  FinModule unit_carrier() const { return free_carrier(1); }

  std::string to_string() const;

 private:
  RingPtr R_;
  RingPtr B_;
};

/// Evaluates the defining polynomial of B at an R-endomorphism.
Matrix eval_modulus(const AlgebraSpec& alg, const Matrix& endo);

/// Left (or right) B-module: an R-module with the action of x.
struct BModule {
  FinModule carrier;
  ModuleMap act_x;
};

BModule free_bmodule(const AlgebraSpec& alg, std::size_t rank);

enum class BimoduleFault { None, ModulusViolation, NonCommutingActions, NotAMap };

struct BimoduleCheck {
  BimoduleFault fault = BimoduleFault::None;
  std::string message;
  bool ok() const { return fault == BimoduleFault::None; }
};

/// Bimodule with commuting actions of x on each side.
struct Bimodule {
  FinModule carrier;
  ModuleMap left_x;
  ModuleMap right_x;

  BModule left() const { return {carrier, left_x}; }
  BModule right() const { return {carrier, right_x}; }
};

/// Checks the modulus on each side first, then commutation.
BimoduleCheck check_bimodule(const AlgebraSpec& alg, const FinModule& carrier,
                             const Matrix& left_x, const Matrix& right_x);
/// Throws BimoduleError on failure.
Bimodule bimodule_make(const AlgebraSpec& alg, const FinModule& carrier,
                       const Matrix& left_x, const Matrix& right_x);

/// B as a bimodule over itself.
Bimodule regular_bimodule(const AlgebraSpec& alg);

class BimoduleError : public Error {
 public:
  BimoduleError(BimoduleFault f, const std::string& msg) : Error(msg), fault_(f) {}
  BimoduleFault fault() const { return fault_; }

 private:
  BimoduleFault fault_;
};

const char* to_string(BimoduleFault f);

/// True iff the R-matrix commutes with the given actions (a B-linear map).
bool is_b_linear(const Matrix& f, const Matrix& src_x, const Matrix& dst_x);

/**
 * Iterated tensor product X_1 (x)_B X_2 (x)_B ... over B.
 *
 * Built as the quotient of the R-tensor product (raw Kronecker coordinates
 * over the factors' canonical coordinates) by the middle-linearity
 * relations x.a (x) b = a (x) x.b at each inner slot.  x generates B over
 * R, so these relations suffice.
 */
struct BTensor {
  std::vector<FinModule> factors;
  std::vector<int> raw_exps;
  std::vector<std::size_t> strides;
  Quotient q;

  const FinModule& module() const { return q.module; }
  std::size_t raw_size() const { return raw_exps.size(); }
  /// Class of the pure tensor x_1 (x) ... (x) x_k.
  Vector pure(const std::vector<Vector>& xs) const;
  /// Class of a raw Kronecker vector.
  Vector from_raw(const Vector& raw) const;
};

/// Slot actions: slot s carries (right action of factor s, left action of
/// factor s + 1), both on canonical coordinates.  Pass empty matrices for
/// slots where both actions are trivial (B = R).
///
/// When every factor after the first is free over B (for its left action)
/// the tensor is X_1^{m_2 ... m_k} and is written down from B-bases, with
/// coordinates ordered (generator of X_1, basis index of X_2, ...).
/// Otherwise the relations are presented and reduced to Smith form.
BTensor b_tensor(const AlgebraSpec& alg, const std::vector<FinModule>& factors,
                 const std::vector<std::pair<Matrix, Matrix>>& slot_actions);

/// Always goes through the presentation; kept for cross-checks.
BTensor b_tensor_presented(const RingPtr& R, const std::vector<FinModule>& factors,
                           const std::vector<std::pair<Matrix, Matrix>>& slot_actions);

/// Two-fold tensor X (x)_B Y of a right and a left B-module.
BTensor b_tensor(const AlgebraSpec& alg, const BModule& right, const BModule& left);

/// The map induced by factorwise maps f_i : X_i -> Y_i.
ModuleMap b_tensor_map(const BTensor& src, const BTensor& dst,
                       const std::vector<Matrix>& maps);

/// Induced outer action on a tensor: acts by `act` on factor `slot`.
ModuleMap b_tensor_action(const BTensor& t, std::size_t slot, const Matrix& act);

/// B (x)_B Y -> Y and X (x)_B B -> X, b (x) y |-> b.y and x (x) b |-> x.b.
ModuleMap left_unit(const AlgebraSpec& alg, const BTensor& t, const BModule& y);
ModuleMap right_unit(const AlgebraSpec& alg, const BTensor& t, const BModule& x);

/// B-basis of a module free over B, found greedily among the carrier
/// generators modulo p.  `to_carrier` has the restricted basis as columns
/// (index i * f + s holds x^s m_i); `from_carrier` is its inverse.
struct BBasis {
  std::size_t rank = 0;
  Matrix to_carrier;
  Matrix from_carrier;
};
/// nullopt iff the module is not free over B.
std::optional<BBasis> b_basis(const AlgebraSpec& alg, const BModule& m);

class NonFree : public Error {
 public:
  using Error::Error;
};

/// Hom_B(M, B) for M free over B, realized as row vectors B^r with the
/// right action by componentwise multiplication.
struct BDual {
  std::size_t rank = 0;
  BModule module;  // right B-module
  BBasis basis;    // of the source
  /// xi(m) in B, for xi given in dual coordinates.
  RingElem evaluate(const AlgebraSpec& alg, const Vector& xi, const Vector& m) const;
};
/// Throws NonFree if M is not free over B.
BDual b_dual(const AlgebraSpec& alg, const BModule& m);

}  // namespace tforge
