#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace tforge {

/// Largest residue degree f supported for GR(p^n, f).
inline constexpr int kMaxDegree = 6;

/// Element of a Galois ring GR(p^n, f), stored as the coordinates in the
/// basis 1, x, ..., x^{f-1}.  Coordinates beyond f are zero and every
/// coordinate is kept in [0, p^n).
struct RingElem {
  std::array<std::int32_t, kMaxDegree> c{};

  friend bool operator==(const RingElem&, const RingElem&) = default;
  friend auto operator<=>(const RingElem&, const RingElem&) = default;
};

class ChainRing;
using RingPtr = std::shared_ptr<const ChainRing>;

/**
 * The finite chain ring GR(p^n, f) = (Z/p^n)[x]/(h).
 *
 * Covers Z/p^n (f = 1, where h = x - 1 by convention), the finite fields
 * F_{p^f} (n = 1) and the truncated Witt rings W_n(F_{p^f}).  The modulus h
 * is the Hensel lift of the least monic irreducible of degree f over F_p
 * (polynomials ordered by the integer sum c_i p^i), so x is a Teichmueller
 * element and the Frobenius lift sends x to x^p.
 *
 * Instances are immutable and shared through RingPtr.
 */
class ChainRing {
 public:
  static RingPtr make(int p, int n, int f);

  int p() const { return p_; }
  int n() const { return n_; }
  int f() const { return f_; }
  /// p^n, the characteristic.
  std::int64_t modulus() const { return q_; }
  /// Coefficients h_0..h_f of the monic defining polynomial over Z/p^n.
  const std::vector<std::int64_t>& defining_poly() const { return h_; }
  /// Number of elements, p^{nf}.
  std::uint64_t size() const { return size_; }
  /// Literal `GR(p^n,f)`.
  std::string name() const;
  /// Defining polynomial printed in x, e.g. `x^2+x+1`.
  std::string modulus_string() const;

  bool same_as(const ChainRing& other) const;

  RingElem zero() const { return RingElem{}; }
  RingElem one() const { return from_int(1); }
  /// The class of x; equals 1 when f = 1.
  RingElem gen() const;
  RingElem from_int(std::int64_t v) const;
  /// Builds an element from coordinates in the basis 1, x, ..., x^{f-1}.
  RingElem from_coords(const std::vector<std::int64_t>& coords) const;

  RingElem add(const RingElem& a, const RingElem& b) const;
  RingElem sub(const RingElem& a, const RingElem& b) const;
  RingElem neg(const RingElem& a) const;
  RingElem mul(const RingElem& a, const RingElem& b) const;
  RingElem pow(RingElem a, std::uint64_t e) const;
  /// Throws NonUnit unless is_unit(a).
  RingElem inv(const RingElem& a) const;

  bool is_zero(const RingElem& a) const { return a == RingElem{}; }
  bool is_unit(const RingElem& a) const { return val(a) == 0; }
  /// Largest k with a in p^k R; val(0) = n.
  int val(const RingElem& a) const;
  /// p^k as a ring element (zero for k >= n).
  RingElem p_power(int k) const;
  /// Exact division a / p^k for val(a) >= k.  The quotient is only defined
  /// modulo p^{n-k}; the representative with coordinates in [0, p^{n-k}) is
  /// returned.
  RingElem divide_p_power(const RingElem& a, int k) const;
  /// Canonical representative of a modulo p^e.
  RingElem reduce_mod_p_power(const RingElem& a, int e) const;
  /// Writes a = u * p^{val(a)}; u is a unit (or one, when a = 0).
  std::pair<RingElem, int> split(const RingElem& a) const;

  /// The unique Teichmueller element (t^{p^f} = t) congruent to a mod p.
  RingElem teichmuller(const RingElem& a) const;
  /// Frobenius lift sigma, evaluated through the Teichmueller digit
  /// expansion a = sum p^i t_i, sigma(a) = sum p^i t_i^p.
  RingElem frobenius(const RingElem& a) const;

  /// Mixed-radix code in [0, size()); coordinate 0 is least significant.
  std::uint64_t encode(const RingElem& a) const;
  RingElem decode(std::uint64_t code) const;

  std::string format(const RingElem& a) const;
  /// Parses a polynomial literal in x such as `3*x+3`, `x^2 - 1` or `5`.
  RingElem parse(std::string_view text) const;

 private:
  ChainRing(int p, int n, int f, std::vector<std::int64_t> h);

  std::int64_t mod(std::int64_t v) const {
    v %= q_;
    return v < 0 ? v + q_ : v;
  }

  int p_;
  int n_;
  int f_;
  std::int64_t q_;
  std::uint64_t size_;
  std::vector<std::int64_t> h_;
};

struct RingElemHash {
  std::size_t operator()(const RingElem& a) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto v : a.c) {
      h ^= static_cast<std::size_t>(v);
      h *= 1099511628211ull;
    }
    return h;
  }
};

bool is_prime(std::int64_t v);

}  // namespace tforge
