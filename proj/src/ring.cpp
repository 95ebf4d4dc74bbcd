#include "tforge/ring.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "tforge/error.hpp"

namespace tforge {

bool is_prime(std::int64_t v) {
  if (v < 2) return false;
  for (std::int64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

namespace {

using Poly = std::vector<std::int64_t>;  // low degree first

// Product of monic-reduction arithmetic over Z/m; `h` monic of degree f.
Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& h, std::int64_t m) {
  const std::size_t f = h.size() - 1;
  Poly prod(2 * f, 0);
  for (std::size_t i = 0; i < f; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < f; ++j) {
      prod[i + j] = (prod[i + j] + a[i] * b[j]) % m;
    }
  }
  for (std::size_t k = 2 * f - 1; k-- > f;) {
    const std::int64_t t = prod[k];
    if (t == 0) continue;
    for (std::size_t j = 0; j < f; ++j) {
      std::int64_t v = (prod[k - f + j] - t * h[j]) % m;
      prod[k - f + j] = v < 0 ? v + m : v;
    }
    prod[k] = 0;
  }
  prod.resize(f);
  return prod;
}

bool poly_is_zero(const Poly& a) {
  for (auto v : a) {
    if (v != 0) return false;
  }
  return true;
}

// Remainder of a modulo monic b over the field F_p.
Poly poly_rem_field(Poly a, const Poly& b, std::int64_t p) {
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const std::int64_t t = a.back() % p;
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t j = 0; j <= db; ++j) {
      std::int64_t v = (a[shift + j] - t * b[j]) % p;
      a[shift + j] = v < 0 ? v + p : v;
    }
    a.pop_back();
  }
  return a;
}

// Monic polynomial of degree `deg` over F_p with lower coefficients taken
// from the base-p digits of `code`.
Poly monic_from_code(std::int64_t code, int deg, int p) {
  Poly h(static_cast<std::size_t>(deg) + 1, 0);
  for (int i = 0; i < deg; ++i) {
    h[static_cast<std::size_t>(i)] = code % p;
    code /= p;
  }
  h[static_cast<std::size_t>(deg)] = 1;
  return h;
}

bool irreducible_over_fp(const Poly& h, int p) {
  const int deg = static_cast<int>(h.size()) - 1;
  if (h[0] == 0) return deg == 1;
  for (int d = 1; 2 * d <= deg; ++d) {
    std::int64_t count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (std::int64_t code = 0; code < count; ++code) {
      if (poly_is_zero(poly_rem_field(h, monic_from_code(code, d, p), p))) {
        return false;
      }
    }
  }
  return true;
}

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

ChainRing::ChainRing(int p, int n, int f, std::vector<std::int64_t> h)
    : p_(p), n_(n), f_(f), q_(ipow(p, n)), size_(1), h_(std::move(h)) {
  for (int i = 0; i < f_; ++i) size_ *= static_cast<std::uint64_t>(q_);
}

RingPtr ChainRing::make(int p, int n, int f) {
  if (!is_prime(p)) {
    throw InvalidArgument("GR(p^n,f): p = " + std::to_string(p) +
                                " is not prime");
  }
  if (n < 1 || f < 1) {
    throw InvalidArgument("GR(p^n,f): need n >= 1 and f >= 1");
  }
  if (f > kMaxDegree) {
    throw InvalidArgument("GR(p^n,f): residue degree above " +
                                std::to_string(kMaxDegree) +
                                " is not supported");
  }
  // Products of two coordinates must fit in int64 and |R| in uint64.
  double bits = static_cast<double>(n) * f * std::log2(static_cast<double>(p));
  double qbits = static_cast<double>(n) * std::log2(static_cast<double>(p));
  if (qbits > 30.0 || bits > 62.0) {
    throw InvalidArgument("GR(p^n,f): ring too large for exact tables");
  }

  if (f == 1) {
    const std::int64_t q = ipow(p, n);
    return RingPtr(new ChainRing(p, n, 1, {q - 1, 1}));
  }

  // Least monic irreducible of degree f over F_p with nonzero constant term
  // dividing x^{p^f - 1} - 1.
  const std::int64_t count = ipow(p, f);
  Poly residue;
  for (std::int64_t code = 0; code < count && residue.empty(); ++code) {
    Poly cand = monic_from_code(code, f, p);
    if (cand[0] == 0 || !irreducible_over_fp(cand, p)) continue;
    // x^{p^f-1} == 1 modulo cand over F_p
    Poly xp(static_cast<std::size_t>(f), 0);
    xp[1] = 1;
    Poly acc(static_cast<std::size_t>(f), 0);
    acc[0] = 1;
    std::int64_t e = count - 1;
    Poly base = xp;
    while (e > 0) {
      if (e & 1) acc = poly_mulmod(acc, base, cand, p);
      base = poly_mulmod(base, base, cand, p);
      e >>= 1;
    }
    Poly one(static_cast<std::size_t>(f), 0);
    one[0] = 1;
    if (acc == one) residue = cand;
  }
  if (residue.empty()) {
    throw InternalError("no basic irreducible of degree " + std::to_string(f) +
                        " over F_" + std::to_string(p));
  }
  if (n == 1) return RingPtr(new ChainRing(p, 1, f, residue));

  // Hensel lift: in S = (Z/p^n)[x]/(naive lift) the Teichmueller lift zeta
  // of x has minimal polynomial prod_j (X - zeta^{p^j}) with coefficients in
  // Z/p^n; that product is the unique monic lift dividing X^{p^f-1} - 1.
  const ChainRing naive(p, n, f, residue);
  const RingElem zeta = naive.teichmuller(naive.gen());
  std::vector<RingElem> poly{naive.one()};  // coefficients in S, low first
  RingElem conj = zeta;
  for (int j = 0; j < f; ++j) {
    std::vector<RingElem> next(poly.size() + 1, naive.zero());
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k + 1] = naive.add(next[k + 1], poly[k]);
      next[k] = naive.sub(next[k], naive.mul(poly[k], conj));
    }
    poly = std::move(next);
    conj = naive.pow(conj, static_cast<std::uint64_t>(p));
  }
  Poly lifted(poly.size(), 0);
  for (std::size_t k = 0; k < poly.size(); ++k) {
    for (int i = 1; i < f; ++i) {
      if (poly[k].c[static_cast<std::size_t>(i)] != 0) {
        throw InternalError("Hensel lift produced non-constant coefficient");
      }
    }
    lifted[k] = poly[k].c[0];
  }
  auto ring = RingPtr(new ChainRing(p, n, f, lifted));
  RingElem check = ring->pow(ring->gen(), static_cast<std::uint64_t>(count - 1));
  if (check != ring->one()) {
    throw InternalError("Hensel lift does not divide x^{p^f-1} - 1");
  }
  return ring;
}

std::string ChainRing::name() const {
  return "GR(" + std::to_string(p_) + "^" + std::to_string(n_) + "," +
         std::to_string(f_) + ")";
}

std::string ChainRing::modulus_string() const {
  std::ostringstream os;
  bool first = true;
  for (int k = f_; k >= 0; --k) {
    std::int64_t c = h_[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    if (!first) os << "+";
    first = false;
    if (k == 0 || c != 1) os << c;
    if (k > 0 && c != 1) os << "*";
    if (k >= 1) os << "x";
    if (k > 1) os << "^" << k;
  }
  return os.str();
}

bool ChainRing::same_as(const ChainRing& other) const {
  return p_ == other.p_ && n_ == other.n_ && f_ == other.f_ && h_ == other.h_;
}

RingElem ChainRing::gen() const {
  if (f_ == 1) return one();
  RingElem r;
  r.c[1] = 1;
  return r;
}

RingElem ChainRing::from_int(std::int64_t v) const {
  RingElem r;
  r.c[0] = static_cast<std::int32_t>(mod(v));
  return r;
}

RingElem ChainRing::from_coords(const std::vector<std::int64_t>& coords) const {
  if (coords.size() > static_cast<std::size_t>(f_)) {
    throw DimensionMismatch("ring element has more than f coordinates");
  }
  RingElem r;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    r.c[i] = static_cast<std::int32_t>(mod(coords[i]));
  }
  return r;
}

RingElem ChainRing::add(const RingElem& a, const RingElem& b) const {
  RingElem r;
  for (int i = 0; i < f_; ++i) {
    std::int64_t v = static_cast<std::int64_t>(a.c[i]) + b.c[i];
    if (v >= q_) v -= q_;
    r.c[i] = static_cast<std::int32_t>(v);
  }
  return r;
}

RingElem ChainRing::sub(const RingElem& a, const RingElem& b) const {
  RingElem r;
  for (int i = 0; i < f_; ++i) {
    std::int64_t v = static_cast<std::int64_t>(a.c[i]) - b.c[i];
    if (v < 0) v += q_;
    r.c[i] = static_cast<std::int32_t>(v);
  }
  return r;
}

RingElem ChainRing::neg(const RingElem& a) const { return sub(zero(), a); }

RingElem ChainRing::mul(const RingElem& a, const RingElem& b) const {
  if (f_ == 1) {
    RingElem r;
    r.c[0] = static_cast<std::int32_t>(
        (static_cast<std::int64_t>(a.c[0]) * b.c[0]) % q_);
    return r;
  }
  std::array<std::int64_t, 2 * kMaxDegree> prod{};
  for (int i = 0; i < f_; ++i) {
    if (a.c[i] == 0) continue;
    for (int j = 0; j < f_; ++j) {
      prod[i + j] =
          (prod[i + j] + static_cast<std::int64_t>(a.c[i]) * b.c[j]) % q_;
    }
  }
  for (int k = 2 * f_ - 2; k >= f_; --k) {
    const std::int64_t t = prod[k];
    if (t == 0) continue;
    for (int j = 0; j < f_; ++j) {
      prod[k - f_ + j] = mod(prod[k - f_ + j] - t * h_[j]);
    }
    prod[k] = 0;
  }
  RingElem r;
  for (int i = 0; i < f_; ++i) r.c[i] = static_cast<std::int32_t>(prod[i]);
  return r;
}

RingElem ChainRing::pow(RingElem a, std::uint64_t e) const {
  RingElem r = one();
  while (e > 0) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

RingElem ChainRing::inv(const RingElem& a) const {
  if (!is_unit(a)) {
    throw NonUnit(format(a) + " is not a unit in " + name());
  }
  // |R^*| = (p^f - 1) p^{f(n-1)}
  std::uint64_t order = 1;
  for (int i = 0; i < f_; ++i) order *= static_cast<std::uint64_t>(p_);
  order -= 1;
  for (int i = 0; i < f_ * (n_ - 1); ++i) order *= static_cast<std::uint64_t>(p_);
  return pow(a, order - 1);
}

int ChainRing::val(const RingElem& a) const {
  int best = n_;
  for (int i = 0; i < f_; ++i) {
    std::int64_t v = a.c[i];
    if (v == 0) continue;
    int k = 0;
    while (v % p_ == 0) {
      v /= p_;
      ++k;
    }
    if (k < best) best = k;
  }
  return best;
}

RingElem ChainRing::p_power(int k) const {
  if (k >= n_) return zero();
  return from_int(ipow(p_, k));
}

RingElem ChainRing::divide_p_power(const RingElem& a, int k) const {
  if (k <= 0) return a;
  if (val(a) < k) {
    throw InvalidArgument("divide_p_power: element not divisible");
  }
  const std::int64_t d = ipow(p_, std::min(k, n_));
  RingElem r;
  for (int i = 0; i < f_; ++i) r.c[i] = static_cast<std::int32_t>(a.c[i] / d);
  return r;
}

RingElem ChainRing::reduce_mod_p_power(const RingElem& a, int e) const {
  if (e >= n_) return a;
  const std::int64_t m = ipow(p_, std::max(e, 0));
  RingElem r;
  for (int i = 0; i < f_; ++i) r.c[i] = static_cast<std::int32_t>(a.c[i] % m);
  return r;
}

std::pair<RingElem, int> ChainRing::split(const RingElem& a) const {
  const int v = val(a);
  if (v == n_) return {one(), n_};
  return {divide_p_power(a, v), v};
}

RingElem ChainRing::teichmuller(const RingElem& a) const {
  // a^{p^{fk}} stabilizes once fk >= n; iterate p-th powers f*n times.
  RingElem t = a;
  for (int i = 0; i < f_ * n_; ++i) t = pow(t, static_cast<std::uint64_t>(p_));
  return t;
}

RingElem ChainRing::frobenius(const RingElem& a) const {
  if (f_ == 1) return a;
  RingElem result = zero();
  RingElem rest = a;
  for (int i = 0; i < n_; ++i) {
    const RingElem t = teichmuller(rest);
    result = add(result,
                 mul(p_power(i), pow(t, static_cast<std::uint64_t>(p_))));
    rest = divide_p_power(sub(rest, t), 1);
  }
  return result;
}

std::uint64_t ChainRing::encode(const RingElem& a) const {
  std::uint64_t code = 0;
  for (int i = f_ - 1; i >= 0; --i) {
    code = code * static_cast<std::uint64_t>(q_) +
           static_cast<std::uint64_t>(a.c[i]);
  }
  return code;
}

RingElem ChainRing::decode(std::uint64_t code) const {
  RingElem r;
  for (int i = 0; i < f_; ++i) {
    r.c[i] = static_cast<std::int32_t>(code % static_cast<std::uint64_t>(q_));
    code /= static_cast<std::uint64_t>(q_);
  }
  return r;
}

std::string ChainRing::format(const RingElem& a) const {
  std::ostringstream os;
  bool first = true;
  for (int k = f_ - 1; k >= 0; --k) {
    const std::int64_t c = a.c[k];
    if (c == 0) continue;
    if (!first) os << "+";
    first = false;
    if (k == 0) {
      os << c;
      continue;
    }
    if (c != 1) os << c << "*";
    os << "x";
    if (k > 1) os << "^" << k;
  }
  if (first) return "0";
  return os.str();
}

RingElem ChainRing::parse(std::string_view text) const {
  std::vector<std::int64_t> coords(static_cast<std::size_t>(f_), 0);
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto fail = [&](const std::string& why) -> void {
    throw InvalidArgument("cannot parse ring element '" +
                                std::string(text) + "': " + why);
  };
  auto number = [&]() -> std::int64_t {
    std::int64_t v = 0;
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      v = (v * 10 + (text[i] - '0')) % q_;
      ++i;
    }
    if (i == start) fail("expected a number");
    return v;
  };
  skip();
  if (i == text.size()) fail("empty literal");
  bool first = true;
  while (true) {
    skip();
    if (i == text.size()) break;
    std::int64_t sign = 1;
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
      skip();
    } else if (!first) {
      fail("expected + or -");
    }
    first = false;
    std::int64_t coef = 1;
    bool have_coef = false;
    if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      coef = number();
      have_coef = true;
      skip();
      if (i < text.size() && text[i] == '*') {
        ++i;
        skip();
      } else {
        coords[0] = mod(coords[0] + sign * coef);
        continue;
      }
    }
    if (i >= text.size() || text[i] != 'x') {
      fail(have_coef ? "expected x after *" : "expected a term");
    }
    ++i;
    skip();
    std::int64_t deg = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      skip();
      deg = number();
    }
    // x^deg reduced through the ring's multiplication handles deg >= f.
    RingElem term = pow(gen(), static_cast<std::uint64_t>(deg));
    term = mul(term, from_int(sign * coef));
    for (int k = 0; k < f_; ++k) {
      coords[static_cast<std::size_t>(k)] =
          mod(coords[static_cast<std::size_t>(k)] + term.c[k]);
    }
  }
  return from_coords(coords);
}

}  // namespace tforge
