#include "tforge/text.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <sstream>

#include "tforge/error.hpp"

namespace tforge {

namespace {

bool is_prime_power(std::int64_t q, int& p, int& e) {
  if (q < 2) return false;
  std::int64_t d = 2;
  while (d * d <= q && q % d) ++d;
  if (q % d) d = q;
  e = 0;
  while (q % d == 0) {
    q /= d;
    ++e;
  }
  p = static_cast<int>(d);
  return q == 1;
}

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  void skip() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }
  bool done() {
    skip();
    return pos_ >= s_.size();
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    advance();
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string word() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && is_word(s_[pos_])) advance();
    if (start == pos_) fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }
  /// Next word without consuming it ("" at end or before punctuation).
  std::string peek_word() {
    skip();
    std::size_t p = pos_;
    while (p < s_.size() && is_word(s_[p])) ++p;
    return std::string(s_.substr(pos_, p - pos_));
  }
  void expect_word(const std::string& w) {
    auto [l, c] = where();
    if (word() != w) throw ParseError("expected '" + w + "'", l, c);
  }
  long long integer() {
    skip();
    auto [l, c] = where();
    bool neg = accept('-');
    std::size_t start = pos_;
    long long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_] - '0');
      if (v > (1LL << 40)) throw ParseError("number too large", l, c);
      advance();
    }
    if (start == pos_) throw ParseError("expected a number", l, c);
    return neg ? -v : v;
  }
  std::size_t count() {
    auto [l, c] = where();
    long long v = integer();
    if (v < 0) throw ParseError("expected a non-negative number", l, c);
    return static_cast<std::size_t>(v);
  }
  /// Raw text up to (not including) any of the stop characters.
  std::string until(std::string_view stops) {
    skip();
    std::size_t start = pos_;
    int depth = 0;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '(') ++depth;
      if (c == ')' && depth > 0) {
        --depth;
        advance();
        continue;
      }
      if (depth == 0 && stops.find(c) != std::string_view::npos) break;
      if (c == '\n' || c == '#') break;
      advance();
    }
    return std::string(s_.substr(start, pos_ - start));
  }
  std::pair<std::size_t, std::size_t> where() {
    skip();
    return {line_, col_};
  }
  [[noreturn]] void fail(const std::string& msg) {
    auto [l, c] = where();
    throw ParseError(msg, l, c);
  }

 private:
  static bool is_word(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.';
  }
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

AlgebraSpec read_algebra(Cursor& cur) {
  auto [l, c] = cur.where();
  std::string name = cur.word();
  if (name == "GR" && cur.peek() == '(') {
    cur.expect('(');
    name += "(" + cur.until(")") + ")";
    cur.expect(')');
  } else if (name == "Z" && cur.accept('/')) {
    name += "/" + cur.word();
  }
  try {
    return parse_algebra_name(name);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), l, c);
  }
}

RingElem read_elem(Cursor& cur, const RingPtr& ring, std::string_view stops) {
  auto [l, c] = cur.where();
  std::string text = cur.until(stops);
  try {
    return ring->parse(text);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), l, c);
  }
}

Matrix read_matrix(Cursor& cur, const RingPtr& ring) {
  auto [l, c] = cur.where();
  cur.expect('[');
  if (cur.accept(']')) return Matrix(ring, 0, 0);
  std::vector<std::vector<RingElem>> rows;
  do {
    cur.expect('[');
    std::vector<RingElem> row;
    if (!cur.accept(']')) {
      do row.push_back(read_elem(cur, ring, ",]"));
      while (cur.accept(','));
      cur.expect(']');
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("matrix rows differ in length", l, c);
    }
    rows.push_back(std::move(row));
  } while (cur.accept(','));
  cur.expect(']');
  Matrix m(ring, rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

std::vector<TensorTerm> read_terms(Cursor& cur, const RingPtr& ring, std::size_t rank) {
  std::vector<TensorTerm> out;
  while (cur.peek() == '(') {
    auto [l, c] = cur.where();
    cur.expect('(');
    std::size_t a = cur.count();
    cur.expect(',');
    std::size_t b = cur.count();
    cur.expect(',');
    RingElem coeff = read_elem(cur, ring, ")");
    cur.expect(')');
    if (a >= rank) throw ParseError("term index out of range", l, c);
    out.push_back({a, b, coeff});
  }
  return out;
}

}  // namespace

AlgebraSpec parse_algebra_name(std::string_view name) {
  std::string s;
  for (char c : name)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  auto bad = [&] { return InvalidArgument("unknown ring '" + std::string(name) + "'"); };
  auto num = [&](const std::string& t) -> long long {
    if (t.empty() || t.size() > 12) throw bad();
    for (char c : t)
      if (!std::isdigit(static_cast<unsigned char>(c))) throw bad();
    return std::stoll(t);
  };
  int p = 0, e = 0;
  if (s.rfind("GR(", 0) == 0 && s.back() == ')') {
    std::string body = s.substr(3, s.size() - 4);
    auto comma = body.find(',');
    if (comma == std::string::npos) throw bad();
    std::string q = body.substr(0, comma);
    const int f = static_cast<int>(num(body.substr(comma + 1)));
    auto caret = q.find('^');
    if (caret != std::string::npos) {
      return AlgebraSpec::make(static_cast<int>(num(q.substr(0, caret))),
                               static_cast<int>(num(q.substr(caret + 1))), f);
    }
    if (!is_prime_power(num(q), p, e)) throw bad();
    return AlgebraSpec::make(p, e, f);
  }
  if (s.rfind("Z/", 0) == 0) {
    if (!is_prime_power(num(s.substr(2)), p, e)) throw bad();
    return AlgebraSpec::make(p, e, 1);
  }
  if (s.size() > 1 && s[0] == 'F') {
    if (!is_prime_power(num(s.substr(1)), p, e)) throw bad();
    return AlgebraSpec::make(p, 1, e);
  }
  throw bad();
}

std::string algebra_name(const AlgebraSpec& alg) { return alg.B()->name(); }

std::string print_matrix(const Matrix& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) os << ",";
    os << "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ",";
      os << m.ring()->format(m(i, j));
    }
    os << "]";
  }
  os << "]";
  return os.str();
}

DiagramFile parse_diagram(std::string_view text) {
  Cursor cur(text);
  cur.expect_word("alg");
  DiagramFile out{DiagramCategory(read_algebra(cur)), {}};
  DiagramCategory& d = out.diagram;
  const RingPtr& B = d.alg().B();
  static const std::vector<std::string> keywords = {"object", "hom", "probe", "arrow"};
  auto is_keyword = [](const std::string& w) {
    for (const auto& k : keywords)
      if (k == w) return true;
    return false;
  };
  auto object_ref = [&]() {
    auto [l, c] = cur.where();
    std::string name = cur.word();
    auto k = d.find(name);
    if (!k) throw ParseError("unknown object '" + name + "'", l, c);
    return *k;
  };
  while (!cur.done()) {
    auto [l, c] = cur.where();
    std::string kw = cur.word();
    if (kw == "object") {
      auto [nl, nc] = cur.where();
      std::string name = cur.word();
      if (is_keyword(name)) throw ParseError("object name is a keyword", nl, nc);
      if (d.find(name)) throw ParseError("duplicate object '" + name + "'", nl, nc);
      cur.expect_word("rank");
      d.add_object(name, cur.count());
    } else if (kw == "hom") {
      std::size_t src = object_ref(), dst = object_ref();
      cur.expect('=');
      cur.expect('[');
      if (!cur.accept(']')) {
        do {
          auto [ml, mc] = cur.where();
          Matrix m = read_matrix(cur, B);
          if (m.rows() == 0 && m.cols() == 0) m = Matrix(B, d.object(dst).rank, d.object(src).rank);
          try {
            d.add_hom(src, dst, std::move(m));
          } catch (const Error& e) {
            throw ParseError(e.what(), ml, mc);
          }
        } while (cur.accept(','));
        cur.expect(']');
      }
    } else if (kw == "probe") {
      ColimitProbe p;
      p.label = cur.word();
      cur.expect_word("nodes");
      while (!cur.done() && !is_keyword(cur.peek_word()) && !cur.peek_word().empty())
        p.nodes.push_back(object_ref());
      out.probes.push_back(std::move(p));
    } else if (kw == "arrow") {
      if (out.probes.empty()) throw ParseError("arrow outside a probe", l, c);
      ColimitProbe& p = out.probes.back();
      auto [al, ac] = cur.where();
      std::size_t from = cur.count(), to = cur.count();
      if (from >= p.nodes.size() || to >= p.nodes.size()) {
        throw ParseError("arrow node out of range", al, ac);
      }
      cur.expect('=');
      auto [ml, mc] = cur.where();
      Matrix m = read_matrix(cur, B);
      if (m.rows() != d.object(p.nodes[to]).rank || m.cols() != d.object(p.nodes[from]).rank) {
        throw ParseError("arrow matrix has the wrong shape", ml, mc);
      }
      p.arrows.push_back({from, to, std::move(m)});
    } else {
      throw ParseError("unknown keyword '" + kw + "'", l, c);
    }
  }
  return out;
}

std::string print_diagram(const DiagramCategory& d) {
  std::ostringstream os;
  os << "alg " << algebra_name(d.alg()) << "\n";
  for (const DiagramObject& o : d.objects()) os << "object " << o.name << " rank " << o.rank << "\n";
  for (std::size_t k = 0; k < d.size(); ++k)
    for (std::size_t l = 0; l < d.size(); ++l) {
      const auto& hs = d.homs(k, l);
      if (hs.empty()) continue;
      os << "hom " << d.object(k).name << " " << d.object(l).name << " = [";
      for (std::size_t i = 0; i < hs.size(); ++i) os << (i ? ", " : "") << print_matrix(hs[i]);
      os << "]\n";
    }
  return os.str();
}

CoalgebraFile parse_coalgebra(std::string_view text) {
  Cursor cur(text);
  cur.expect_word("alg");
  AlgebraSpec alg = read_algebra(cur);
  const RingPtr& B = alg.B();
  CoalgebraFile out;

  std::optional<std::size_t> rank;
  std::string builtin;
  std::size_t builtin_arg = 0;
  std::map<std::size_t, std::vector<TensorTerm>> comult;
  std::vector<RingElem> counit;
  bool have_counit = false;
  struct PendingComodule {
    std::string name;
    std::size_t rank;
    std::map<std::size_t, std::vector<TensorTerm>> rho;
    std::pair<std::size_t, std::size_t> at;
  };
  std::vector<PendingComodule> comods;
  std::string family;
  std::size_t family_arg = 0;
  std::pair<std::size_t, std::size_t> family_at{0, 0};

  while (!cur.done()) {
    auto [l, c] = cur.where();
    std::string kw = cur.word();
    if (kw == "coalgebra") {
      cur.expect_word("rank");
      rank = cur.count();
    } else if (kw == "builtin") {
      builtin = cur.word();
      if (builtin == "grouplike" || builtin == "comatrix") {
        builtin_arg = cur.count();
      } else if (builtin != "trivial") {
        throw ParseError("unknown builtin '" + builtin + "'", l, c);
      }
    } else if (kw == "comult") {
      if (!rank) throw ParseError("comult before 'coalgebra rank'", l, c);
      std::size_t u = cur.count();
      if (u >= *rank) throw ParseError("comult index out of range", l, c);
      cur.expect('=');
      auto terms = read_terms(cur, B, *rank);
      for (const auto& t : terms)
        if (t.b >= *rank) throw ParseError("term index out of range", l, c);
      comult[u] = std::move(terms);
    } else if (kw == "counit") {
      cur.expect('=');
      cur.expect('[');
      if (!cur.accept(']')) {
        do counit.push_back(read_elem(cur, B, ",]"));
        while (cur.accept(','));
        cur.expect(']');
      }
      have_counit = true;
    } else if (kw == "comodule") {
      PendingComodule pc;
      pc.at = {l, c};
      pc.name = cur.word();
      cur.expect_word("rank");
      pc.rank = cur.count();
      comods.push_back(std::move(pc));
    } else if (kw == "rho") {
      if (comods.empty()) throw ParseError("rho outside a comodule", l, c);
      PendingComodule& pc = comods.back();
      std::size_t j = cur.count();
      if (j >= pc.rank) throw ParseError("rho index out of range", l, c);
      cur.expect('=');
      std::vector<TensorTerm> terms;
      while (cur.peek() == '(') {
        auto [tl, tc] = cur.where();
        auto t = read_terms(cur, B, ~std::size_t{0});
        for (const auto& x : t)
          if (x.b >= pc.rank) throw ParseError("term index out of range", tl, tc);
        terms.insert(terms.end(), t.begin(), t.end());
      }
      pc.rho[j] = std::move(terms);
    } else if (kw == "family") {
      family_at = {l, c};
      family = cur.word();
      if (family == "trivial") family_arg = cur.count();
      else if (family != "lines" && family != "standard")
        throw ParseError("unknown family '" + family + "'", l, c);
    } else {
      throw ParseError("unknown keyword '" + kw + "'", l, c);
    }
  }

  if (!builtin.empty() && rank) throw ParseError("both builtin and explicit coalgebra", 1, 1);
  if (builtin == "grouplike") {
    out.coalgebra = grouplike_coalgebra(alg, builtin_arg);
  } else if (builtin == "comatrix") {
    out.coalgebra = comatrix_coalgebra(alg, builtin_arg);
  } else if (builtin == "trivial") {
    out.coalgebra = trivial_coalgebra(alg);
  } else {
    if (!rank) throw ParseError("missing coalgebra", 1, 1);
    if (!have_counit || counit.size() != *rank) {
      throw ParseError("counit must list " + std::to_string(*rank) + " values", 1, 1);
    }
    std::vector<std::vector<TensorTerm>> cm(*rank);
    for (auto& [u, t] : comult) cm[u] = t;
    out.coalgebra = std::make_shared<const Coalgebra>(coalgebra_from_basis(alg, *rank, cm, counit));
  }
  const std::size_t crank = out.coalgebra->carrier().rank() / static_cast<std::size_t>(alg.degree());
  out.axioms = coalgebra_check(*out.coalgebra);

  for (const PendingComodule& pc : comods) {
    std::vector<std::vector<TensorTerm>> rho(pc.rank);
    for (const auto& [j, t] : pc.rho) {
      for (const auto& x : t)
        if (x.a >= crank) throw ParseError("term index out of range", pc.at.first, pc.at.second);
      rho[j] = t;
    }
    if (!out.axioms.ok()) break;
    out.family.push_back(comodule_make(comodule_from_basis(out.coalgebra, pc.rank, rho)));
    out.names.push_back(pc.name);
  }
  if (!family.empty() && out.axioms.ok()) {
    try {
      if (family == "lines") {
        if (builtin != "grouplike") throw InvalidArgument("'family lines' needs builtin grouplike");
        for (std::size_t i = 0; i < builtin_arg; ++i) {
          out.family.push_back(grouplike_line(out.coalgebra, i));
          out.names.push_back("g" + std::to_string(i));
        }
      } else if (family == "standard") {
        if (builtin != "comatrix") throw InvalidArgument("'family standard' needs builtin comatrix");
        out.family.push_back(standard_comatrix_comodule(out.coalgebra, builtin_arg));
        out.names.push_back("V");
      } else {
        if (builtin != "trivial") throw InvalidArgument("'family trivial' needs builtin trivial");
        out.family.push_back(trivial_comodule(out.coalgebra, family_arg));
        out.names.push_back("B^" + std::to_string(family_arg));
      }
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), family_at.first, family_at.second);
    }
  }
  return out;
}

std::vector<MFBlock> parse_mf(std::string_view text) {
  Cursor cur(text);
  std::vector<MFBlock> out;
  while (!cur.done()) {
    cur.expect_word("mf");
    MFBlock blk;
    if (cur.peek_word() != "over") blk.name = cur.word();
    cur.expect_word("over");
    blk.data.alg = read_algebra(cur);
    const RingPtr& W = blk.data.alg.B();
    cur.expect('{');
    std::optional<std::vector<int>> exps;
    std::map<int, std::pair<Matrix, std::pair<std::size_t, std::size_t>>> fil, phi;
    while (!cur.accept('}')) {
      auto [l, c] = cur.where();
      std::string kw = cur.word();
      if (kw == "M") {
        cur.expect('=');
        std::string kind = cur.word();
        cur.expect('(');
        std::vector<int> e;
        if (kind == "mod") {
          if (!cur.accept(')')) {
            do e.push_back(static_cast<int>(cur.count()));
            while (cur.accept(','));
            cur.expect(')');
          }
        } else if (kind == "free") {
          e.assign(cur.count(), W->n());
          cur.expect(')');
        } else {
          throw ParseError("expected mod(...) or free(r)", l, c);
        }
        exps = std::move(e);
      } else if (kw == "fil" || kw == "phi") {
        if (!exps) throw ParseError("M must come first", l, c);
        int i = static_cast<int>(cur.integer());
        cur.expect('=');
        auto at = cur.where();
        Matrix m = read_matrix(cur, W);
        if (m.rows() == 0 && m.cols() == 0) m = Matrix(W, exps->size(), 0);
        auto& dst = kw == "fil" ? fil : phi;
        if (dst.count(i)) throw ParseError("duplicate " + kw + " " + std::to_string(i), l, c);
        dst.emplace(i, std::make_pair(std::move(m), at));
      } else {
        throw ParseError("unknown keyword '" + kw + "'", l, c);
      }
      cur.expect(';');
    }
    if (!exps) cur.fail("missing 'M = ...'");
    blk.data.m_exps = *exps;
    if (!fil.empty()) {
      blk.data.lo = fil.begin()->first;
      int expect = blk.data.lo;
      for (auto& [i, m] : fil) {
        if (i != expect) {
          throw ParseError("fil indices must be consecutive", m.second.first, m.second.second);
        }
        auto it = phi.find(i);
        if (it == phi.end()) {
          throw ParseError("missing phi " + std::to_string(i), m.second.first, m.second.second);
        }
        blk.data.fil_gens.push_back(m.first);
        blk.data.phi_gens.push_back(it->second.first);
        ++expect;
      }
    }
    for (auto& [i, m] : phi) {
      if (!fil.count(i)) {
        throw ParseError("phi " + std::to_string(i) + " without fil", m.second.first,
                         m.second.second);
      }
    }
    out.push_back(std::move(blk));
  }
  return out;
}

std::string print_mf(const FilteredFModule& x, const std::string& name) {
  std::ostringstream os;
  os << "mf " << (name.empty() ? "" : name + " ") << "over " << algebra_name(x.alg) << " {\n";
  os << "  M = mod(";
  for (std::size_t j = 0; j < x.M.rank(); ++j) os << (j ? "," : "") << x.M.exp(j);
  os << ");\n";
  for (std::size_t k = 0; k < x.fil.size(); ++k) {
    const int i = x.lo + static_cast<int>(k);
    os << "  fil " << i << " = " << print_matrix(x.fil[k].incl) << ";  phi " << i << " = "
       << print_matrix(x.phi[k]) << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::vector<MFNamed> parse_mf_family(const AlgebraSpec& alg, std::string_view family) {
  Cursor cur(family);
  std::vector<MFNamed> out;
  do {
    std::string name;
    std::optional<FilteredFModule> sum;
    do {
      auto [l, c] = cur.where();
      if (cur.word() != "M") throw ParseError("expected M(i)", l, c);
      cur.expect('(');
      const long long i = cur.integer();
      cur.expect(')');
      if (i < -64 || i > 64) throw ParseError("weight out of range", l, c);
      FilteredFModule t = tate(alg, static_cast<int>(i));
      sum = sum ? mf_direct_sum(*sum, t) : t;
      name += (name.empty() ? "" : "+") + std::string("M(") + std::to_string(i) + ")";
    } while (cur.accept('+'));
    out.push_back({name, std::move(*sum)});
  } while (cur.accept(','));
  if (!cur.done()) cur.fail("unexpected text in family");
  return out;
}

}  // namespace tforge
