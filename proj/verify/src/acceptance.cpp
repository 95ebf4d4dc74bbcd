#include "tforge/verify/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "tforge/error.hpp"
#include "tforge/mf.hpp"
#include "tforge/recognition.hpp"
#include "tforge/tannaka.hpp"
#include "tforge/verify/generators.hpp"
#include "tforge/verify/oracles.hpp"

namespace tforge::accept {

namespace {

struct Failure {
  std::string why;
};

void require(bool ok, const std::string& why) {
  if (!ok) throw Failure{why};
}

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(double s) {
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << s << "s";
  return os.str();
}

std::vector<FilteredFModule> mf1_family(const AlgebraSpec& alg) {
  FilteredFModule m0 = tate(alg, 0), m1 = tate(alg, 1);
  return {m0, m1, mf_direct_sum(m0, m1)};
}

const std::vector<std::string> kFamilyNames = {"M(0)", "M(1)", "M(0)+M(1)"};

std::string check_smith(const Matrix& a) {
  SmithForm s = smith(a);
  const ChainRing& r = *a.ring();
  if (!(s.U * s.D * s.V == a)) return "U D V != A";
  if (!(s.U * s.U_inv == Matrix::identity(a.ring(), a.rows()))) return "U not invertible";
  if (!(s.V * s.V_inv == Matrix::identity(a.ring(), a.cols()))) return "V not invertible";
  if (!std::is_sorted(s.invariants.begin(), s.invariants.end())) return "invariants unsorted";
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      RingElem want = (i == j) ? r.p_power(s.invariants[i]) : r.zero();
      if (s.D(i, j) != want) return "D is not diagonal in normal form";
    }
  return "";
}

Matrix biased_matrix(const RingPtr& r, std::size_t m, std::size_t n, std::mt19937_64& rng) {
  Matrix a(r, m, n);
  std::uniform_int_distribution<std::uint64_t> d(0, r->size() - 1);
  std::uniform_int_distribution<int> shift(0, r->n());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = r->mul(r->decode(d(rng)), r->p_power(shift(rng)));
  return a;
}

std::string check_kernel_cokernel(const Matrix& a) {
  const ChainRing& R = *a.ring();
  Matrix k = kernel(a);
  std::vector<Vector> kg;
  for (std::size_t j = 0; j < k.cols(); ++j) kg.push_back(k.column(j));
  if (oracle::span(R, a.cols(), kg) != oracle::kernel_set(a)) return "kernel differs from enumeration";
  Cokernel c = cokernel(a);
  auto col = oracle::column_span(a);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < a.rows(); ++i) total *= R.size();
  if (oracle::module_size(R, c.exps) * col.size() != total) return "cokernel size differs";
  for (const Vector& v : oracle::all_vectors(R, a.rows(), 1u << 16)) {
    Vector pv = c.proj.apply(v);
    bool zero = true;
    for (std::size_t i = 0; i < pv.size(); ++i)
      if (R.reduce_mod_p_power(pv[i], c.exps[i]) != R.zero()) zero = false;
    if (zero != (col.count(oracle::encode(R, v)) > 0)) return "cokernel map kills the wrong vectors";
  }
  return "";
}

// Size of the brute-force search space of W-linear maps M -> N.
std::uint64_t hom_search_space(const FinModule& m, const FinModule& n) {
  const ChainRing& r = *n.ring();
  std::uint64_t total = 1;
  for (std::size_t j = 0; j < n.rank(); ++j)
    for (std::size_t i = 0; i < m.rank(); ++i) {
      for (int t = 0; t < n.exp(j) * r.f(); ++t) {
        total *= static_cast<std::uint64_t>(r.p());
        if (total > (1u << 20)) return total;
      }
    }
  return total;
}

std::set<oracle::Code> codes(const std::vector<Matrix>& ms) {
  std::set<oracle::Code> out;
  for (const Matrix& m : ms) {
    oracle::Code c;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) c.push_back(m.ring()->encode(m(i, j)));
    out.insert(c);
  }
  return out;
}

std::string c1(std::uint64_t) {
  auto t0 = Clock::now();
  std::size_t n = 0;
  for (const NamedDiagram& nd : builtin_suite()) {
    CoendResult cr;
    try {
      cr = coend(nd.diagram);
    } catch (const Error& e) {
      throw Failure{nd.name + ": " + e.what()};
    }
    AxiomReport a = coalgebra_check(*cr.L);
    require(a.ok(), nd.name + ": " + a.message);
    ++n;
  }
  const double s = since(t0);
  require(s < 5.0, "suite took " + fmt(s));
  return std::to_string(n) + " diagrams, axioms exact";
}

std::string c2(std::uint64_t) {
  std::size_t n = 0;
  for (int p : {2, 3})
    for (std::size_t r = 1; r <= 3; ++r) {
      auto t0 = Clock::now();
      AlgebraSpec alg = AlgebraSpec::make(p, 1, 1);
      const std::string tag = "F" + std::to_string(p) + " r=" + std::to_string(r);
      CoendResult cr = coend(comatrix_diagram(alg, r));
      const FinModule& L = cr.L->carrier();
      require(L.is_free() && L.rank() == r * r, tag + ": L = " + L.to_string());
      CoalgebraPtr c = comatrix_coalgebra(alg, r);
      CounitResult cu = counit_map(c, {standard_comatrix_comodule(c, r)});
      require(cu.well_defined && cu.bimodule_map && cu.coalgebra_map, tag + ": nu is not a coalgebra map");
      require(cu.iso(), tag + ": nu is not an isomorphism");
      const double s = since(t0);
      require(s < 1.0, tag + " took " + fmt(s));
      ++n;
    }
  return std::to_string(n) + " comatrix cases, rank r^2 and nu iso";
}

std::string c3(std::uint64_t) {
  AlgebraSpec f2 = AlgebraSpec::make(2, 1, 1);
  for (std::size_t g = 1; g <= 3; ++g) {
    CoalgebraPtr c = grouplike_coalgebra(f2, g);
    std::vector<Comodule> lines;
    for (std::size_t i = 0; i < g; ++i) lines.push_back(grouplike_line(c, i));
    CounitResult cu = counit_map(c, lines);
    require(cu.well_defined && cu.coalgebra_map, "g=" + std::to_string(g) + ": nu not a coalgebra map");
    require(cu.iso(), "g=" + std::to_string(g) + ": nu not an isomorphism");
  }
  return "g = 1, 2, 3: nu iso";
}

std::string c4(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::size_t n = 0;
  for (const AlgebraSpec& alg : {AlgebraSpec::make(2, 1, 1), AlgebraSpec::make(2, 1, 2),
                                 AlgebraSpec::make(2, 2, 1)}) {
    for (int trial = 0; trial < 20; ++trial) {
      DiagramCategory d = gen::random_diagram(alg, rng, 3, 2);
      DiagramCategory full = hom_closure(d);
      require(validate(full).ok(), "closure is not a category");
      require(same_presentation(coend(d), coend(full)),
              alg.B()->name() + " trial " + std::to_string(trial) + ": presentations differ");
      ++n;
    }
  }
  return std::to_string(n) + " random diagrams";
}

std::string c5(std::uint64_t) {
  std::size_t lifts_n = 0, maps = 0;
  for (const NamedDiagram& nd : builtin_suite()) {
    const DiagramCategory& d = nd.diagram;
    CoendResult cr = coend(d);
    std::vector<Comodule> lifts = lift_coaction(d, cr);
    require(lifts.size() == d.size(), nd.name + ": wrong number of lifts");
    for (std::size_t k = 0; k < d.size(); ++k) {
      AxiomReport a = comodule_check(lifts[k]);
      require(a.ok(), nd.name + " object " + d.object(k).name + ": " + a.message);
      ++lifts_n;
    }
    for (std::size_t k = 0; k < d.size(); ++k)
      for (std::size_t l = 0; l < d.size(); ++l)
        for (const Matrix& F : d.homs(k, l)) {
          require(is_comodule_map(lifts[k], lifts[l], d.alg().restrict(F)),
                  nd.name + ": a morphism " + d.object(k).name + " -> " + d.object(l).name +
                      " is not a comodule map");
          ++maps;
        }
  }
  return std::to_string(lifts_n) + " lifts, " + std::to_string(maps) + " morphisms";
}

std::string c6(std::uint64_t) {
  auto t0 = Clock::now();
  AlgebraSpec f2 = AlgebraSpec::make(2, 1, 1);
  DiagramCategory d = mf_to_diagram(mf1_family(f2), kFamilyNames);
  CoendResult cr = coend(d);
  std::vector<Comodule> lifts = lift_coaction(d, cr);
  std::vector<UnitPairResult> unit = unit_fully_faithful_check(d, lifts);
  require(unit.size() == 9, "expected 9 pairs, got " + std::to_string(unit.size()));
  for (const UnitPairResult& u : unit) {
    require(u.verdict == UnitVerdict::Equal, d.object(u.src).name + " -> " + d.object(u.dst).name +
                                                 ": " + to_string(u.verdict));
  }
  require(flatness_check(*cr.L), "L is not flat");
  EssentialSurjectivityProbe es = essential_surjectivity_probe(cr, lifts, 1, 1u << 20);
  require(es.verdict == Verdict::Verified, std::string("probe: ") + to_string(es.verdict) + ", " + es.reason);
  const double s = since(t0);
  require(s < 10.0, "took " + fmt(s));
  return "9/9 pairs equal, flat, probe rank<=1 verified (" + std::to_string(es.comodules) +
         " comodules)";
}

std::string c7(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::size_t runs = 0, oracle_runs = 0;
  for (auto [p, n, f] : {std::tuple{2, 3, 1}, {2, 1, 2}, {2, 2, 2}}) {
    RingPtr r = ChainRing::make(p, n, f);
    std::uniform_int_distribution<std::size_t> dim(0, 6);
    for (int t = 0; t < 1000; ++t) {
      Matrix a = biased_matrix(r, dim(rng), dim(rng), rng);
      std::string e = check_smith(a);
      require(e.empty(), r->name() + ": " + e + " on " + a.to_string());
      ++runs;
    }
    std::uniform_int_distribution<std::size_t> small(1, 3);
    for (int t = 0; t < 60; ++t) {
      Matrix a = biased_matrix(r, small(rng), small(rng), rng);
      std::string e = check_kernel_cokernel(a);
      require(e.empty(), r->name() + ": " + e + " on " + a.to_string());
      ++oracle_runs;
    }
  }
  return std::to_string(runs) + " Smith runs, " + std::to_string(oracle_runs) + " oracle runs";
}

std::string c8(std::uint64_t) {
  std::size_t checked = 0;
  for (auto [p, n, f] : {std::tuple{2, 2, 2}, {2, 1, 2}}) {
    RingPtr rp = ChainRing::make(p, n, f);
    const ChainRing& r = *rp;
    for (std::uint64_t i = 0; i < r.size(); ++i) {
      RingElem a = r.decode(i);
      RingElem sa = r.frobenius(a);
      require(r.reduce_mod_p_power(r.sub(sa, r.mul(a, a)), 1) == r.zero(),
              r.name() + ": sigma(a) != a^2 mod 2 at " + r.format(a));
      require(r.frobenius(sa) == a, r.name() + ": sigma^2 != id at " + r.format(a));
      for (std::uint64_t j = 0; j < r.size(); ++j) {
        RingElem b = r.decode(j);
        require(r.frobenius(r.add(a, b)) == r.add(sa, r.frobenius(b)), r.name() + ": not additive");
        require(r.frobenius(r.mul(a, b)) == r.mul(sa, r.frobenius(b)), r.name() + ": not multiplicative");
        ++checked;
      }
    }
  }
  return std::to_string(checked) + " pairs, zero violations";
}

std::string c9(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<FilteredFModule> objects;
  std::size_t candidates = 0, lengths = 0, fl = 0, homs = 0;
  for (const AlgebraSpec& alg :
       {AlgebraSpec::make(2, 1, 1), AlgebraSpec::make(3, 1, 1), AlgebraSpec::make(2, 2, 1),
        AlgebraSpec::make(2, 1, 2), AlgebraSpec::make(2, 2, 2), AlgebraSpec::make(3, 2, 1)}) {
    const RingPtr& W = alg.B();
    std::vector<FilteredFModule> pool = mf1_family(alg);
    if (alg.B()->p() > 2) pool.push_back(tate(alg, 2));
    for (int t = 0; t < 8; ++t) pool.push_back(gen::random_mf(alg, rng, 2, W->p() - 1));
    if (W->n() > 1)
      for (int t = 0; t < 4; ++t) pool.push_back(gen::random_mf(alg, rng, 2, W->p() - 1, 1));
    // Same filtration, phi composed with a random endomorphism: still valid,
    // FL exactly when that endomorphism is invertible.
    std::vector<FilteredFModule> twisted;
    for (const FilteredFModule& x : pool) {
      Matrix A = gen::random_matrix(W, x.M.rank(), x.M.rank(), rng);
      std::vector<Matrix> phi;
      for (const Matrix& m : x.phi) phi.push_back(A * m);
      twisted.push_back(mf_with_phi(x, phi));
    }
    pool.insert(pool.end(), twisted.begin(), twisted.end());
    for (const FilteredFModule& x : pool) {
      MFCheck c = mf_validate(x);
      require(c.ok(), "suite object invalid: " + c.message);
      ++candidates;
      MBarResult mb = mbar(x);
      require(mb.length_M == mb.length_Mbar, "len(Mbar) != len(M) on " + x.M.to_string());
      ++lengths;
      const bool surj = phibar_surjective(x), iso = is_mf_fl(x);
      require(surj == iso, "phibar surjective but not an isomorphism");
      fl += iso;
    }
    for (const FilteredFModule& x : pool)
      for (const FilteredFModule& y : pool) {
        if (hom_search_space(x.M, y.M) > 4096) continue;
        std::vector<Matrix> found = mf_hom(x, y).elements(alg, 1u << 16);
        require(codes(found) == codes(oracle::mf_hom_enumerate(x, y, 4096)),
                W->name() + ": mf_hom differs from enumeration");
        ++homs;
      }
  }
  require(homs >= 100, "too few hom comparisons: " + std::to_string(homs));
  return std::to_string(candidates) + " objects (" + std::to_string(fl) + " FL), " +
         std::to_string(lengths) + " length checks, " + std::to_string(homs) + " hom comparisons";
}

std::string c10(std::uint64_t) {
  std::size_t refuted = 0;
  AlgebraSpec f2 = AlgebraSpec::make(2, 1, 1);
  // Iso reflection broken by leaving the inverse out of the spans.
  for (const AlgebraSpec& alg : {f2, AlgebraSpec::make(2, 1, 2), AlgebraSpec::make(2, 2, 2)}) {
    for (std::size_t r : {1, 2}) {
      DiagramCategory d(alg);
      d.add_object("A", r);
      d.add_object("C", r);
      d.add_hom(0, 0, Matrix::identity(alg.B(), r));
      d.add_hom(1, 1, Matrix::identity(alg.B(), r));
      d.add_hom(0, 1, Matrix::identity(alg.B(), r));
      require(validate(d).ok(), "iso instance is not a category");
      IsoReflection iso = check_iso_reflection(d, 1u << 16);
      require(iso.verdict == Verdict::Refuted && iso.witness.has_value(),
              alg.B()->name() + ": iso reflection not refuted");
      require(iso_witness_holds(d, *iso.witness), "iso witness does not re-validate");
      ++refuted;
    }
  }
  // Cofilteredness broken by removing the cone objects.
  for (const DiagramCategory& d : {grouplike_diagram(f2, 2), grouplike_diagram(f2, 3),
                                   comatrix_diagram(f2, 2), comatrix_diagram(AlgebraSpec::make(3, 1, 1), 2)}) {
    Cofilteredness c = check_cofiltered(d, 1u << 16);
    require(c.verdict == Verdict::Refuted, "cofilteredness not refuted: " + c.reason);
    if (c.cone) {
      require(cone_witness_holds(d, *c.cone, 1u << 16), "cone witness does not re-validate");
    } else {
      require(c.equalizer.has_value(), "refuted without a witness");
      require(equalizer_witness_holds(d, *c.equalizer, 1u << 16), "equalizer witness does not re-validate");
    }
    ++refuted;
  }
  // Trivial one-object diagram with all of End(B).
  std::size_t verified = 0;
  for (const AlgebraSpec& alg : {f2, AlgebraSpec::make(2, 1, 2), AlgebraSpec::make(2, 2, 2)}) {
    DiagramCategory d = trivial_diagram(alg);
    require(check_iso_reflection(d, 1u << 16).verdict == Verdict::Verified,
            alg.B()->name() + ": i) not verified on the trivial diagram");
    require(check_cofiltered(d, 1u << 16).verdict == Verdict::Verified,
            alg.B()->name() + ": ii) not verified on the trivial diagram");
    ++verified;
  }
  return std::to_string(refuted) + " negatives refuted with witnesses, " + std::to_string(verified) +
         " trivial diagrams verified";
}

struct Entry {
  const char* title;
  std::function<std::string(std::uint64_t)> run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = {
      {"coend axioms on the built-in suite", c1},
      {"comatrix reconstruction", c2},
      {"grouplike reconstruction", c3},
      {"generator robustness", c4},
      {"unit lift", c5},
      {"MF^1 fully-faithfulness surrogate", c6},
      {"Smith correctness", c7},
      {"Frobenius", c8},
      {"MF invariants", c9},
      {"recognition soundness", c10},
  };
  return e;
}

}  // namespace

std::vector<NamedDiagram> builtin_suite() {
  std::vector<NamedDiagram> out;
  const AlgebraSpec f2 = AlgebraSpec::make(2, 1, 1), f3 = AlgebraSpec::make(3, 1, 1);
  const AlgebraSpec gr42 = AlgebraSpec::make(2, 2, 2), z4 = AlgebraSpec::make(2, 2, 1);
  out.push_back({"trivial F2", trivial_diagram(f2)});
  out.push_back({"trivial GR(4,2)", trivial_diagram(gr42)});
  for (const auto& [name, alg] : {std::pair{"F2", f2}, {"F3", f3}}) {
    for (std::size_t g = 1; g <= 3; ++g)
      out.push_back({std::string("grouplike ") + name + " g=" + std::to_string(g), grouplike_diagram(alg, g)});
    for (std::size_t r = 1; r <= 3; ++r)
      out.push_back({std::string("comatrix ") + name + " r=" + std::to_string(r), comatrix_diagram(alg, r)});
  }
  for (std::size_t r = 1; r <= 2; ++r)
    out.push_back({"full endomorphisms GR(4,2) r=" + std::to_string(r), full_endomorphism_diagram(gr42, r)});
  for (const auto& [name, alg] : {std::pair{"F2", f2}, {"F3", f3}, {"Z/4", z4}})
    out.push_back({std::string("MF^1 ") + name, mf_to_diagram(mf1_family(alg), kFamilyNames)});
  return out;
}

CriterionResult run_criterion(int id, std::uint64_t seed) {
  if (id < 1 || id > static_cast<int>(entries().size())) throw InvalidArgument("no criterion " + std::to_string(id));
  const Entry& e = entries()[static_cast<std::size_t>(id - 1)];
  CriterionResult r;
  r.id = id;
  r.title = e.title;
  auto t0 = Clock::now();
  try {
    r.detail = e.run(seed);
    r.pass = true;
  } catch (const Failure& f) {
    r.detail = f.why;
  } catch (const std::exception& ex) {
    r.detail = std::string("exception: ") + ex.what();
  }
  r.seconds = since(t0);
  return r;
}

std::vector<CriterionResult> run_all(std::uint64_t seed) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= static_cast<int>(entries().size()); ++id) out.push_back(run_criterion(id, seed));
  return out;
}

}  // namespace tforge::accept
