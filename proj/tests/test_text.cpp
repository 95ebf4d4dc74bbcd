#include "doctest.h"

#include "tforge/error.hpp"
#include "tforge/tannaka.hpp"
#include "tforge/text.hpp"

using namespace tforge;

TEST_CASE("ring names") {
  for (const char* s : {"GR(4,2)", "GR(2^2,2)", "GR( 2^2 , 2 )"}) {
    AlgebraSpec a = parse_algebra_name(s);
    CHECK(a.B()->p() == 2);
    CHECK(a.B()->n() == 2);
    CHECK(a.B()->f() == 2);
  }
  CHECK(parse_algebra_name("F4").B()->f() == 2);
  CHECK(parse_algebra_name("F3").B()->p() == 3);
  CHECK(parse_algebra_name("Z/8").B()->n() == 3);
  CHECK(parse_algebra_name("Z/7").B()->n() == 1);
  CHECK(algebra_name(parse_algebra_name("Z/9")) == "GR(3^2,1)");
  for (const char* s : {"F6", "Z/12", "GR(4)", "Q", "F", "GR(6,1)"})
    CHECK_THROWS_AS(parse_algebra_name(s), InvalidArgument);
}

TEST_CASE("diagram files round-trip") {
  const char* text = R"(# two grouplike lines over F4
alg F4
object A rank 1
object B rank 2
hom A A = [[[1]]]
hom B B = [[[1,0],[0,1]], [[x,0],[0,x+1]]]
hom A B = [[[1],[0]]]
probe push nodes A B
arrow 0 1 = [[x],[0]]
)";
  DiagramFile f = parse_diagram(text);
  const DiagramCategory& d = f.diagram;
  REQUIRE(d.size() == 2);
  CHECK(d.object(1).rank == 2);
  CHECK(d.homs(1, 1).size() == 2);
  CHECK(d.homs(1, 1)[1](1, 1) == d.alg().B()->parse("x+1"));
  REQUIRE(f.probes.size() == 1);
  CHECK(f.probes[0].nodes == std::vector<std::size_t>{0, 1});
  CHECK(f.probes[0].arrows.size() == 1);

  DiagramFile g = parse_diagram(print_diagram(d));
  CHECK(print_diagram(g.diagram) == print_diagram(d));
}

TEST_CASE("parse errors carry line and column") {
  auto where = [](const char* text) -> std::pair<std::size_t, std::size_t> {
    try {
      parse_diagram(text);
    } catch (const ParseError& e) {
      return {e.line(), e.column()};
    }
    return {0, 0};
  };
  CHECK(where("alg F4\nobject A rank 1\nhom A C = []\n") == std::pair<std::size_t, std::size_t>{3, 7});
  CHECK(where("alg F6\n") == std::pair<std::size_t, std::size_t>{1, 5});
  CHECK(where("alg F2\nobject A rank 1\nhom A A = [[[1,1]]]\n") ==
        std::pair<std::size_t, std::size_t>{3, 12});
  CHECK(where("alg F2\nobject A rank 1\nhom A A = [[[1],[1,0]]]\n").first == 3);
  CHECK(where("alg F2\nobject A rank 1\nhom A A = [[[y]]]\n") ==
        std::pair<std::size_t, std::size_t>{3, 14});
  CHECK(where("alg F2\nthing\n") == std::pair<std::size_t, std::size_t>{2, 1});
  CHECK(where("alg F2\nobject A rank\n").first == 3);
}

TEST_CASE("coalgebra files") {
  SUBCASE("builtin grouplike with its lines") {
    CoalgebraFile f = parse_coalgebra("alg F2\nbuiltin grouplike 3\nfamily lines\n");
    CHECK(f.axioms.ok());
    CHECK(f.family.size() == 3);
    CHECK(counit_map(f.coalgebra, f.family).iso());
  }
  SUBCASE("explicit comatrix coalgebra of rank 1") {
    CoalgebraFile f = parse_coalgebra(R"(
alg GR(4,2)
coalgebra rank 2
comult 0 = (0,0,1)
comult 1 = (1,1,1)
counit = [1, 1]
comodule L rank 1
rho 0 = (1,0,1)
)");
    CHECK(f.axioms.ok());
    REQUIRE(f.family.size() == 1);
    CHECK(f.names[0] == "L");
  }
  SUBCASE("broken counit is reported, not thrown") {
    CoalgebraFile f = parse_coalgebra(R"(
alg F2
coalgebra rank 1
comult 0 = (0,0,1)
counit = [0]
)");
    CHECK_FALSE(f.axioms.ok());
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(parse_coalgebra("alg F2\nbuiltin grouplike 2\nfamily standard\n"), ParseError);
    CHECK_THROWS_AS(parse_coalgebra("alg F2\ncoalgebra rank 1\ncomult 0 = (0,1,1)\n"), ParseError);
    CHECK_THROWS_AS(parse_coalgebra("alg F2\ncoalgebra rank 1\ncomult 0 = (0,0,1)\n"), ParseError);
  }
}

TEST_CASE("mf files") {
  const char* text = R"(
mf M0 over GR(2^1,1) {
  M = mod(1);
  fil 0 = [[1]]; phi 0 = [[1]];
}
mf over Z/4 {
  M = mod(2);
  fil 0 = [[1]]; phi 0 = [[2]];
  fil 1 = [[2]]; phi 1 = [[2]];
}
mf Z over F2 { M = mod(); }
)";
  std::vector<MFBlock> blocks = parse_mf(text);
  REQUIRE(blocks.size() == 3);
  CHECK(blocks[0].name == "M0");
  CHECK(blocks[1].name.empty());
  CHECK(blocks[1].data.lo == 0);
  CHECK(blocks[1].data.fil_gens.size() == 2);
  for (const MFBlock& b : blocks) CHECK(mf_check(b.data).ok());
  for (const MFBlock& b : blocks) {
    FilteredFModule x = mf_make(b.data);
    std::string once = print_mf(x, b.name);
    std::vector<MFBlock> again = parse_mf(once);
    REQUIRE(again.size() == 1);
    CHECK(print_mf(mf_make(again[0].data), again[0].name) == once);
  }
  CHECK(is_mf_fl(mf_make(blocks[0].data)));
  CHECK_FALSE(is_mf_fl(mf_make(blocks[1].data)));

  CHECK_THROWS_AS(parse_mf("mf over F2 { M = mod(1); fil 0 = [[1]]; }"), ParseError);
  CHECK_THROWS_AS(parse_mf("mf over F2 { M = mod(1); fil 0 = [[1]]; phi 0 = [[1]]; "
                           "fil 2 = [[1]]; phi 2 = [[1]]; }"),
                  ParseError);
  CHECK_THROWS_AS(parse_mf("mf over F2 { fil 0 = [[1]]; }"), ParseError);
  CHECK_THROWS_AS(parse_mf("mf over F2 { M = mod(1) }"), ParseError);
}

TEST_CASE("mf family shorthand") {
  AlgebraSpec f2 = AlgebraSpec::make(2, 1, 1);
  std::vector<MFNamed> fam = parse_mf_family(f2, "M(0), M(1),M(0)+M(1)");
  REQUIRE(fam.size() == 3);
  CHECK(fam[2].name == "M(0)+M(1)");
  CHECK(fam[2].object.M.rank() == 2);
  CHECK(fam[1].object.lo == 1);
  for (const MFNamed& m : fam) CHECK(is_mf_proj(m.object));
  CHECK_THROWS_AS(parse_mf_family(f2, "M(0),N(1)"), ParseError);
  CHECK_THROWS_AS(parse_mf_family(f2, "M(0) M(1)"), ParseError);
}
