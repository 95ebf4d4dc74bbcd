#include "doctest.h"

#include "report.hpp"
#include "tforge/error.hpp"

using namespace tforge;
using nlohmann::json;

namespace {

const json* find_check(const json& report, const std::string& name) {
  for (const json& c : report["checks"])
    if (c["name"] == name) return &c;
  return nullptr;
}

const char* kLines = R"(alg F4
object A rank 1
object B rank 1
hom A A = [[[1]]]
hom B B = [[[1]]]
)";

const char* kEndo = R"(alg GR(4,2)
object V rank 2
hom V V = [[[1,0],[0,0]], [[0,1],[0,0]], [[0,0],[1,0]], [[0,0],[0,1]]]
)";

}  // namespace

TEST_CASE("mf demo over F2 with M(0), M(1)") {
  cli::Report r = cli::cmd_mf_demo(2, 1, 1, "M(0),M(1)", {});
  CHECK(r.exit_code == cli::kPass);
  CHECK(r.json["status"] == "pass");
  CHECK(r.json["coend"]["rank"] == 2);
  CHECK(r.json["unit"]["fully_faithful"] == true);
  const json* flat = find_check(r.json, "flat");
  REQUIRE(flat);
  CHECK((*flat)["verdict"] == "pass");
}

TEST_CASE("mf demo over Z/4 keeps hom lengths") {
  cli::Report r = cli::cmd_mf_demo(2, 2, 1, "M(0),M(1),M(0)+M(1)", {});
  CHECK(r.exit_code == cli::kPass);
  for (const json& p : r.json["unit"]["pairs"]) CHECK(p["span_length"] == p["hom_length"]);
}

TEST_CASE("grouplike coalgebra file reconstructs") {
  cli::Report r = cli::cmd_reconstruct("alg F2\nbuiltin grouplike 2\nfamily lines\n", {});
  CHECK(r.exit_code == cli::kPass);
  CHECK(r.json["coend"]["rank"] == 2);
  const json* iso = find_check(r.json, "counit.iso");
  REQUIRE(iso);
  CHECK((*iso)["verdict"] == "pass");
}

TEST_CASE("a family that misses a grouplike element is not reconstructed") {
  cli::Report r = cli::cmd_reconstruct(R"(alg GR(4,2)
coalgebra rank 2
comult 0 = (0,0,1)
comult 1 = (1,1,1)
counit = [1, 1]
comodule L rank 1
rho 0 = (1,0,1)
)",
                                       {});
  CHECK(r.exit_code == cli::kFail);
  CHECK(r.json["failures"] == json::array({"counit.iso"}));
}

TEST_CASE("reports are deterministic and self-digesting") {
  cli::Options opt;
  cli::Report a = cli::cmd_recognize(kEndo, opt);
  cli::Report b = cli::cmd_recognize(kEndo, opt);
  CHECK(a.json.dump() == b.json.dump());
  CHECK(a.json["digest"] == cli::report_digest(a.json));

  opt.timings = true;
  cli::Report t = cli::cmd_recognize(kEndo, opt);
  CHECK(t.json.contains("timings"));
  CHECK(t.json["digest"] == a.json["digest"]);

  json parsed = json::parse(a.json.dump(2));
  CHECK(parsed == a.json);
  parsed["status"] = "pass";
  CHECK(cli::report_digest(parsed) != a.json["digest"]);
}

TEST_CASE("checks are sorted and failures list the failing ones") {
  cli::Report r = cli::cmd_recognize(kLines, {});
  std::vector<std::string> names;
  for (const json& c : r.json["checks"]) names.push_back(c["name"]);
  CHECK(std::is_sorted(names.begin(), names.end()));
  for (const json& c : r.json["checks"]) {
    bool listed = false;
    for (const json& f : r.json["failures"]) listed = listed || f == c["name"];
    CHECK(listed == (c["verdict"] == "fail" || c["verdict"] == "refuted"));
  }
}

TEST_CASE("refutations carry valid witnesses") {
  cli::Report r = cli::cmd_recognize(kLines, {});
  CHECK(r.exit_code == cli::kFail);
  for (const json& c : r.json["checks"])
    if (c.contains("witness_valid")) CHECK(c["witness_valid"] == true);
}

TEST_CASE("small budgets give inconclusive, never a verdict") {
  cli::Options opt;
  opt.budget = 2;
  cli::Report r = cli::cmd_recognize(kEndo, opt);
  const json* i = find_check(r.json, "recognition.i.reflects_isos");
  REQUIRE(i);
  CHECK((*i)["verdict"] == "inconclusive");

  cli::Report ok = cli::cmd_reconstruct(kLines, opt);
  CHECK(ok.exit_code == cli::kPass);
  opt.budget = 1;  // rank <= 1 structures over F2 number 2
  cli::Report demo = cli::cmd_mf_demo(2, 1, 1, "M(0)", opt);
  const json* es = find_check(demo.json, "essential_surjectivity.rank<=1");
  REQUIRE(es);
  CHECK((*es)["verdict"] == "inconclusive");
  CHECK(demo.exit_code == cli::kInconclusive);
}

TEST_CASE("bad input raises parse errors") {
  CHECK_THROWS_AS(cli::cmd_coend("alg F6\n", {}), ParseError);
  CHECK_THROWS_AS(cli::cmd_mf_check("mf over F2 { M = mod(1) }", {}), ParseError);
  CHECK_THROWS_AS(cli::cmd_mf_demo(2, 1, 1, "N(0)", {}), ParseError);
  cli::Report e = cli::input_error("coend", "boom");
  CHECK(e.exit_code == cli::kInputError);
  CHECK(e.json["status"] == "input_error");
}

TEST_CASE("mf check flags a non-FL object") {
  cli::Report r = cli::cmd_mf_check(R"(
mf T over Z/4 {
  M = mod(2);
  fil 0 = [[1]]; phi 0 = [[2]];
  fil 1 = [[2]]; phi 1 = [[2]];
}
)",
                                    {});
  CHECK(r.exit_code == cli::kPass);
  REQUIRE(r.json["objects"].size() == 1);
  const json& t = r.json["objects"][0];
  CHECK(t["valid"] == true);
  CHECK(t["fl"] == false);
  CHECK(t["proj"] == false);
  CHECK(t["length_Mbar"] == t["length_M"]);
}

TEST_CASE("verify-suite passes and its digest ignores timings") {
  cli::Options opt;
  cli::Report a = cli::cmd_verify_suite(opt);
  CHECK(a.exit_code == cli::kPass);
  CHECK(a.json["checks"].size() == 12);
  opt.timings = true;
  cli::Report b = cli::cmd_verify_suite(opt);
  CHECK(a.json["digest"] == b.json["digest"]);
}
