#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "report.hpp"
#include "tforge/error.hpp"

using namespace tforge;
using tforge::cli::Report;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int emit(const Report& r, const std::string& json_path) {
  std::cout << r.text;
  if (json_path == "-") {
    std::cout << r.json.dump(2) << "\n";
  } else if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out) {
      std::cerr << "cannot write " << json_path << "\n";
      return cli::kInputError;
    }
    out << r.json.dump(2) << "\n";
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tannaka-forge: coends, reconstruction and filtered F-modules over Galois rings"};
  app.require_subcommand(1);
  cli::Options opt;
  std::string json_path;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--budget", opt.budget, "enumeration cap for brute-force searches")
        ->capture_default_str();
    sub->add_option("--json", json_path, "write the JSON report here ('-' for stdout)");
    sub->add_flag("--timings", opt.timings, "include per-phase timings");
  };

  std::string input;
  auto* coend = app.add_subcommand("coend", "coend coalgebra of a diagram file");
  auto* recon = app.add_subcommand("reconstruct", "unit and counit checks for a diagram or coalgebra file");
  auto* recog = app.add_subcommand("recognize", "recognition conditions i) to iii) for a diagram file");
  for (auto* s : {coend, recon, recog}) {
    common(s);
    s->add_option("input", input, "input file")->required();
  }

  auto* mf = app.add_subcommand("mf", "filtered F-modules");
  mf->require_subcommand(1);
  int p = 2, n = 1, f = 1;
  std::string objects = "M(0),M(1)";
  auto* demo = mf->add_subcommand("demo", "MF family -> diagram -> coend -> unit and flatness");
  common(demo);
  demo->add_option("--p", p, "residue characteristic")->capture_default_str();
  demo->add_option("--n", n, "truncation level")->capture_default_str();
  demo->add_option("--f", f, "residue degree")->capture_default_str();
  demo->add_option("--objects", objects, "family such as M(0),M(1),M(0)+M(1)")->capture_default_str();
  auto* check = mf->add_subcommand("check", "validate MF blocks from a file");
  common(check);
  check->add_option("input", input, "input file")->required();

  auto* suite = app.add_subcommand("verify-suite", "acceptance criteria and built-in examples");
  common(suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : cli::kInputError;
  }

  std::string command = "verify-suite";
  if (coend->parsed()) command = "coend";
  if (recon->parsed()) command = "reconstruct";
  if (recog->parsed()) command = "recognize";
  if (demo->parsed()) command = "mf demo";
  if (check->parsed()) command = "mf check";
  try {
    Report r;
    if (command == "coend") r = cli::cmd_coend(slurp(input), opt);
    else if (command == "reconstruct") r = cli::cmd_reconstruct(slurp(input), opt);
    else if (command == "recognize") r = cli::cmd_recognize(slurp(input), opt);
    else if (command == "mf demo") r = cli::cmd_mf_demo(p, n, f, objects, opt);
    else if (command == "mf check") r = cli::cmd_mf_check(slurp(input), opt);
    else r = cli::cmd_verify_suite(opt);
    return emit(r, json_path);
  } catch (const ParseError& e) {
    return emit(cli::input_error(command, input.empty() ? e.what() : input + ": " + e.what()), json_path);
  } catch (const BudgetExceeded& e) {
    Report r = cli::input_error(command, e.what());
    r.json["status"] = "inconclusive";
    r.exit_code = cli::kInconclusive;
    return emit(r, json_path);
  } catch (const Error& e) {
    return emit(cli::input_error(command, e.what()), json_path);
  }
}
