#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

namespace tforge::cli {

/// Exit codes: every check passed, some check failed or was refuted, a
/// budget ran out (inconclusive), bad input or usage.
enum ExitCode { kPass = 0, kFail = 1, kInconclusive = 2, kInputError = 3 };

struct Options {
  std::uint64_t budget = 1u << 16;
  bool timings = false;
};

/// JSON report (schema 1):
///   schema, command, inputs {digest, budget, ...}, status, checks[] sorted
///   by name {name, verdict, detail, witness?, witness_valid?}, failures[]
///   (the failing checks' names), command-specific sections, timings
///   (only with Options::timings) and digest, the FNV-1a hash of the report
///   without `digest` and `timings`.
struct Report {
  nlohmann::json json;
  int exit_code = kPass;
  std::string text;  // human-readable summary
};

Report cmd_coend(const std::string& text, const Options& opt);
Report cmd_reconstruct(const std::string& text, const Options& opt);
Report cmd_recognize(const std::string& text, const Options& opt);
Report cmd_mf_demo(int p, int n, int f, const std::string& family, const Options& opt);
Report cmd_mf_check(const std::string& text, const Options& opt);
Report cmd_verify_suite(const Options& opt);

/// Report for input that could not be parsed or used (exit code 3).
Report input_error(const std::string& command, const std::string& message);

std::string fnv1a_hex(const std::string& bytes);
/// Recomputes the digest field of a report.
std::string report_digest(const nlohmann::json& report);

}  // namespace tforge::cli
