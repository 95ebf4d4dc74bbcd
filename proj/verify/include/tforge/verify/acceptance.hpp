#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tforge/diagram.hpp"

namespace tforge::accept {

struct NamedDiagram {
  std::string name;
  DiagramCategory diagram;
};

/// Trivial, grouplike (F2, F3), comatrix ranks 1-3 (F2, F3), full
/// endomorphisms over GR(4,2) and the MF^1 families over F2, F3 and Z/4.
std::vector<NamedDiagram> builtin_suite();

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;  // counts on success, the first failure otherwise
  double seconds = 0;
};

/// Criteria 1..10; `seed` drives the randomized ones.
CriterionResult run_criterion(int id, std::uint64_t seed = 20240601);
std::vector<CriterionResult> run_all(std::uint64_t seed = 20240601);

}  // namespace tforge::accept
