#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qf2/oracle.hpp"

namespace qf2 {

struct CheckFailure {
  std::string element;  // DSL matrix
  std::string detail;
};

struct TheoremCheck {
  std::string name;
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::vector<CheckFailure> failures;  // the first few
  bool passed() const { return failed == 0; }
};

struct VerifyReport {
  QuadraticForm form;
  std::uint64_t order = 0;
  GroupMethod method = GroupMethod::Auto;
  std::size_t involutions = 0;
  std::size_t classes = 0;
  /// Orthogonal transvections generate a proper subgroup.
  bool generation_exception = false;
  std::uint64_t transvection_subgroup_order = 0;
  std::vector<TheoremCheck> checks;
  bool passed() const;
};

/// Enumerates O(f) and checks every involution against the factorization,
/// decomposition and classification results, plus the group orders.
VerifyReport verify_theorems(const QuadraticForm& f, std::size_t cap = 1'000'000);

}  // namespace qf2
