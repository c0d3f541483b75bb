#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "qf2/quadratic_form.hpp"

namespace qf2::cli {

inline constexpr const char* kSchema = "qf2-report/1";

/// Exit codes: 0 definite answer, 2 inconclusive, 1 error or failed check.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// The F2(t1,t2) pair whose quadratic forms are isometric while the bilinear
/// forms are not congruent.
struct CounterexampleResult {
  Answer isometric;
  Answer congruent;
  Matrix product;   // A^T diag(1, t2) A for A = [[1,1],[t1,1]]
  Matrix expected;  // [[1+t1^2 t2, 1+t1 t2], [1+t1 t2, 1+t2]]
  bool holds() const {
    return isometric == Answer::Yes && congruent == Answer::No && product == expected;
  }
};

CounterexampleResult counterexample(const SearchBounds& bounds = {});

}  // namespace qf2::cli
