#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qf2/quadratic_form.hpp"

namespace qf2 {

/// Diagonal symmetric bilinear form <a_1, ..., a_l>_B.
using DiagonalBilinear = std::vector<Elem>;

struct CongruenceVerdict {
  Answer answer = Answer::Inconclusive;
  std::optional<Matrix> witness;  // A^T [a] A = [b]
  std::string reason;
};

/// A^T diag(a) A.
Matrix congruence_product(std::span<const Elem> a, const Matrix& A);

/// A invertible and A^T diag(a) A = diag(b) exactly.
bool check_witness(std::span<const Elem> a, std::span<const Elem> b, const Matrix& A);

/// Zero entries are compared by rank; the nonzero parts are then decided.
CongruenceVerdict congruent(std::span<const Elem> a, std::span<const Elem> b, const SearchBounds& bounds = {});

/// From a witness for <1/a_i>_B ~ <1/b_i>_B, the witness diag(a)^-1 A diag(b)
/// for <a_i>_B ~ <b_i>_B.
Matrix transform_inverse_norms(const Matrix& A, std::span<const Elem> a, std::span<const Elem> b);

}  // namespace qf2
