#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qf2/linalg.hpp"

namespace qf2 {

enum class Answer { Yes, No, Inconclusive };

std::string to_string(Answer a);

class FormError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Limits for searches over function fields.
struct SearchBounds {
  unsigned degree = 4;                 // max total degree of polynomial coefficients
  std::uint64_t budget = 1u << 20;     // candidate vectors or matrices tried
};

/// q(w) = sum (a_i x_i^2 + x_i y_i + b_i y_i^2) + sum c_j z_j^2 on the basis
/// e_1, f_1, ..., e_r, f_r, g_1, ..., g_s.
struct QuadraticForm {
  Field field;
  std::vector<std::pair<Elem, Elem>> pairs;
  std::vector<Elem> diag;

  std::size_t r() const { return pairs.size(); }
  std::size_t s() const { return diag.size(); }
  std::size_t dim() const { return 2 * pairs.size() + diag.size(); }

  static QuadraticForm hyperbolic(Field f, std::size_t r);
  friend bool operator==(const QuadraticForm&, const QuadraticForm&) = default;
};

/// Direct sum; pairs of a then b, diagonal of a then b.
QuadraticForm orthogonal_sum(const QuadraticForm& a, const QuadraticForm& b);

Elem eval_q(const QuadraticForm& f, const Vector& w);
Elem eval_B(const QuadraticForm& f, const Vector& w, const Vector& w2);

/// Gram matrix of B: [[0,1],[1,0]] blocks, zero on the radical.
Matrix gram(const QuadraticForm& f);

bool in_radical(const QuadraticForm& f, const Vector& w);
bool preserves_B(const QuadraticForm& f, const Matrix& m);
/// Invertible, preserves B, and q on basis vectors and their pairwise sums.
bool is_isometry(const QuadraticForm& f, const Matrix& m);
/// q2(m w) = q1(w) for all w, m invertible.
bool is_isometry_between(const QuadraticForm& f1, const QuadraticForm& f2, const Matrix& m);

/// Zero-norm vectors of rad(V), as a basis of full-length vectors.
std::vector<Vector> defect_subspace(const QuadraticForm& f);
std::size_t defect(const QuadraticForm& f);

struct WittDecomposition {
  std::size_t witt_index = 0;
  QuadraticForm nonsingular_aniso;
  QuadraticForm singular_aniso;
  std::size_t defect = 0;
  /// Columns are the new basis in old coordinates: witt_index hyperbolic pairs,
  /// the anisotropic pairs, defect vectors, then anisotropic radical vectors.
  Matrix basis;
  bool conclusive = true;

  /// i H + nonsingular_aniso + <0^j> + singular_aniso; q_reassembled(w) = q(basis w).
  QuadraticForm reassembled() const;
};

/// Over finite fields the anisotropic part is brought to normal form: the
/// nonsingular part is empty or [1, c0] with c0 the least element of trace
/// one, and the radical part is empty or <1>.
WittDecomposition witt_decompose(const QuadraticForm& f, const SearchBounds& bounds = {});

/// trace(sum a_i b_i); finite field and s = 0 only.
unsigned arf_invariant(const QuadraticForm& f);

enum class Rewrite { Swap, Shift, Scale, Mix, Commute };

struct Rewritten {
  QuadraticForm form;
  Matrix map;  // q_new(w) = q_old(map w)
};

/// [a,b] -> [b,a] | [a,a+b+1] | [alpha^2 a, alpha^-2 b]; Mix and Commute act
/// on pairs (position, position+1).
Rewritten rewrite_isometry(const QuadraticForm& f, Rewrite rule, std::size_t position,
                           const std::optional<Elem>& scalar = std::nullopt);

/// Symplectic basis e_1', f_1, ..., of a complement of rad(V) whose first
/// e-vectors span the same space as vecs.
std::vector<Vector> complete_symplectic_basis(const QuadraticForm& f, const std::vector<Vector>& vecs);

struct IsometryVerdict {
  Answer answer = Answer::Inconclusive;
  std::optional<Matrix> witness;  // q2(witness w) = q1(w)
  std::string reason;
};

IsometryVerdict is_isometric(const QuadraticForm& f1, const QuadraticForm& f2,
                             const SearchBounds& bounds = {});

/// Vectors of V as coordinates over a finite field, in scan order
/// (first coordinate fastest). Returns nullopt past the end.
std::optional<Vector> nth_vector(Field f, std::size_t n, std::uint64_t index);

}  // namespace qf2
