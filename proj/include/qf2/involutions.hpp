#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qf2/quadratic_form.hpp"

namespace qf2 {

/// w -> w + a B(u,w) u, as a matrix on the full space.
Matrix transvection_matrix(const QuadraticForm& f, const Vector& u, const Elem& a);
/// The orthogonal transvection, a = 1/q(u). Throws when q(u) = 0.
Matrix orthogonal_transvection(const QuadraticForm& f, const Vector& u);

struct Transvection {
  Vector u;
  Elem a;
};

/// a q(u) = 1, or the map is the identity.
bool is_orthogonal_transvection(const QuadraticForm& f, const Transvection& t);

/// tau_{u_l,a_l} ... tau_{u_1,a_1} with mutually orthogonal u_i.
struct DiagonalInvolution {
  std::vector<Vector> vectors;
  std::vector<Elem> scalars;
  std::size_t length() const { return vectors.size(); }
};

/// Two orthogonal hyperbolic planes with eta(f1) = e2 + f1, eta(f2) = e1 + f2.
struct NullBlock {
  Vector e1, f2, e2, f1;
};

struct NullInvolution {
  std::vector<NullBlock> blocks;
  std::size_t length() const { return blocks.size(); }
};

/// Radical coordinates (length s). pairs[i] = (g_i, rho g_i); fixed spans a
/// complement on which rho is the identity.
struct RadicalInvolution {
  std::vector<std::pair<Vector, Vector>> pairs;
  std::vector<Vector> fixed;
  std::size_t length() const { return pairs.size(); }
};

/// [[tau, 0], [Y, rho]] with tau on V_B (2r x 2r), Y: V_B -> rad (s x 2r).
struct BlockInvolution {
  Matrix tau;
  Matrix Y;
  Matrix rho;
};

Matrix to_matrix(const QuadraticForm& f, const DiagonalInvolution& d);
Matrix to_matrix(const QuadraticForm& f, const NullInvolution& n);
/// Acts on the full space, identity on V_B.
Matrix to_matrix(const QuadraticForm& f, const RadicalInvolution& r);
Matrix to_matrix(const BlockInvolution& b);
Matrix null_block_matrix(const QuadraticForm& f, const NullBlock& b);
/// s x s matrices of the basic factors, in pair order.
std::vector<Matrix> basic_radical_factors(Field k, const RadicalInvolution& r);

BlockInvolution split_block(const QuadraticForm& f, const Matrix& m);

/// Echelonized basis of the column space of m - id.
std::vector<Vector> residual_space(const Matrix& m);

enum class SymplecticType { Hyperbolic, Diagonal };
std::string to_string(SymplecticType t);

/// Requires m^2 = id, m != id, m preserving B.
SymplecticType classify_symplectic_involution(const QuadraticForm& f, const Matrix& m);

/// Symplectic involution of diagonal type as res(m) transvections supported
/// on a basis of R_m. Throws when m is hyperbolic or R_m meets rad(V).
DiagonalInvolution symplectic_diagonal_factorization(const QuadraticForm& f, const Matrix& m);

struct ReducedFactorization {
  SymplecticType type;
  DiagonalInvolution diagonal;  // when type == Diagonal
  NullInvolution null;          // when type == Hyperbolic
};

/// Orthogonal involution as orthogonal transvections or basic null blocks;
/// the recomposition is checked before returning.
ReducedFactorization reduced_factorization(const QuadraticForm& f, const Matrix& m);

/// span U = span X and A^T [a] A = [b], where u_i = sum_j A_ij x_j.
bool involution_compatible(const QuadraticForm& f, const std::vector<Vector>& U, const std::vector<Elem>& a,
                           const std::vector<Vector>& X, const std::vector<Elem>& b);
bool equal_diagonal(const QuadraticForm& f, const DiagonalInvolution& s1, const DiagonalInvolution& s2);
/// phi sigma phi^-1, i.e. vectors phi(u_i) with the same scalars.
DiagonalInvolution conjugate_by(const QuadraticForm& f, const Matrix& phi, const DiagonalInvolution& s);

/// rho is s x s on rad(V) with norms diag.
RadicalInvolution decompose_radical(const std::vector<Elem>& diag, const Matrix& rho);
std::vector<Elem> quadratic_signature(const std::vector<Elem>& diag, const RadicalInvolution& r);

bool block_is_involution(const BlockInvolution& b);
/// phi preserves B on V_B, delta preserves q on rad(V), and
/// q(w) + q(Xw) = q(phi w) on the basis of V_B.
bool block_is_orthogonal(const QuadraticForm& f, const Matrix& phi, const Matrix& X, const Matrix& delta);

struct NormalizedBlock {
  DiagonalInvolution first;  // orthogonal transvections tau_{u_i'}
  Matrix Y;                  // Y' with q(Y'w) = 0
  Matrix rho;
};

/// b = (tau_{U'}, 0, id)(id, Y', id)(id, 0, rho) as full matrices, where the
/// first factor is the full-space product of the tau_{u_i'}.
NormalizedBlock normalize_block(const QuadraticForm& f, const BlockInvolution& b);

enum class BlockYRule {
  Dual,     // Y u_i = h_i + rho h_i, Y v_i = a_i h_i
  Shifted,  // Y u_i = h_i + rho h_i, Y v_i = (h_i + rho h_i) / q(u_i)
};

/// tau acts on V_B (vectors with zero radical part); h_i in radical
/// coordinates. Dual requires q(h_i) = q(u_i) + 1/a_i and always yields an
/// orthogonal involution; Shifted is returned unchecked.
BlockInvolution construct_block_Y(const QuadraticForm& f, const DiagonalInvolution& tau, const Matrix& rho,
                                  const std::vector<Vector>& h, BlockYRule rule = BlockYRule::Dual);

/// The form restricted to V_B and to rad(V).
QuadraticForm nonsingular_part(const QuadraticForm& f);
QuadraticForm radical_part(const QuadraticForm& f);

}  // namespace qf2
