#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qf2/involutions.hpp"
#include "qf2/oracle.hpp"

namespace qf2 {

struct ConjugacyVerdict {
  Answer answer = Answer::Inconclusive;
  std::optional<Matrix> witness;  // witness * first * witness^-1 = second
  std::string reason;
};

/// "conjugate", "not-conjugate" or "inconclusive".
std::string conjugacy_word(Answer a);

/// Some g in the group with g m1 g^-1 = m2.
std::optional<Matrix> find_conjugator(const EnumeratedGroup& g, const Matrix& m1, const Matrix& m2);

/// Orthogonal diagonal involutions: conjugate iff the norm forms are congruent.
ConjugacyVerdict conjugate_diagonal(const QuadraticForm& f, const DiagonalInvolution& s1,
                                    const DiagonalInvolution& s2, const SearchBounds& bounds = {},
                                    const EnumeratedGroup* group = nullptr);

/// Symplectic diagonal involutions under Sp(B): conjugate iff the scalar
/// forms <a_i>_B are congruent.
ConjugacyVerdict conjugate_symplectic_diagonal(const DiagonalInvolution& s1, const DiagonalInvolution& s2,
                                               const SearchBounds& bounds = {});

/// Conjugate iff the block counts agree.
ConjugacyVerdict conjugate_null(const QuadraticForm& f, const NullInvolution& n1, const NullInvolution& n2,
                                const EnumeratedGroup* group = nullptr);

/// Conjugate iff the lengths agree and q restricted to the fixed space
/// ker(rho + id) is isometric; diag are the radical norms.
ConjugacyVerdict conjugate_radical(const std::vector<Elem>& diag, const RadicalInvolution& r1,
                                   const RadicalInvolution& r2, const SearchBounds& bounds = {});

/// (phi, X, delta) conjugates b1 to b2: phi tau = tau' phi, delta rho = rho' delta,
/// X tau + rho' X = Y' phi + delta Y. Throws when the triple is not orthogonal.
bool check_block_conjugacy_witness(const QuadraticForm& f, const BlockInvolution& b1, const BlockInvolution& b2,
                                   const Matrix& phi, const Matrix& X, const Matrix& delta);

/// Exhaustive scan of the group; rho = id is required when the radical is anisotropic.
ConjugacyVerdict search_block_conjugator(const QuadraticForm& f, const BlockInvolution& b1,
                                         const BlockInvolution& b2, const EnumeratedGroup& group);

enum class InvolutionKind { Diagonal, Null, Radical, Block };
std::string to_string(InvolutionKind k);

/// Everything the deciders need about one orthogonal involution.
struct InvolutionProfile {
  Matrix matrix;
  InvolutionKind kind;
  std::size_t residual = 0;
  ReducedFactorization reduced;  // Diagonal and Null
  RadicalInvolution radical;     // Radical; the radical part for Block
  BlockInvolution block;         // Block
  std::optional<SymplecticType> tau_type;
  std::size_t tau_residual = 0;
};

InvolutionProfile profile_involution(const QuadraticForm& f, const Matrix& m);

/// Invariants first, then congruence, then the group search when one is
/// given. With want_witness, every conjugate verdict carries a witness from
/// the group.
ConjugacyVerdict compare_profiles(const QuadraticForm& f, const InvolutionProfile& p1, const InvolutionProfile& p2,
                                  const SearchBounds& bounds = {}, const EnumeratedGroup* group = nullptr,
                                  bool want_witness = true);

ConjugacyVerdict conjugate_involutions(const QuadraticForm& f, const Matrix& m1, const Matrix& m2,
                                       const SearchBounds& bounds = {}, const EnumeratedGroup* group = nullptr);

/// Classes of invs under compare_profiles, as index sets. Throws on an
/// inconclusive comparison.
std::vector<std::vector<std::size_t>> classifier_partition(const EnumeratedGroup& group,
                                                           const std::vector<Matrix>& invs);

}  // namespace qf2
