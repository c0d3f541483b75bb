#include "qf2/conjugacy.hpp"

#include <unordered_set>

#include "qf2/congruence.hpp"

namespace qf2 {

namespace {

bool is_involution(const Matrix& m) { return (m * m).is_identity() && !m.is_identity(); }

std::vector<Elem> norms(const QuadraticForm& f, const std::vector<Vector>& vs) {
  std::vector<Elem> out;
  for (const auto& v : vs) out.push_back(eval_q(f, v));
  return out;
}

void check_reduced_orthogonal(const QuadraticForm& f, const DiagonalInvolution& s) {
  if (s.vectors.size() != s.scalars.size()) throw FormError("vectors and scalars differ in length");
  for (std::size_t i = 0; i < s.length(); ++i) {
    if (s.vectors[i].size() != f.dim()) throw FormError("vector length does not match form");
    if (!(s.scalars[i] * eval_q(f, s.vectors[i])).is_one())
      throw FormError("factor " + std::to_string(i + 1) + " is not an orthogonal transvection");
    for (std::size_t j = 0; j < i; ++j)
      if (!eval_B(f, s.vectors[i], s.vectors[j]).is_zero()) throw FormError("factor vectors are not orthogonal");
  }
  if (!s.vectors.empty() && rank_of(f.field, s.vectors) != s.length())
    throw FormError("factor vectors are dependent");
}

ConjugacyVerdict with_witness(ConjugacyVerdict v, const EnumeratedGroup* group, const Matrix& m1, const Matrix& m2) {
  if (v.answer != Answer::Yes || !group) return v;
  v.witness = find_conjugator(*group, m1, m2);
  if (!v.witness) throw FormError("classifier says conjugate but the group has no conjugator");
  return v;
}

QuadraticForm fixed_space_form(const std::vector<Elem>& diag, const RadicalInvolution& r) {
  const Field k = diag.empty() ? Field::gf2m(1) : diag[0].field();
  const QuadraticForm rad{k, {}, diag};
  QuadraticForm out{k, {}, std::vector<Elem>(r.length(), Elem::zero(k))};
  for (const auto& v : r.fixed) out.diag.push_back(eval_q(rad, v));
  return out;
}

}  // namespace

std::string conjugacy_word(Answer a) {
  switch (a) {
    case Answer::Yes:
      return "conjugate";
    case Answer::No:
      return "not-conjugate";
    case Answer::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

std::optional<Matrix> find_conjugator(const EnumeratedGroup& g, const Matrix& m1, const Matrix& m2) {
  const Packed a = g.codec.pack(m1), b = g.codec.pack(m2);
  for (const auto& x : g.elements)
    if (g.codec.multiply(x, a) == g.codec.multiply(b, x)) return g.codec.unpack(x);
  return std::nullopt;
}

ConjugacyVerdict conjugate_diagonal(const QuadraticForm& f, const DiagonalInvolution& s1,
                                    const DiagonalInvolution& s2, const SearchBounds& bounds,
                                    const EnumeratedGroup* group) {
  check_reduced_orthogonal(f, s1);
  check_reduced_orthogonal(f, s2);
  if (s1.length() != s2.length()) return {Answer::No, std::nullopt, "length"};
  if (s1.length() == 0) return {Answer::Yes, Matrix::identity(f.field, f.dim()), "identity"};
  const auto c = congruent(norms(f, s1.vectors), norms(f, s2.vectors), bounds);
  ConjugacyVerdict v{c.answer, std::nullopt, "congruence of norms: " + c.reason};
  return with_witness(v, group, to_matrix(f, s1), to_matrix(f, s2));
}

ConjugacyVerdict conjugate_symplectic_diagonal(const DiagonalInvolution& s1, const DiagonalInvolution& s2,
                                               const SearchBounds& bounds) {
  if (s1.length() != s2.length()) return {Answer::No, std::nullopt, "length"};
  if (s1.length() == 0) return {Answer::Yes, std::nullopt, "identity"};
  const auto c = congruent(s1.scalars, s2.scalars, bounds);
  return {c.answer, std::nullopt, "congruence of scalars: " + c.reason};
}

ConjugacyVerdict conjugate_null(const QuadraticForm& f, const NullInvolution& n1, const NullInvolution& n2,
                                const EnumeratedGroup* group) {
  if (n1.length() != n2.length()) return {Answer::No, std::nullopt, "length"};
  return with_witness({Answer::Yes, std::nullopt, "equal length"}, group, to_matrix(f, n1), to_matrix(f, n2));
}

ConjugacyVerdict conjugate_radical(const std::vector<Elem>& diag, const RadicalInvolution& r1,
                                   const RadicalInvolution& r2, const SearchBounds& bounds) {
  if (r1.length() != r2.length()) return {Answer::No, std::nullopt, "length"};
  if (diag.empty()) return {Answer::Yes, std::nullopt, "equal length"};
  const auto v = is_isometric(fixed_space_form(diag, r1), fixed_space_form(diag, r2), bounds);
  return {v.answer, std::nullopt, "fixed-space norms: " + v.reason};
}

bool check_block_conjugacy_witness(const QuadraticForm& f, const BlockInvolution& b1, const BlockInvolution& b2,
                                   const Matrix& phi, const Matrix& X, const Matrix& delta) {
  if (!block_is_orthogonal(f, phi, X, delta)) throw FormError("witness is not orthogonal");
  const bool conditions = phi * b1.tau == b2.tau * phi && delta * b1.rho == b2.rho * delta &&
                          X * b1.tau + b2.rho * X == b2.Y * phi + delta * b1.Y;
  const Matrix w = to_matrix(BlockInvolution{phi, X, delta});
  const bool full = w * to_matrix(b1) == to_matrix(b2) * w;
  if (conditions != full) throw FormError("block conditions disagree with the matrix identity");
  return conditions;
}

ConjugacyVerdict search_block_conjugator(const QuadraticForm& f, const BlockInvolution& b1,
                                         const BlockInvolution& b2, const EnumeratedGroup& group) {
  if (!(group.form == f) || group.mode != GroupMode::Orthogonal)
    throw FormError("search needs the enumerated orthogonal group of the form");
  if (defect(f) == 0 && (!b1.rho.is_identity() || !b2.rho.is_identity()))
    throw FormError("anisotropic radical forces rho = id");
  const auto w = find_conjugator(group, to_matrix(b1), to_matrix(b2));
  if (!w) return {Answer::No, std::nullopt, "exhaustive search"};
  const auto t = split_block(f, *w);
  if (!check_block_conjugacy_witness(f, b1, b2, t.tau, t.Y, t.rho))
    throw FormError("search returned an invalid witness");
  return {Answer::Yes, w, "exhaustive search"};
}

std::string to_string(InvolutionKind k) {
  switch (k) {
    case InvolutionKind::Diagonal:
      return "diagonal";
    case InvolutionKind::Null:
      return "null";
    case InvolutionKind::Radical:
      return "radical";
    case InvolutionKind::Block:
      return "block";
  }
  return "?";
}

InvolutionProfile profile_involution(const QuadraticForm& f, const Matrix& m) {
  if (!is_involution(m)) throw FormError("not an involution");
  if (!is_isometry(f, m)) throw FormError("matrix is not orthogonal");
  const Matrix empty(f.field, 0, 0);
  InvolutionProfile p{m, InvolutionKind::Block, residual_space(m).size(), {}, {}, {empty, empty, empty},
                      std::nullopt, 0};
  if (f.s() == 0) {
    p.reduced = reduced_factorization(f, m);
    p.kind = p.reduced.type == SymplecticType::Diagonal ? InvolutionKind::Diagonal : InvolutionKind::Null;
    return p;
  }
  p.block = split_block(f, m);
  p.radical = decompose_radical(f.diag, p.block.rho);
  if (f.r() == 0) {
    p.kind = InvolutionKind::Radical;
    return p;
  }
  if (!p.block.tau.is_identity()) {
    const QuadraticForm fb = nonsingular_part(f);
    p.tau_type = classify_symplectic_involution(fb, p.block.tau);
    p.tau_residual = residual_space(p.block.tau).size();
  }
  return p;
}

ConjugacyVerdict compare_profiles(const QuadraticForm& f, const InvolutionProfile& p1, const InvolutionProfile& p2,
                                  const SearchBounds& bounds, const EnumeratedGroup* group, bool want_witness) {
  const EnumeratedGroup* witness_group = want_witness ? group : nullptr;
  if (p1.residual != p2.residual) return {Answer::No, std::nullopt, "residual dimension"};
  if (p1.kind != p2.kind) return {Answer::No, std::nullopt, "involution type"};
  switch (p1.kind) {
    case InvolutionKind::Diagonal:
      return conjugate_diagonal(f, p1.reduced.diagonal, p2.reduced.diagonal, bounds, witness_group);
    case InvolutionKind::Null:
      return conjugate_null(f, p1.reduced.null, p2.reduced.null, witness_group);
    case InvolutionKind::Radical:
      return with_witness(conjugate_radical(f.diag, p1.radical, p2.radical, bounds), witness_group, p1.matrix,
                          p2.matrix);
    case InvolutionKind::Block:
      break;
  }
  if (p1.tau_type != p2.tau_type || p1.tau_residual != p2.tau_residual)
    return {Answer::No, std::nullopt, "symplectic part"};
  const auto rad = conjugate_radical(f.diag, p1.radical, p2.radical, bounds);
  if (rad.answer != Answer::Yes) return {rad.answer, std::nullopt, "radical part: " + rad.reason};
  if (f.field.is_finite() && defect(f) == 0)
    return with_witness({Answer::Yes, std::nullopt, "anisotropic radical: symplectic class"}, witness_group,
                        p1.matrix, p2.matrix);
  if (!group) return {Answer::Inconclusive, std::nullopt, "no decision procedure without an enumerated group"};
  return search_block_conjugator(f, p1.block, p2.block, *group);
}

ConjugacyVerdict conjugate_involutions(const QuadraticForm& f, const Matrix& m1, const Matrix& m2,
                                       const SearchBounds& bounds, const EnumeratedGroup* group) {
  return compare_profiles(f, profile_involution(f, m1), profile_involution(f, m2), bounds, group);
}

std::vector<std::vector<std::size_t>> classifier_partition(const EnumeratedGroup& group,
                                                           const std::vector<Matrix>& invs) {
  const QuadraticForm& f = group.form;
  std::vector<InvolutionProfile> profiles;
  for (const auto& m : invs) profiles.push_back(profile_involution(f, m));
  std::vector<std::pair<Packed, Packed>> conj;
  for (const auto& m : group.generators) conj.emplace_back(group.codec.pack(m), group.codec.pack(*m.inverse()));
  // Conjugacy orbit of a class representative, for block comparisons that
  // pass every invariant.
  std::vector<std::optional<std::unordered_set<Packed, PackedHash>>> orbit_of;
  auto orbit = [&](std::size_t c, const Matrix& rep) -> const std::unordered_set<Packed, PackedHash>& {
    if (!orbit_of[c]) {
      std::unordered_set<Packed, PackedHash> seen{group.codec.pack(rep)};
      std::vector<Packed> frontier(seen.begin(), seen.end());
      while (!frontier.empty()) {
        std::vector<Packed> next;
        for (const auto& x : frontier)
          for (const auto& [a, ainv] : conj) {
            const Packed y = group.codec.multiply(group.codec.multiply(a, x), ainv);
            if (seen.insert(y).second) next.push_back(y);
          }
        frontier = std::move(next);
      }
      orbit_of[c] = std::move(seen);
    }
    return *orbit_of[c];
  };

  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < invs.size(); ++i) {
    bool placed = false;
    for (std::size_t c = 0; c < classes.size() && !placed; ++c) {
      const auto& rep = profiles[classes[c][0]];
      ConjugacyVerdict v;
      if (rep.kind == InvolutionKind::Block && profiles[i].kind == InvolutionKind::Block) {
        v = compare_profiles(f, rep, profiles[i], {}, nullptr, false);
        if (v.answer == Answer::Inconclusive)
          v.answer = orbit(c, rep.matrix).count(group.codec.pack(invs[i])) ? Answer::Yes : Answer::No;
      } else {
        v = compare_profiles(f, rep, profiles[i], {}, &group, false);
      }
      if (v.answer == Answer::Inconclusive) throw FormError("inconclusive comparison: " + v.reason);
      if (v.answer == Answer::Yes) {
        classes[c].push_back(i);
        placed = true;
      }
    }
    if (!placed) {
      classes.push_back({i});
      orbit_of.emplace_back();
    }
  }
  return canonical_partition(classes);
}

}  // namespace qf2
