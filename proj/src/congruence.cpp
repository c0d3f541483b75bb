#include "qf2/congruence.hpp"

#include <functional>

namespace qf2 {

namespace {

Field field_of(std::span<const Elem> a, std::span<const Elem> b) {
  if (a.empty() && b.empty()) throw FormError("empty bilinear forms");
  const Field f = a.empty() ? b[0].field() : a[0].field();
  for (const auto& x : a)
    if (x.field() != f) throw FormError("mixed fields");
  for (const auto& x : b)
    if (x.field() != f) throw FormError("mixed fields");
  return f;
}

Matrix permutation(Field k, const std::vector<std::size_t>& cols) {
  Matrix p(k, cols.size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) p(cols[j], j) = Elem::one(k);
  return p;
}

// Decides two all-nonzero forms of the same length.
CongruenceVerdict congruent_nonzero(Field k, const std::vector<Elem>& a, const std::vector<Elem>& b,
                                    const SearchBounds& bounds) {
  const std::size_t l = a.size();
  if (k.is_finite()) {
    std::vector<Elem> d;
    for (std::size_t i = 0; i < l; ++i) d.push_back(*sqrt(b[i] / a[i]));
    return {Answer::Yes, Matrix::diagonal(k, d), "finite field, equal rank"};
  }
  if (!same_k2_span(k, a, b)) return {Answer::No, std::nullopt, "k2 span of entries"};
  Elem det = Elem::one(k);
  for (std::size_t i = 0; i < l; ++i) det *= b[i] / a[i];
  if (!sqrt(det)) return {Answer::No, std::nullopt, "determinant class"};

  // Column j of a witness satisfies sum_i A_ij^2 a_i = b_j, a k-linear
  // condition on the k2-coordinates: C A_j = d_j.
  const auto coords = k2_coordinate_vectors(k, [&] {
    std::vector<Elem> all = a;
    all.insert(all.end(), b.begin(), b.end());
    return all;
  }());
  const std::size_t rows = coords[0].size();
  Matrix c(k, rows, l);
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t s = 0; s < rows; ++s) c(s, i) = coords[i][s];
  std::vector<Vector> particular;
  for (std::size_t j = 0; j < l; ++j) particular.push_back(*solve(c, coords[l + j]));
  const auto free = kernel(c);

  auto finish = [&](const std::vector<Vector>& cols, const char* why) -> CongruenceVerdict {
    const Matrix A = Matrix::from_columns(k, l, cols);
    if (check_witness(a, b, A)) return {Answer::Yes, A, why};
    return {Answer::No, std::nullopt, "diagonal entries force the matrix; off-diagonal entries fail"};
  };
  if (free.empty()) return finish(particular, "k2-independent entries force the witness");

  // Bounded search: column j = particular_j + sum lambda_t free_t, chosen
  // column by column subject to B(A_j, A_i) = 0 for i < j.
  const auto polys = polys_up_to(k.vars().size(), bounds.degree, std::size_t{1} << 12);
  std::uint64_t tried = 0;
  bool exhausted = false;
  std::vector<Vector> cols;
  auto pairing = [&](const Vector& x, const Vector& y) {
    Elem s = Elem::zero(k);
    for (std::size_t i = 0; i < l; ++i) s += a[i] * x[i] * y[i];
    return s;
  };
  std::function<bool(std::size_t)> extend = [&](std::size_t j) -> bool {
    if (j == l) return Matrix::from_columns(k, l, cols).inverse().has_value();
    std::vector<std::size_t> idx(free.size(), 0);
    while (true) {
      if (++tried > bounds.budget) {
        exhausted = true;
        return false;
      }
      Vector col = particular[j];
      for (std::size_t t = 0; t < free.size(); ++t)
        col = col + Elem::from_fraction(k, polys[idx[t]]) * free[t];
      bool ok = true;
      for (const auto& prev : cols) ok = ok && pairing(prev, col).is_zero();
      if (ok) {
        cols.push_back(col);
        if (extend(j + 1)) return true;
        cols.pop_back();
        if (exhausted) return false;
      }
      std::size_t i = 0;
      while (i < idx.size() && ++idx[i] == polys.size()) idx[i++] = 0;
      if (i == idx.size()) return false;
    }
  };
  if (extend(0)) return {Answer::Yes, Matrix::from_columns(k, l, cols), "bounded search"};
  return {Answer::Inconclusive, std::nullopt, "no witness within degree bound " + std::to_string(bounds.degree)};
}

}  // namespace

Matrix congruence_product(std::span<const Elem> a, const Matrix& A) {
  if (A.rows() != a.size() || A.cols() != a.size()) throw FormError("witness size does not match form");
  const Field k = A.field();
  return A.transpose() * Matrix::diagonal(k, a) * A;
}

bool check_witness(std::span<const Elem> a, std::span<const Elem> b, const Matrix& A) {
  if (a.size() != b.size() || A.rows() != a.size() || A.cols() != a.size())
    throw FormError("witness size does not match forms");
  if (!A.inverse()) return false;
  return congruence_product(a, A) == Matrix::diagonal(A.field(), b);
}

CongruenceVerdict congruent(std::span<const Elem> a, std::span<const Elem> b, const SearchBounds& bounds) {
  const Field k = field_of(a, b);
  if (a.size() != b.size()) return {Answer::No, std::nullopt, "length"};
  std::vector<std::size_t> nz_a, z_a, nz_b, z_b;
  for (std::size_t i = 0; i < a.size(); ++i) (a[i].is_zero() ? z_a : nz_a).push_back(i);
  for (std::size_t i = 0; i < b.size(); ++i) (b[i].is_zero() ? z_b : nz_b).push_back(i);
  if (nz_a.size() != nz_b.size()) return {Answer::No, std::nullopt, "rank"};
  std::vector<Elem> ra, rb;
  for (auto i : nz_a) ra.push_back(a[i]);
  for (auto i : nz_b) rb.push_back(b[i]);
  CongruenceVerdict v{Answer::Yes, Matrix::identity(k, 0), "rank"};
  if (!ra.empty()) v = congruent_nonzero(k, ra, rb, bounds);
  if (v.answer != Answer::Yes || z_a.empty()) return v;
  // Reorder both to (nonzero | zero), glue with the identity on the radical.
  std::vector<std::size_t> pa = nz_a, pb = nz_b;
  pa.insert(pa.end(), z_a.begin(), z_a.end());
  pb.insert(pb.end(), z_b.begin(), z_b.end());
  Matrix inner = Matrix::identity(k, a.size());
  inner.set_block(0, 0, *v.witness);
  const Matrix A = permutation(k, pa) * inner * *permutation(k, pb).inverse();
  if (!check_witness(a, b, A)) throw FormError("assembled congruence witness failed");
  return {Answer::Yes, A, v.reason};
}

Matrix transform_inverse_norms(const Matrix& A, std::span<const Elem> a, std::span<const Elem> b) {
  const Field k = A.field();
  std::vector<Elem> ia, ib;
  for (const auto& x : a) {
    if (x.is_zero()) throw FormError("zero entry");
    ia.push_back(x.inverse());
  }
  for (const auto& x : b) {
    if (x.is_zero()) throw FormError("zero entry");
    ib.push_back(x.inverse());
  }
  if (!check_witness(ia, ib, A)) throw FormError("input is not a witness for the inverse norms");
  const Matrix C = Matrix::diagonal(k, ia) * A * Matrix::diagonal(k, b);
  if (!check_witness(a, b, C)) throw FormError("transformed witness failed");
  return C;
}

}  // namespace qf2
