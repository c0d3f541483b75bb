#include "qf2/involutions.hpp"

#include <algorithm>

namespace qf2 {

namespace {

// Row vector c -> B(w, e_c).
Vector b_row(const QuadraticForm& f, const Vector& w) {
  Vector row = zero_vector(f.field, f.dim());
  for (std::size_t i = 0; i < f.r(); ++i) {
    row[2 * i] = w[2 * i + 1];
    row[2 * i + 1] = w[2 * i];
  }
  return row;
}

// m + x B(y, .)
void add_rank_one(const QuadraticForm& f, Matrix& m, const Vector& x, const Vector& y, const Elem& c) {
  const Vector row = b_row(f, y);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!row[j].is_zero()) m(i, j) += c * x[i] * row[j];
  }
}

void check_length(const QuadraticForm& f, const Vector& v) {
  if (v.size() != f.dim()) throw FormError("vector length does not match form");
  for (const auto& x : v)
    if (x.field() != f.field) throw FormError("vector over a different field");
}

void check_square(const QuadraticForm& f, const Matrix& m) {
  if (m.rows() != f.dim() || m.cols() != f.dim()) throw FormError("matrix size does not match form");
  if (m.field() != f.field) throw FormError("matrix over a different field");
}

bool is_involution(const Matrix& m) { return (m * m).is_identity() && !m.is_identity(); }

Matrix plus_identity(const Matrix& m) { return m + Matrix::identity(m.field(), m.rows()); }

Matrix embed(const QuadraticForm& f, const Matrix& tau, const Matrix& Y, const Matrix& rho) {
  const std::size_t n = f.dim(), b = 2 * f.r();
  Matrix m(f.field, n, n);
  m.set_block(0, 0, tau);
  m.set_block(b, 0, Y);
  m.set_block(b, b, rho);
  return m;
}

Vector head(const Vector& v, std::size_t n) { return Vector(v.begin(), v.begin() + std::ptrdiff_t(n)); }
Vector tail(const Vector& v, std::size_t n) { return Vector(v.begin() + std::ptrdiff_t(n), v.end()); }

Vector concat(const Vector& a, const Vector& b) {
  Vector out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Vectors x with B(x, c) = 0 for every c in cs, restricted to V_B coordinates.
std::vector<Vector> b_complement(const QuadraticForm& f, const std::vector<Vector>& cs) {
  if (cs.empty()) {
    std::vector<Vector> all;
    for (std::size_t i = 0; i < f.dim(); ++i) all.push_back(unit_vector(f.field, f.dim(), i));
    return all;
  }
  std::vector<Vector> rows;
  for (const auto& c : cs) rows.push_back(b_row(f, c));
  return kernel(Matrix::from_rows(f.field, f.dim(), rows));
}

DiagonalInvolution diagonal_factors(const QuadraticForm& f, const Matrix& m) {
  const Field k = f.field;
  const std::size_t n = f.dim();
  const Matrix N = plus_identity(m);
  auto beta = [&](const Vector& v, const Vector& w) { return eval_B(f, v, N * w); };

  Matrix bm(k, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) bm(i, j) = beta(unit_vector(k, n, i), unit_vector(k, n, j));
  std::vector<Vector> span = kernel(bm);
  std::vector<Vector> work;
  for (std::size_t i = 0; i < n; ++i) {
    const Vector e = unit_vector(k, n, i);
    if (in_span(k, span, e)) continue;
    span.push_back(e);
    work.push_back(e);
  }
  if (work.size() != N.rank()) throw FormError("residual space meets the radical");

  std::vector<Vector> vs;
  std::vector<Elem> ds;
  while (!work.empty()) {
    std::size_t idx = work.size();
    for (std::size_t i = 0; i < work.size() && idx == work.size(); ++i)
      if (!beta(work[i], work[i]).is_zero()) idx = i;
    std::vector<Vector> next;
    if (idx < work.size()) {
      const Vector v = work[idx];
      const Elem d = beta(v, v);
      vs.push_back(v);
      ds.push_back(d);
      for (std::size_t i = 0; i < work.size(); ++i)
        if (i != idx) next.push_back(work[i] + (beta(work[i], v) / d) * v);
    } else {
      if (vs.empty()) throw FormError("involution is of hyperbolic type");
      Vector w1, w2;
      for (std::size_t i = 0; i < work.size() && w1.empty(); ++i)
        for (std::size_t j = i + 1; j < work.size(); ++j) {
          const Elem c = beta(work[i], work[j]);
          if (c.is_zero()) continue;
          w1 = work[i];
          w2 = c.inverse() * work[j];
          break;
        }
      if (w1.empty()) throw FormError("residual space meets the radical");
      const Vector v = vs.back();
      const Elem d = ds.back();
      vs.back() = v + w1;
      vs.push_back(v + d * w2);
      ds.push_back(d);
      vs.push_back(v + w1 + d * w2);
      ds.push_back(d);
      for (const auto& x : work) next.push_back(x + beta(x, w2) * w1 + beta(x, w1) * w2);
    }
    work = independent_subset(k, next);
  }

  DiagonalInvolution out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    out.vectors.push_back(N * vs[i]);
    out.scalars.push_back(ds[i].inverse());
  }
  if (!(to_matrix(f, out) == m)) throw FormError("diagonal factorization failed to recompose");
  return out;
}

NullInvolution null_factors(const QuadraticForm& f, const Matrix& m) {
  const Field k = f.field;
  const std::size_t n = f.dim();
  const Matrix N = plus_identity(m);
  auto beta = [&](const Vector& v, const Vector& w) { return eval_B(f, v, N * w); };
  std::vector<Vector> work;
  for (std::size_t i = 0; i < n; ++i) work.push_back(unit_vector(k, n, i));
  NullInvolution out;
  while (true) {
    Vector f1, f2;
    for (std::size_t i = 0; i < work.size() && f1.empty(); ++i)
      for (std::size_t j = i + 1; j < work.size(); ++j) {
        const Elem c = beta(work[i], work[j]);
        if (c.is_zero()) continue;
        f1 = work[i];
        f2 = c.inverse() * work[j];
        break;
      }
    if (f1.empty()) break;
    const Vector e1 = N * f2, e2 = N * f1;
    f1 = f1 + eval_q(f, f1) * e1;
    f2 = f2 + eval_q(f, f2) * e2;
    f2 = f2 + eval_B(f, f1, f2) * e1;
    out.blocks.push_back({e1, f2, e2, f1});
    std::vector<Vector> next;
    for (const auto& x : work)
      next.push_back(x + eval_B(f, x, f1) * e1 + eval_B(f, x, e1) * f1 + eval_B(f, x, f2) * e2 +
                     eval_B(f, x, e2) * f2);
    work = independent_subset(k, next);
  }
  if (!(to_matrix(f, out) == m)) throw FormError("null factorization failed to recompose");
  return out;
}

void check_null_block(const QuadraticForm& f, const NullBlock& b) {
  for (const auto* v : {&b.e1, &b.f1, &b.e2, &b.f2}) {
    check_length(f, *v);
    if (!eval_q(f, *v).is_zero()) throw FormError("null block vector is not singular");
  }
  const bool ok = eval_B(f, b.e1, b.f1).is_one() && eval_B(f, b.e2, b.f2).is_one() &&
                  eval_B(f, b.e1, b.e2).is_zero() && eval_B(f, b.e1, b.f2).is_zero() &&
                  eval_B(f, b.f1, b.e2).is_zero() && eval_B(f, b.f1, b.f2).is_zero();
  if (!ok) throw FormError("null block is not two orthogonal hyperbolic pairs");
}

}  // namespace

QuadraticForm nonsingular_part(const QuadraticForm& f) { return {f.field, f.pairs, {}}; }
QuadraticForm radical_part(const QuadraticForm& f) { return {f.field, {}, f.diag}; }

Matrix transvection_matrix(const QuadraticForm& f, const Vector& u, const Elem& a) {
  check_length(f, u);
  Matrix m = Matrix::identity(f.field, f.dim());
  add_rank_one(f, m, u, u, a);
  return m;
}

Matrix orthogonal_transvection(const QuadraticForm& f, const Vector& u) {
  const Elem q = eval_q(f, u);
  if (q.is_zero()) throw FormError("singular vector has no orthogonal transvection");
  return transvection_matrix(f, u, q.inverse());
}

bool is_orthogonal_transvection(const QuadraticForm& f, const Transvection& t) {
  check_length(f, t.u);
  if (t.a.is_zero() || in_radical(f, t.u)) return true;
  return (t.a * eval_q(f, t.u)).is_one();
}

Matrix to_matrix(const QuadraticForm& f, const DiagonalInvolution& d) {
  if (d.vectors.size() != d.scalars.size()) throw FormError("vectors and scalars differ in length");
  Matrix m = Matrix::identity(f.field, f.dim());
  for (std::size_t i = 0; i < d.length(); ++i) m = transvection_matrix(f, d.vectors[i], d.scalars[i]) * m;
  return m;
}

Matrix null_block_matrix(const QuadraticForm& f, const NullBlock& b) {
  check_null_block(f, b);
  Matrix m = Matrix::identity(f.field, f.dim());
  add_rank_one(f, m, b.e2, b.e1, Elem::one(f.field));
  add_rank_one(f, m, b.e1, b.e2, Elem::one(f.field));
  return m;
}

Matrix to_matrix(const QuadraticForm& f, const NullInvolution& n) {
  for (std::size_t i = 0; i < n.blocks.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      for (const auto* x : {&n.blocks[i].e1, &n.blocks[i].f1, &n.blocks[i].e2, &n.blocks[i].f2})
        for (const auto* y : {&n.blocks[j].e1, &n.blocks[j].f1, &n.blocks[j].e2, &n.blocks[j].f2})
          if (!eval_B(f, *x, *y).is_zero()) throw FormError("null blocks are not orthogonal");
  Matrix m = Matrix::identity(f.field, f.dim());
  for (const auto& b : n.blocks) m = null_block_matrix(f, b) * m;
  return m;
}

std::vector<Matrix> basic_radical_factors(Field k, const RadicalInvolution& r) {
  std::vector<Vector> cols;
  for (const auto& [g, h] : r.pairs) {
    cols.push_back(g);
    cols.push_back(h);
  }
  cols.insert(cols.end(), r.fixed.begin(), r.fixed.end());
  const std::size_t s = cols.empty() ? 0 : cols[0].size();
  if (cols.size() != s) throw FormError("radical data is not a basis");
  const Matrix P = Matrix::from_columns(k, s, cols);
  const auto Pinv = P.inverse();
  if (!Pinv) throw FormError("radical data is not a basis");
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    Matrix S = Matrix::identity(k, s);
    S(2 * i, 2 * i) = S(2 * i + 1, 2 * i + 1) = Elem::zero(k);
    S(2 * i, 2 * i + 1) = S(2 * i + 1, 2 * i) = Elem::one(k);
    out.push_back(P * S * *Pinv);
  }
  return out;
}

Matrix to_matrix(const QuadraticForm& f, const RadicalInvolution& r) {
  const std::size_t s = f.s();
  Matrix rho = Matrix::identity(f.field, s);
  if (!r.pairs.empty() || !r.fixed.empty())
    for (const auto& b : basic_radical_factors(f.field, r)) rho = b * rho;
  Matrix m = Matrix::identity(f.field, f.dim());
  m.set_block(2 * f.r(), 2 * f.r(), rho);
  return m;
}

Matrix to_matrix(const BlockInvolution& b) {
  const std::size_t nb = b.tau.rows(), s = b.rho.rows();
  if (b.tau.cols() != nb || b.rho.cols() != s || b.Y.rows() != s || b.Y.cols() != nb)
    throw FormError("block shapes do not match");
  Matrix m(b.tau.field(), nb + s, nb + s);
  m.set_block(0, 0, b.tau);
  m.set_block(nb, 0, b.Y);
  m.set_block(nb, nb, b.rho);
  return m;
}

BlockInvolution split_block(const QuadraticForm& f, const Matrix& m) {
  check_square(f, m);
  const std::size_t nb = 2 * f.r(), s = f.s();
  if (!m.block(0, nb, nb, s).is_zero()) throw FormError("matrix does not preserve the radical");
  return {m.block(0, 0, nb, nb), m.block(nb, 0, s, nb), m.block(nb, nb, s, s)};
}

std::vector<Vector> residual_space(const Matrix& m) {
  const Matrix N = plus_identity(m);
  std::vector<Vector> cols;
  for (std::size_t j = 0; j < N.cols(); ++j) cols.push_back(N.column(j));
  return row_reduce(m.field(), cols);
}

std::string to_string(SymplecticType t) { return t == SymplecticType::Hyperbolic ? "hyperbolic" : "diagonal"; }

SymplecticType classify_symplectic_involution(const QuadraticForm& f, const Matrix& m) {
  check_square(f, m);
  if (!is_involution(m)) throw FormError("not an involution");
  if (!preserves_B(f, m)) throw FormError("matrix does not preserve B");
  const Matrix N = plus_identity(m);
  for (std::size_t j = 0; j < f.dim(); ++j) {
    const Vector e = unit_vector(f.field, f.dim(), j);
    if (!eval_B(f, e, N * e).is_zero()) return SymplecticType::Diagonal;
  }
  return SymplecticType::Hyperbolic;
}

DiagonalInvolution symplectic_diagonal_factorization(const QuadraticForm& f, const Matrix& m) {
  if (classify_symplectic_involution(f, m) != SymplecticType::Diagonal)
    throw FormError("involution is of hyperbolic type");
  return diagonal_factors(f, m);
}

ReducedFactorization reduced_factorization(const QuadraticForm& f, const Matrix& m) {
  check_square(f, m);
  if (!is_involution(m)) throw FormError("not an involution");
  if (!is_isometry(f, m)) throw FormError("matrix is not orthogonal");
  ReducedFactorization out{classify_symplectic_involution(f, m), {}, {}};
  if (out.type == SymplecticType::Diagonal) {
    out.diagonal = diagonal_factors(f, m);
    for (std::size_t i = 0; i < out.diagonal.length(); ++i)
      if (!is_orthogonal_transvection(f, {out.diagonal.vectors[i], out.diagonal.scalars[i]}))
        throw FormError("factor is not an orthogonal transvection");
  } else {
    out.null = null_factors(f, m);
  }
  return out;
}

bool involution_compatible(const QuadraticForm& f, const std::vector<Vector>& U, const std::vector<Elem>& a,
                           const std::vector<Vector>& X, const std::vector<Elem>& b) {
  if (U.size() != a.size() || X.size() != b.size()) throw FormError("vectors and scalars differ in length");
  if (U.size() != X.size()) return false;
  const std::size_t l = U.size();
  if (l == 0) return true;
  const Field k = f.field;
  for (const auto& v : U) check_length(f, v);
  for (const auto& v : X) check_length(f, v);
  if (rank_of(k, U) != l || rank_of(k, X) != l) return false;
  std::vector<Vector> both = U;
  both.insert(both.end(), X.begin(), X.end());
  if (rank_of(k, both) != l) return false;
  const Matrix xm = Matrix::from_columns(k, f.dim(), X);
  Matrix A(k, l, l);
  for (std::size_t i = 0; i < l; ++i) {
    const Vector c = *solve(xm, U[i]);
    for (std::size_t j = 0; j < l; ++j) A(i, j) = c[j];
  }
  return A.transpose() * Matrix::diagonal(k, a) * A == Matrix::diagonal(k, b);
}

bool equal_diagonal(const QuadraticForm& f, const DiagonalInvolution& s1, const DiagonalInvolution& s2) {
  return involution_compatible(f, s1.vectors, s1.scalars, s2.vectors, s2.scalars);
}

DiagonalInvolution conjugate_by(const QuadraticForm& f, const Matrix& phi, const DiagonalInvolution& s) {
  check_square(f, phi);
  if (!is_isometry(f, phi)) throw FormError("conjugator is not an isometry");
  DiagonalInvolution out{{}, s.scalars};
  for (const auto& u : s.vectors) out.vectors.push_back(phi * u);
  return out;
}

RadicalInvolution decompose_radical(const std::vector<Elem>& diag, const Matrix& rho) {
  const std::size_t s = diag.size();
  if (rho.rows() != s || rho.cols() != s) throw FormError("radical map has the wrong size");
  const Field k = rho.field();
  const QuadraticForm rad{k, {}, diag};
  if (!(rho * rho).is_identity()) throw FormError("radical map is not an involution");
  if (!is_isometry(rad, rho)) throw FormError("radical map does not preserve q");
  const Matrix N = plus_identity(rho);

  std::vector<Vector> candidates = row_reduce(k, defect_subspace(rad));
  for (std::size_t i = 0; i < s; ++i) candidates.push_back(unit_vector(k, s, i));
  RadicalInvolution out;
  std::vector<Vector> image;
  for (const auto& g : candidates) {
    const Vector ng = N * g;
    if (is_zero(ng) || (!image.empty() && in_span(k, image, ng))) continue;
    image.push_back(ng);
    out.pairs.push_back({g, rho * g});
  }
  std::vector<Vector> span = image;
  for (const auto& x : kernel(N)) {
    if (!span.empty() && in_span(k, span, x)) continue;
    span.push_back(x);
    out.fixed.push_back(x);
  }
  auto first_index = [](const Vector& v) {
    return std::size_t(std::find_if(v.begin(), v.end(), [](const Elem& x) { return !x.is_zero(); }) - v.begin());
  };
  std::stable_sort(out.pairs.begin(), out.pairs.end(),
                   [&](const auto& x, const auto& y) { return first_index(x.first) < first_index(y.first); });
  QuadraticForm full{k, {}, diag};
  if (!(to_matrix(full, out) == rho)) throw FormError("radical decomposition failed to recompose");
  return out;
}

std::vector<Elem> quadratic_signature(const std::vector<Elem>& diag, const RadicalInvolution& r) {
  std::vector<Elem> sig;
  for (const auto& [g, h] : r.pairs) {
    if (g.size() != diag.size()) throw FormError("radical vector has the wrong length");
    Elem q = Elem::zero(g[0].field());
    for (std::size_t i = 0; i < g.size(); ++i) q += diag[i] * g[i] * g[i];
    sig.push_back(q);
  }
  return sig;
}

bool block_is_involution(const BlockInvolution& b) {
  const std::size_t nb = b.tau.rows(), s = b.rho.rows();
  if (b.tau.cols() != nb || b.rho.cols() != s || b.Y.rows() != s || b.Y.cols() != nb)
    throw FormError("block shapes do not match");
  if (!(b.tau * b.tau).is_identity() || !(b.rho * b.rho).is_identity()) return false;
  return b.Y == b.rho * b.Y * b.tau;
}

bool block_is_orthogonal(const QuadraticForm& f, const Matrix& phi, const Matrix& X, const Matrix& delta) {
  const std::size_t nb = 2 * f.r(), s = f.s();
  if (phi.rows() != nb || phi.cols() != nb || X.rows() != s || X.cols() != nb || delta.rows() != s ||
      delta.cols() != s)
    throw FormError("block shapes do not match form");
  const QuadraticForm fb = nonsingular_part(f), fr = radical_part(f);
  if (!phi.inverse() || !preserves_B(fb, phi)) return false;
  if (!is_isometry(fr, delta)) return false;
  for (std::size_t j = 0; j < nb; ++j) {
    const Vector w = unit_vector(f.field, nb, j);
    if (!(eval_q(fb, w) + eval_q(fr, X * w) == eval_q(fb, phi * w))) return false;
  }
  return true;
}

NormalizedBlock normalize_block(const QuadraticForm& f, const BlockInvolution& b) {
  const std::size_t nb = 2 * f.r(), s = f.s();
  if (!block_is_involution(b) || !block_is_orthogonal(f, b.tau, b.Y, b.rho))
    throw FormError("not an orthogonal block involution");
  const Field k = f.field;
  const QuadraticForm fb = nonsingular_part(f), fr = radical_part(f);
  NormalizedBlock out{{}, b.Y, b.rho};
  if (!b.tau.is_identity()) {
    if (classify_symplectic_involution(fb, b.tau) != SymplecticType::Diagonal)
      throw FormError("symplectic part is of hyperbolic type");
    const auto dec = diagonal_factors(fb, b.tau);
    const std::size_t l = dec.length();
    std::vector<Vector> rows;
    for (const auto& u : dec.vectors) rows.push_back(b_row(fb, u));
    const Matrix pairing = Matrix::from_rows(k, nb, rows);
    for (std::size_t i = 0; i < l; ++i) {
      const auto v = solve(pairing, unit_vector(k, l, i));
      if (!v) throw FormError("factor vectors are dependent");
      const Vector yv = b.Y * *v;
      out.first.vectors.push_back(concat(dec.vectors[i], dec.scalars[i].inverse() * yv));
      out.first.scalars.push_back(dec.scalars[i]);
      const Vector row = b_row(fb, dec.vectors[i]);
      for (std::size_t r = 0; r < s; ++r)
        for (std::size_t c = 0; c < nb; ++c) out.Y(r, c) += yv[r] * row[c];
    }
  }
  const Matrix T = to_matrix(f, out.first);
  const Matrix mid = embed(f, Matrix::identity(k, nb), out.Y, Matrix::identity(k, s));
  const Matrix last = embed(f, Matrix::identity(k, nb), Matrix(k, s, nb), b.rho);
  if (!(T * mid * last == to_matrix(b))) throw FormError("normalized block failed to recompose");
  for (std::size_t i = 0; i < out.first.length(); ++i)
    if (!(out.first.scalars[i] * eval_q(f, out.first.vectors[i])).is_one())
      throw FormError("normalized factor is not orthogonal");
  for (std::size_t c = 0; c < nb; ++c)
    if (!eval_q(fr, out.Y.column(c)).is_zero()) throw FormError("normalized Y is not totally singular");
  return out;
}

BlockInvolution construct_block_Y(const QuadraticForm& f, const DiagonalInvolution& tau, const Matrix& rho,
                                  const std::vector<Vector>& h, BlockYRule rule) {
  const std::size_t nb = 2 * f.r(), s = f.s(), l = tau.length();
  const Field k = f.field;
  if (h.size() != l || tau.scalars.size() != l) throw FormError("one radical vector per factor is required");
  if (rho.rows() != s || rho.cols() != s) throw FormError("radical map has the wrong size");
  const QuadraticForm fb = nonsingular_part(f), fr = radical_part(f);
  std::vector<Vector> us;
  for (std::size_t i = 0; i < l; ++i) {
    check_length(f, tau.vectors[i]);
    if (!is_zero(tail(tau.vectors[i], nb))) throw FormError("factor vector has a radical component");
    if (h[i].size() != s) throw FormError("radical vector has the wrong length");
    us.push_back(head(tau.vectors[i], nb));
  }
  std::vector<Vector> rows;
  for (const auto& u : us) rows.push_back(b_row(fb, u));
  std::vector<Vector> vs;
  if (l > 0) {
    const Matrix pairing = Matrix::from_rows(k, nb, rows);
    for (std::size_t i = 0; i < l; ++i) {
      const auto v = solve(pairing, unit_vector(k, l, i));
      if (!v) throw FormError("factor vectors are dependent");
      vs.push_back(*v);
    }
    for (std::size_t j = 0; j < l; ++j)
      for (std::size_t i = 0; i < j; ++i) vs[j] = vs[j] + eval_B(fb, vs[i], vs[j]) * us[i];
  }
  std::vector<Vector> basis = us, images;
  basis.insert(basis.end(), vs.begin(), vs.end());
  for (std::size_t i = 0; i < l; ++i) images.push_back(h[i] + rho * h[i]);
  for (std::size_t i = 0; i < l; ++i) {
    if (rule == BlockYRule::Dual) {
      const Elem qu = eval_q(fb, us[i]);
      if (!(eval_q(fr, h[i]) == qu + tau.scalars[i].inverse()))
        throw FormError("q(h_i) must equal q(u_i) + 1/a_i");
      images.push_back(tau.scalars[i] * h[i]);
    } else {
      const Elem qu = eval_q(fb, us[i]);
      if (qu.is_zero()) throw FormError("factor vector is singular");
      images.push_back(qu.inverse() * images[i]);
    }
  }
  for (const auto& w : b_complement(fb, basis)) {
    basis.push_back(w);
    images.push_back(zero_vector(k, s));
  }
  const auto binv = Matrix::from_columns(k, nb, basis).inverse();
  if (!binv) throw FormError("factor vectors do not extend to a basis");
  const Matrix Y = Matrix::from_columns(k, s, images) * *binv;
  return {to_matrix(fb, DiagonalInvolution{us, tau.scalars}), Y, rho};
}

}  // namespace qf2
