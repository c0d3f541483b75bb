#include "qf2/quadratic_form.hpp"

#include <algorithm>

namespace qf2 {

std::string to_string(Answer a) {
  switch (a) {
    case Answer::Yes: return "YES";
    case Answer::No: return "NO";
    case Answer::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

QuadraticForm QuadraticForm::hyperbolic(Field f, std::size_t r) {
  QuadraticForm q{f, {}, {}};
  for (std::size_t i = 0; i < r; ++i) q.pairs.emplace_back(Elem::zero(f), Elem::zero(f));
  return q;
}

QuadraticForm orthogonal_sum(const QuadraticForm& a, const QuadraticForm& b) {
  if (a.field != b.field) throw FormError("orthogonal sum over different fields");
  QuadraticForm s = a;
  s.pairs.insert(s.pairs.end(), b.pairs.begin(), b.pairs.end());
  s.diag.insert(s.diag.end(), b.diag.begin(), b.diag.end());
  return s;
}

namespace {

void check_dim(const QuadraticForm& f, const Vector& w) {
  if (w.size() != f.dim()) throw FormError("vector has dimension " + std::to_string(w.size()) +
                                           ", form has dimension " + std::to_string(f.dim()));
}

Vector combine(Field k, std::size_t n, const std::vector<Vector>& basis, const Vector& coords) {
  Vector v = zero_vector(k, n);
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (!coords[i].is_zero()) v = v + coords[i] * basis[i];
  return v;
}

// x + B(x,f)e + B(x,e)f, the projection away from the plane <e,f> with B(e,f)=1.
Vector project_off_plane(const QuadraticForm& q, const Vector& x, const Vector& e, const Vector& f) {
  return x + eval_B(q, x, f) * e + eval_B(q, x, e) * f;
}

std::vector<Vector> project_all(const QuadraticForm& q, const std::vector<Vector>& ws, const Vector& e,
                                const Vector& f) {
  std::vector<Vector> out;
  for (const auto& x : ws) out.push_back(project_off_plane(q, x, e, f));
  return independent_subset(q.field, out);
}

std::optional<Elem> solve_artin_schreier(const Elem& c) {  // z^2 + z = c
  for (const auto& z : elements(c.field()))
    if (z * z + z == c) return z;
  return std::nullopt;
}

struct IsotropicSearch {
  std::optional<Vector> vector;
  bool conclusive = true;
};

IsotropicSearch find_isotropic(const QuadraticForm& q, const std::vector<Vector>& work,
                               const SearchBounds& bounds) {
  const Field k = q.field;
  const std::size_t n = q.dim();
  auto good = [&](const Vector& v) { return eval_q(q, v).is_zero() && !in_radical(q, v); };
  for (const auto& w : work)
    if (good(w)) return {w, true};

  std::vector<Vector> nonrad;
  for (const auto& w : work)
    if (!in_radical(q, w)) nonrad.push_back(w);
  if (nonrad.empty()) return {std::nullopt, true};

  if (k.is_finite()) {
    const std::uint64_t order = k.order();
    std::uint64_t total = 1;
    bool small = true;
    for (std::size_t i = 0; i < work.size() && small; ++i) {
      if (total > bounds.budget / order) small = false;
      total *= order;
    }
    if (small) {
      for (std::uint64_t idx = 1; idx < total; ++idx) {
        const Vector v = combine(k, n, work, *nth_vector(k, work.size(), idx));
        if (good(v)) return {v, true};
      }
      return {std::nullopt, true};
    }
  }

  // sqrt(c/a) e + g is isotropic when e pairs with p, g is orthogonal to both.
  for (const auto& e : nonrad) {
    std::optional<Vector> partner;
    for (const auto& x : work)
      if (!eval_B(q, e, x).is_zero()) {
        partner = eval_B(q, e, x).inverse() * x;
        break;
      }
    const std::vector<Vector> rest = project_all(q, work, e, *partner);
    const Elem a = eval_q(q, e);
    for (const auto& g : rest) {
      if (auto s = sqrt(eval_q(q, g) / a)) {
        const Vector v = *s * e + g;
        if (good(v)) return {v, true};
      }
    }
    if (k.is_finite() && rest.empty()) {
      // Single plane: isotropic iff z^2 + z = q(e) q(p) is solvable.
      const Elem b = eval_q(q, *partner);
      if (auto z = solve_artin_schreier(a * b)) {
        const Vector v = (*z / a) * e + *partner;
        if (good(v)) return {v, true};
      }
      return {std::nullopt, true};
    }
  }
  if (k.is_finite()) throw FormError("isotropic search failed over a finite field");

  // Bounded scan over polynomial coordinates; never certifies anisotropy.
  std::uint64_t tried = 0;
  for (unsigned d = 0; d <= bounds.degree; ++d) {
    const auto polys = polys_up_to(k.vars().size(), d);
    std::vector<std::size_t> idx(work.size(), 0);
    while (true) {
      std::size_t i = 0;
      while (i < idx.size() && ++idx[i] == polys.size()) idx[i++] = 0;
      if (i == idx.size()) break;
      if (++tried > bounds.budget) return {std::nullopt, false};
      Vector coords;
      for (auto j : idx) coords.push_back(Elem::from_fraction(k, polys[j]));
      const Vector v = combine(k, n, work, coords);
      if (good(v)) return {v, true};
    }
  }
  return {std::nullopt, false};
}

// Map m with q2(m z) = q1(z) between totally singular forms of equal
// dimension and equal value span.
Matrix totally_singular_witness(Field k, const std::vector<Elem>& c1, const std::vector<Elem>& c2) {
  const std::size_t s = c1.size();
  const QuadraticForm f1{k, {}, c1}, f2{k, {}, c2};
  const auto d1 = defect_subspace(f1), d2 = defect_subspace(f2);
  auto aniso = [&](const std::vector<Vector>& d) {
    std::vector<Vector> span = d, out;
    for (std::size_t j = 0; j < s; ++j) {
      const Vector u = unit_vector(k, s, j);
      if (!span.empty() && in_span(k, span, u)) continue;
      span.push_back(u);
      out.push_back(u);
    }
    return out;
  };
  const auto a1 = aniso(d1), a2 = aniso(d2);
  if (d1.size() != d2.size() || a1.size() != a2.size()) throw FormError("radical forms are not isometric");
  std::vector<Elem> values2;
  for (const auto& v : a2) values2.push_back(eval_q(f2, v));
  std::vector<Vector> src = d1, img = d2;
  for (const auto& v : a1) {
    const auto g = k2_combination(k, values2, eval_q(f1, v));
    if (!g) throw FormError("radical value spans differ");
    src.push_back(v);
    img.push_back(combine(k, s, a2, *g));
  }
  const Matrix S = Matrix::from_columns(k, s, src), I = Matrix::from_columns(k, s, img);
  return I * *S.inverse();
}

Matrix embed_blocks(Field k, std::size_t n, std::size_t offset, const Matrix& block) {
  Matrix m = Matrix::identity(k, n);
  m.set_block(offset, offset, block);
  return m;
}

}  // namespace

Elem eval_q(const QuadraticForm& f, const Vector& w) {
  check_dim(f, w);
  Elem v = Elem::zero(f.field);
  for (std::size_t i = 0; i < f.r(); ++i) {
    const Elem& x = w[2 * i];
    const Elem& y = w[2 * i + 1];
    v += f.pairs[i].first * x * x + x * y + f.pairs[i].second * y * y;
  }
  for (std::size_t j = 0; j < f.s(); ++j) {
    const Elem& z = w[2 * f.r() + j];
    v += f.diag[j] * z * z;
  }
  return v;
}

Elem eval_B(const QuadraticForm& f, const Vector& w, const Vector& w2) {
  check_dim(f, w);
  check_dim(f, w2);
  Elem v = Elem::zero(f.field);
  for (std::size_t i = 0; i < f.r(); ++i) v += w[2 * i] * w2[2 * i + 1] + w2[2 * i] * w[2 * i + 1];
  return v;
}

Matrix gram(const QuadraticForm& f) {
  Matrix g(f.field, f.dim(), f.dim());
  for (std::size_t i = 0; i < f.r(); ++i) {
    g(2 * i, 2 * i + 1) = Elem::one(f.field);
    g(2 * i + 1, 2 * i) = Elem::one(f.field);
  }
  return g;
}

bool in_radical(const QuadraticForm& f, const Vector& w) {
  check_dim(f, w);
  for (std::size_t i = 0; i < 2 * f.r(); ++i)
    if (!w[i].is_zero()) return false;
  return true;
}

bool preserves_B(const QuadraticForm& f, const Matrix& m) {
  if (m.rows() != f.dim() || m.cols() != f.dim()) throw FormError("matrix size does not match form");
  const Matrix g = gram(f);
  return m.transpose() * g * m == g;
}

bool is_isometry_between(const QuadraticForm& f1, const QuadraticForm& f2, const Matrix& m) {
  if (m.rows() != f2.dim() || m.cols() != f1.dim()) throw FormError("matrix size does not match forms");
  if (f1.dim() != f2.dim() || !m.inverse()) return false;
  if (!(m.transpose() * gram(f2) * m == gram(f1))) return false;
  // With B preserved, w -> q2(mw) + q1(w) is additive and scales by c^2, so
  // basis vectors suffice; pairwise sums are checked as well.
  const std::size_t n = f1.dim();
  const Field k = f1.field;
  for (std::size_t i = 0; i < n; ++i) {
    const Vector u = unit_vector(k, n, i);
    if (!(eval_q(f2, m * u) == eval_q(f1, u))) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vector v = u + unit_vector(k, n, j);
      if (!(eval_q(f2, m * v) == eval_q(f1, v))) return false;
    }
  }
  return true;
}

bool is_isometry(const QuadraticForm& f, const Matrix& m) { return is_isometry_between(f, f, m); }

std::vector<Vector> defect_subspace(const QuadraticForm& f) {
  if (f.s() == 0) return {};
  const Field k = f.field;
  const auto coords = k2_coordinate_vectors(k, f.diag);
  const std::size_t rows = coords[0].size();
  std::vector<Vector> out;
  if (rows == 0) {
    for (std::size_t j = 0; j < f.s(); ++j) out.push_back(unit_vector(k, f.dim(), 2 * f.r() + j));
    return out;
  }
  Matrix a(k, rows, f.s());
  for (std::size_t j = 0; j < f.s(); ++j)
    for (std::size_t i = 0; i < rows; ++i) a(i, j) = coords[j][i];
  for (const auto& z : kernel(a)) {
    Vector v = zero_vector(k, f.dim());
    std::copy(z.begin(), z.end(), v.begin() + 2 * f.r());
    out.push_back(std::move(v));
  }
  return out;
}

std::size_t defect(const QuadraticForm& f) { return defect_subspace(f).size(); }

QuadraticForm WittDecomposition::reassembled() const {
  const Field k = nonsingular_aniso.field;
  QuadraticForm q = QuadraticForm::hyperbolic(k, witt_index);
  q.pairs.insert(q.pairs.end(), nonsingular_aniso.pairs.begin(), nonsingular_aniso.pairs.end());
  q.diag.assign(defect, Elem::zero(k));
  q.diag.insert(q.diag.end(), singular_aniso.diag.begin(), singular_aniso.diag.end());
  return q;
}

WittDecomposition witt_decompose(const QuadraticForm& f, const SearchBounds& bounds) {
  const Field k = f.field;
  const std::size_t n = f.dim();
  const auto defect_vecs = defect_subspace(f);

  std::vector<Vector> aniso_rad, span = defect_vecs;
  for (std::size_t j = 0; j < f.s(); ++j) {
    const Vector u = unit_vector(k, n, 2 * f.r() + j);
    if (!span.empty() && in_span(k, span, u)) continue;
    span.push_back(u);
    aniso_rad.push_back(u);
  }

  std::vector<Vector> work;
  for (std::size_t i = 0; i < 2 * f.r(); ++i) work.push_back(unit_vector(k, n, i));
  work.insert(work.end(), aniso_rad.begin(), aniso_rad.end());

  WittDecomposition out{0, QuadraticForm{k, {}, {}}, QuadraticForm{k, {}, {}}, defect_vecs.size(),
                        Matrix(k, n, n), true};
  std::vector<Vector> columns;
  while (true) {
    const auto found = find_isotropic(f, work, bounds);
    if (!found.conclusive) out.conclusive = false;
    if (!found.vector) break;
    const Vector& w = *found.vector;
    Vector p;
    for (const auto& x : work)
      if (!eval_B(f, w, x).is_zero()) {
        p = eval_B(f, w, x).inverse() * x;
        break;
      }
    p = p + eval_q(f, p) * w;
    columns.push_back(w);
    columns.push_back(p);
    work = project_all(f, work, w, p);
    ++out.witt_index;
  }

  // Residual: symplectic pairs from the nonradical part, then the radical part.
  std::vector<Vector> rest;
  for (const auto& x : work)
    if (!in_radical(f, x)) rest.push_back(x);
  std::vector<std::pair<Vector, Vector>> aniso_pairs;
  while (!rest.empty()) {
    std::optional<std::pair<Vector, Vector>> plane;
    for (const auto& e : rest) {
      for (const auto& y : rest)
        if (!eval_B(f, e, y).is_zero()) {
          plane.emplace(e, eval_B(f, e, y).inverse() * y);
          break;
        }
      if (plane) break;
    }
    if (!plane) throw FormError("residual nonradical part is degenerate");
    aniso_pairs.push_back(*plane);
    std::vector<Vector> next;
    for (const auto& x : project_all(f, rest, plane->first, plane->second))
      if (!in_radical(f, x)) next.push_back(x);
    rest = next;
  }

  if (k.is_finite() && out.conclusive) {
    Elem c0 = Elem::zero(k);
    for (const auto& x : elements(k))
      if (trace(x) == 1) {
        c0 = x;
        break;
      }
    for (auto& [e, p] : aniso_pairs) {
      const Elem s = *sqrt(eval_q(f, e));
      e = s.inverse() * e;
      p = s * p;
      const auto lambda = solve_artin_schreier(eval_q(f, p) + c0);
      if (!lambda) throw FormError("anisotropic plane has unexpected Arf invariant");
      p = p + *lambda * e;
    }
    for (auto& a : aniso_rad) a = sqrt(eval_q(f, a))->inverse() * a;
  }

  for (const auto& [e, p] : aniso_pairs) {
    out.nonsingular_aniso.pairs.emplace_back(eval_q(f, e), eval_q(f, p));
    columns.push_back(e);
    columns.push_back(p);
  }
  columns.insert(columns.end(), defect_vecs.begin(), defect_vecs.end());
  for (const auto& a : aniso_rad) {
    out.singular_aniso.diag.push_back(eval_q(f, a));
    columns.push_back(a);
  }
  out.basis = Matrix::from_columns(k, n, columns);
  return out;
}

unsigned arf_invariant(const QuadraticForm& f) {
  if (!f.field.is_finite() || f.s() != 0) throw FormError("Arf invariant needs a nonsingular form over a finite field");
  Elem sum = Elem::zero(f.field);
  for (const auto& [a, b] : f.pairs) sum += a * b;
  return trace(sum);
}

Rewritten rewrite_isometry(const QuadraticForm& f, Rewrite rule, std::size_t position,
                           const std::optional<Elem>& scalar) {
  const Field k = f.field;
  const Elem one = Elem::one(k), zero = Elem::zero(k);
  const bool two = rule == Rewrite::Mix || rule == Rewrite::Commute;
  if (position >= f.r() || (two && position + 1 >= f.r()))
    throw FormError("rewrite position " + std::to_string(position) + " is out of range");
  Rewritten out{f, Matrix::identity(k, f.dim())};
  const std::size_t x = 2 * position, y = x + 1;
  auto& [a, b] = out.form.pairs[position];
  switch (rule) {
    case Rewrite::Swap:
      std::swap(a, b);
      out.map(x, x) = zero;
      out.map(y, y) = zero;
      out.map(x, y) = one;
      out.map(y, x) = one;
      break;
    case Rewrite::Shift:
      b = a + b + one;
      out.map(x, y) = one;
      break;
    case Rewrite::Scale: {
      if (!scalar || scalar->is_zero()) throw FormError("scale rewrite needs a nonzero scalar");
      const Elem& al = *scalar;
      a = al * al * a;
      b = (al * al).inverse() * b;
      out.map(x, x) = al;
      out.map(y, y) = al.inverse();
      break;
    }
    case Rewrite::Mix: {
      const auto [c, d] = f.pairs[position + 1];
      a = a + c;
      out.form.pairs[position + 1].second = f.pairs[position].second + d;
      out.map(y, y + 2) = one;  // y1_old = y1 + y2
      out.map(x + 2, x) = one;  // x2_old = x1 + x2
      break;
    }
    case Rewrite::Commute:
      std::swap(out.form.pairs[position], out.form.pairs[position + 1]);
      for (std::size_t i = x; i < x + 4; ++i) out.map(i, i) = zero;
      out.map(x, x + 2) = one;
      out.map(y, y + 2) = one;
      out.map(x + 2, x) = one;
      out.map(y + 2, y) = one;
      break;
  }
  return out;
}

std::vector<Vector> complete_symplectic_basis(const QuadraticForm& f, const std::vector<Vector>& vecs) {
  const Field k = f.field;
  const std::size_t n = f.dim();
  for (const auto& v : vecs) {
    check_dim(f, v);
    if (in_radical(f, v)) throw FormError("vector " + to_string(v) + " lies in rad(V)");
  }
  std::vector<Vector> pending = vecs, work, out;
  for (std::size_t i = 0; i < n; ++i) work.push_back(unit_vector(k, n, i));
  while (true) {
    Vector e;
    if (!pending.empty()) {
      e = pending.front();
      pending.erase(pending.begin());
      if (in_radical(f, e)) throw FormError("input vectors are dependent modulo rad(V)");
    } else {
      auto it = std::find_if(work.begin(), work.end(), [&](const Vector& x) { return !in_radical(f, x); });
      if (it == work.end()) break;
      e = *it;
    }
    auto it = std::find_if(work.begin(), work.end(), [&](const Vector& x) { return !eval_B(f, e, x).is_zero(); });
    if (it == work.end()) throw FormError("no partner for " + to_string(e));
    const Vector fv = *it;
    const Elem alpha = eval_B(f, e, fv);
    for (auto& ek : pending) ek = ek + (eval_B(f, ek, fv) / alpha) * e;
    e = alpha.inverse() * e;
    out.push_back(e);
    out.push_back(fv);
    work = project_all(f, work, e, fv);
  }
  return out;
}

IsometryVerdict is_isometric(const QuadraticForm& f1, const QuadraticForm& f2, const SearchBounds& bounds) {
  if (f1.field != f2.field) throw FormError("forms are over different fields");
  const Field k = f1.field;
  if (f1.dim() != f2.dim()) return {Answer::No, std::nullopt, "dimension"};
  if (f1.s() != f2.s()) return {Answer::No, std::nullopt, "radical dimension"};
  if (!same_k2_span(k, f1.diag, f2.diag)) return {Answer::No, std::nullopt, "radical value span"};
  if (f1 == f2) return {Answer::Yes, Matrix::identity(k, f1.dim()), "identical"};

  const auto w1 = witt_decompose(f1, bounds), w2 = witt_decompose(f2, bounds);
  if (w1.defect != w2.defect) return {Answer::No, std::nullopt, "defect"};
  const bool exact = w1.conclusive && w2.conclusive;
  if (exact && w1.witt_index != w2.witt_index) return {Answer::No, std::nullopt, "witt index"};
  const QuadraticForm n1 = w1.reassembled(), n2 = w2.reassembled();
  if (n1.pairs != n2.pairs) {
    if (k.is_finite()) return {Answer::No, std::nullopt, "anisotropic part"};
    return {Answer::Inconclusive, std::nullopt, "anisotropic parts differ; no witness within bounds"};
  }
  // q_i(P_i w) = n_i(w); glue the radical parts with a totally singular map R,
  // n2(R w) = n1(w), to get q2(P2 R P1^-1 v) = q1(v).
  const Matrix r = embed_blocks(k, f1.dim(), 2 * f1.r(), totally_singular_witness(k, n1.diag, n2.diag));
  const Matrix phi = w2.basis * r * *w1.basis.inverse();
  if (!is_isometry_between(f1, f2, phi)) throw FormError("constructed isometry failed certification");
  return {Answer::Yes, phi, "normal forms agree"};
}

std::optional<Vector> nth_vector(Field f, std::size_t n, std::uint64_t index) {
  const std::uint64_t order = f.order();
  Vector v;
  for (std::size_t i = 0; i < n; ++i) {
    v.push_back(Elem::from_bits(f, std::uint32_t(index % order)));
    index /= order;
  }
  if (index) return std::nullopt;
  return v;
}

}  // namespace qf2
