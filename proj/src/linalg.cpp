#include "qf2/linalg.hpp"

#include <map>
#include <stdexcept>

namespace qf2 {

Vector zero_vector(Field f, std::size_t n) { return Vector(n, Elem::zero(f)); }

Vector unit_vector(Field f, std::size_t n, std::size_t i) {
  Vector v = zero_vector(f, n);
  v.at(i) = Elem::one(f);
  return v;
}

Vector operator+(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector dimension mismatch");
  Vector r = a;
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += b[i];
  return r;
}

Vector operator*(const Elem& c, const Vector& v) {
  Vector r;
  r.reserve(v.size());
  for (const auto& x : v) r.push_back(c * x);
  return r;
}

bool is_zero(const Vector& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

Matrix::Matrix(Field f, std::size_t rows, std::size_t cols)
    : field_(f), rows_(rows), cols_(cols), data_(rows * cols, Elem::zero(f)) {}

Matrix Matrix::identity(Field f, std::size_t n) {
  Matrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Elem::one(f);
  return m;
}

Matrix Matrix::from_columns(Field f, std::size_t rows, std::span<const Vector> cols) {
  Matrix m(f, rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw std::invalid_argument("column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

Matrix Matrix::from_rows(Field f, std::size_t cols, std::span<const Vector> rows) {
  Matrix m(f, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("row length mismatch");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix Matrix::diagonal(Field f, std::span<const Elem> d) {
  Matrix m(f, d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector v;
  v.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
  return v;
}

Vector Matrix::row(std::size_t i) const {
  return Vector(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
}

Matrix Matrix::transpose() const {
  Matrix t(field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("matrix block");
  Matrix b(field_, nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw std::out_of_range("matrix block");
  for (std::size_t i = 0; i < b.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

bool Matrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (i == j ? !(*this)(i, j).is_one() : !(*this)(i, j).is_zero()) return false;
  return true;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_)
    if (!x.is_zero()) return false;
  return true;
}

std::size_t Matrix::rank() const {
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < rows_; ++i) rows.push_back(row(i));
  return rank_of(field_, rows);
}

std::optional<Matrix> Matrix::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("inverse of non-square matrix");
  const std::size_t n = rows_;
  Matrix a = *this;
  Matrix inv = identity(field_, n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c).is_zero()) ++p;
    if (p == n) return std::nullopt;
    if (p != c)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(p, j), a(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
    const Elem s = a(c, c).inverse();
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) *= s;
      inv(c, j) *= s;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a(i, c).is_zero()) continue;
      const Elem f = a(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) += f * a(c, j);
        inv(i, j) += f * inv(c, j);
      }
    }
  }
  return inv;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
  Matrix r(a.field_, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Elem& x = a(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (!b(k, j).is_zero()) r(i, j) += x * b(k, j);
    }
  return r;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum shape mismatch");
  Matrix r = a;
  for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] += b.data_[i];
  return r;
}

Vector operator*(const Matrix& a, const Vector& v) {
  if (a.cols_ != v.size()) throw std::invalid_argument("matrix-vector shape mismatch");
  Vector r = zero_vector(a.field_, a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < a.cols_; ++j)
      if (!v[j].is_zero() && !a(i, j).is_zero()) r[i] += a(i, j) * v[j];
  return r;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string Matrix::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    s += i ? ",[" : "[";
    for (std::size_t j = 0; j < cols_; ++j) s += (j ? "," : "") + (*this)(i, j).to_string();
    s += "]";
  }
  return s + "]";
}

std::vector<Vector> row_reduce(Field f, std::span<const Vector> vecs) {
  std::vector<Vector> rows(vecs.begin(), vecs.end());
  if (rows.empty()) return rows;
  const std::size_t n = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c].is_zero()) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    const Elem s = rows[r][c].inverse();
    for (auto& x : rows[r]) x *= s;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c].is_zero()) continue;
      const Elem m = rows[i][c];
      for (std::size_t j = 0; j < n; ++j) rows[i][j] += m * rows[r][j];
    }
    ++r;
  }
  rows.resize(r);
  (void)f;
  return rows;
}

std::size_t rank_of(Field f, std::span<const Vector> vecs) { return row_reduce(f, vecs).size(); }

bool in_span(Field f, std::span<const Vector> basis, const Vector& v) {
  std::vector<Vector> ext(basis.begin(), basis.end());
  const std::size_t r = rank_of(f, ext);
  ext.push_back(v);
  return rank_of(f, ext) == r;
}

std::vector<Vector> independent_subset(Field f, std::span<const Vector> vs) {
  std::vector<Vector> out;
  for (const auto& v : vs) {
    if (is_zero(v)) continue;
    if (!out.empty() && in_span(f, out, v)) continue;
    out.push_back(v);
  }
  return out;
}

std::vector<Vector> kernel(const Matrix& a) {
  const Field f = a.field();
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < a.rows(); ++i) rows.push_back(a.row(i));
  const auto rref = row_reduce(f, rows);
  std::vector<std::size_t> pivots;
  std::vector<bool> is_pivot(a.cols(), false);
  for (const auto& r : rref) {
    std::size_t c = 0;
    while (r[c].is_zero()) ++c;
    pivots.push_back(c);
    is_pivot[c] = true;
  }
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector x = unit_vector(f, a.cols(), free);
    for (std::size_t k = 0; k < rref.size(); ++k) x[pivots[k]] = rref[k][free];  // char 2: -a = a
    basis.push_back(std::move(x));
  }
  return basis;
}

std::optional<Vector> solve(const Matrix& a, const Vector& b) {
  const Field f = a.field();
  if (b.size() != a.rows()) throw std::invalid_argument("solve shape mismatch");
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Vector r = a.row(i);
    r.push_back(b[i]);
    rows.push_back(std::move(r));
  }
  const auto rref = row_reduce(f, rows);
  Vector x = zero_vector(f, a.cols());
  for (const auto& r : rref) {
    std::size_t c = 0;
    while (r[c].is_zero()) ++c;
    if (c == a.cols()) return std::nullopt;
    x[c] = r[a.cols()];
  }
  return x;
}

std::string to_string(const Vector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].to_string();
  return s + ")";
}

std::vector<Vector> k2_coordinate_vectors(Field f, std::span<const Elem> xs) {
  std::vector<K2Coordinates> coords;
  std::map<Monomial, std::size_t> keys;
  for (const auto& x : xs) {
    coords.push_back(k2_coordinates(x));
    for (const auto& [m, c] : coords.back()) keys.emplace(m, 0);
  }
  std::size_t n = 0;
  for (auto& [m, idx] : keys) idx = n++;
  std::vector<Vector> out;
  for (const auto& c : coords) {
    Vector v = zero_vector(f, n);
    for (const auto& [m, val] : c) v[keys.at(m)] = val;
    out.push_back(std::move(v));
  }
  return out;
}

std::size_t k2_rank(Field f, std::span<const Elem> xs) {
  if (xs.empty()) return 0;
  return rank_of(f, k2_coordinate_vectors(f, xs));
}

bool same_k2_span(Field f, std::span<const Elem> a, std::span<const Elem> b) {
  std::vector<Elem> all(a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  const std::size_t r = k2_rank(f, all);
  return k2_rank(f, a) == r && k2_rank(f, b) == r;
}

std::optional<Vector> k2_combination(Field f, std::span<const Elem> basis, const Elem& target) {
  std::vector<Elem> all(basis.begin(), basis.end());
  all.push_back(target);
  const auto vecs = k2_coordinate_vectors(f, all);
  const std::size_t rows = vecs.back().size();
  if (basis.empty()) {
    if (target.is_zero()) return Vector{};
    return std::nullopt;
  }
  Matrix a(f, rows, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t i = 0; i < rows; ++i) a(i, j) = vecs[j][i];
  return solve(a, vecs.back());
}

}  // namespace qf2
