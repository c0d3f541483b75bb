#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qf2/field.hpp"

namespace qf2 {

using Vector = std::vector<Elem>;

Vector zero_vector(Field f, std::size_t n);
Vector unit_vector(Field f, std::size_t n, std::size_t i);
Vector operator+(const Vector& a, const Vector& b);
Vector operator*(const Elem& c, const Vector& v);
bool is_zero(const Vector& v);

/// Dense matrix over an exact field; acts on column vectors.
class Matrix {
 public:
  Matrix(Field f, std::size_t rows, std::size_t cols);
  static Matrix identity(Field f, std::size_t n);
  static Matrix from_columns(Field f, std::size_t rows, std::span<const Vector> cols);
  static Matrix from_rows(Field f, std::size_t cols, std::span<const Vector> rows);
  static Matrix diagonal(Field f, std::span<const Elem> d);

  Field field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Elem& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Elem& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector column(std::size_t j) const;
  Vector row(std::size_t i) const;
  Matrix transpose() const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);

  bool is_identity() const;
  bool is_zero() const;
  std::size_t rank() const;
  std::optional<Matrix> inverse() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Vector operator*(const Matrix& a, const Vector& v);
  friend bool operator==(const Matrix& a, const Matrix& b);

  std::string to_string() const;  // [[a,b],[c,d]]

 private:
  Field field_;
  std::size_t rows_, cols_;
  std::vector<Elem> data_;
};

/// Reduced row echelon basis of span(vecs), ordered by pivot position.
std::vector<Vector> row_reduce(Field f, std::span<const Vector> vecs);
std::size_t rank_of(Field f, std::span<const Vector> vecs);
bool in_span(Field f, std::span<const Vector> basis, const Vector& v);
/// vs in order, dropping zeros and vectors dependent on earlier ones.
std::vector<Vector> independent_subset(Field f, std::span<const Vector> vs);
/// Basis of {x : a x = 0}.
std::vector<Vector> kernel(const Matrix& a);
/// Some x with a x = b, if one exists.
std::optional<Vector> solve(const Matrix& a, const Vector& b);

std::string to_string(const Vector& v);  // (a,b,c)

/// Coordinate vectors of xs under x -> (c_S)_S over a shared monomial key set.
/// The map is Frobenius-semilinear, so k^2-spans of xs correspond to k-spans
/// of the returned vectors.
std::vector<Vector> k2_coordinate_vectors(Field f, std::span<const Elem> xs);
std::size_t k2_rank(Field f, std::span<const Elem> xs);
bool same_k2_span(Field f, std::span<const Elem> a, std::span<const Elem> b);
/// gamma with sum gamma_i^2 basis_i = target, if target lies in the k^2-span.
std::optional<Vector> k2_combination(Field f, std::span<const Elem> basis, const Elem& target);

}  // namespace qf2
