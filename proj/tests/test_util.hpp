#pragma once

#include <random>

#include "qf2/quadratic_form.hpp"

namespace qf2::test {

inline Poly random_poly(std::mt19937_64& rng, std::size_t nvars, unsigned max_degree) {
  std::vector<Monomial> terms;
  const int count = int(rng() % 4);
  for (int i = 0; i < count; ++i) {
    Monomial m{};
    unsigned budget = unsigned(rng() % (max_degree + 1));
    for (std::size_t v = 0; v < nvars && budget; ++v) {
      const unsigned e = unsigned(rng() % (budget + 1));
      m[v] = static_cast<std::uint8_t>(e);
      budget -= e;
    }
    terms.push_back(m);
  }
  return Poly::from_terms(std::move(terms));
}

inline Elem random_fraction(Field f, std::mt19937_64& rng, unsigned max_degree) {
  const std::size_t n = f.vars().size();
  const Poly num = random_poly(rng, n, max_degree);
  Poly den = random_poly(rng, n, max_degree);
  if (den.is_zero()) den = Poly::one();
  return Elem::from_fraction(f, num, den);
}

inline Elem random_elem(Field f, std::mt19937_64& rng) {
  return Elem::from_bits(f, std::uint32_t(rng() % f.order()));
}

inline Elem random_nonzero(Field f, std::mt19937_64& rng) {
  return Elem::from_bits(f, std::uint32_t(1 + rng() % (f.order() - 1)));
}

inline Vector random_vector(Field f, std::mt19937_64& rng, std::size_t n) {
  Vector v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(random_elem(f, rng));
  return v;
}

inline QuadraticForm random_form(Field f, std::mt19937_64& rng, std::size_t r, std::size_t s) {
  QuadraticForm q{f, {}, {}};
  for (std::size_t i = 0; i < r; ++i) q.pairs.emplace_back(random_elem(f, rng), random_elem(f, rng));
  for (std::size_t j = 0; j < s; ++j) q.diag.push_back(random_elem(f, rng));
  return q;
}

/// Every n x n matrix over a finite field, as a callback; stops when fn returns true.
template <class Fn>
bool for_each_matrix(Field f, std::size_t n, Fn fn) {
  const std::uint64_t order = f.order();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n * n; ++i) total *= order;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    Matrix m(f, n, n);
    std::uint64_t x = idx;
    for (std::size_t i = 0; i < n * n; ++i) {
      m(i / n, i % n) = Elem::from_bits(f, std::uint32_t(x % order));
      x /= order;
    }
    if (fn(m)) return true;
  }
  return false;
}

/// All vectors of F^n over a finite field.
inline std::vector<Vector> all_vectors(Field f, std::size_t n) {
  std::vector<Vector> out;
  for (std::uint64_t i = 0;; ++i) {
    auto v = nth_vector(f, n, i);
    if (!v) break;
    out.push_back(*v);
  }
  return out;
}

}  // namespace qf2::test
