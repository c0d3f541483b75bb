#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qf2 {

/// Exponent vector over at most three variables.
using Monomial = std::array<std::uint8_t, 3>;

inline constexpr std::size_t kMaxVars = 3;

unsigned total_degree(const Monomial& m);

/// Graded lexicographic comparison (t1 > t2 > t3). Returns true if a > b.
bool grlex_greater(const Monomial& a, const Monomial& b);

/// Multivariate polynomial over F2, stored as a strictly decreasing (grlex)
/// list of monomials. All coefficients are 1.
class Poly {
 public:
  Poly() = default;
  static Poly one();
  static Poly monomial(const Monomial& m);
  static Poly variable(std::size_t index);
  static Poly from_terms(std::vector<Monomial> terms);  // terms may repeat; pairs cancel

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  const std::vector<Monomial>& terms() const { return terms_; }
  const Monomial& leading() const { return terms_.front(); }
  unsigned degree() const;  // total degree; 0 for zero
  unsigned degree_in(std::size_t var) const;

  /// Coefficient of var^k, as a polynomial in the remaining variables.
  Poly coeff_in(std::size_t var, unsigned k) const;

  bool is_square() const;
  Poly frobenius_root() const;  // requires is_square()

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly times_monomial(const Monomial& m) const;
  friend bool operator==(const Poly& a, const Poly& b) = default;

  /// Exact quotient a / b, or nullopt when b does not divide a.
  static std::optional<Poly> divide_exact(const Poly& a, const Poly& b);
  static Poly gcd(const Poly& a, const Poly& b);

  std::string to_string(std::span<const std::string> vars) const;

 private:
  explicit Poly(std::vector<Monomial> sorted) : terms_(std::move(sorted)) {}
  std::vector<Monomial> terms_;
};

/// Polynomials in nvars variables of total degree <= degree, ordered by the
/// bitmask of their monomials; at most limit of them.
std::vector<Poly> polys_up_to(std::size_t nvars, unsigned degree, std::size_t limit = std::size_t{1} << 16);

}  // namespace qf2
