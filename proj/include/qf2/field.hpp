#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qf2/poly.hpp"

namespace qf2 {

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FieldKind { BinaryExtension, RationalFunction };

namespace detail {
struct FieldData;
}

/// Handle to an interned field descriptor. Descriptors live for the whole
/// process, so handles are cheap to copy and compare by identity.
class Field {
 public:
  /// GF(2^m). A zero modulus selects the default irreducible polynomial.
  static Field gf2m(unsigned m, std::uint32_t modulus = 0);
  /// F2(vars...), at most three variables.
  static Field rational(std::vector<std::string> vars);

  FieldKind kind() const;
  bool is_finite() const { return kind() == FieldKind::BinaryExtension; }
  unsigned degree() const;          // m, binary-extension only
  std::uint32_t modulus() const;    // binary-extension only
  std::uint64_t order() const;      // 2^m, binary-extension only
  const std::vector<std::string>& vars() const;

  std::string to_string() const;  // DSL spelling

  friend bool operator==(Field a, Field b) { return a.d_ == b.d_; }
  const detail::FieldData* data() const { return d_; }

 private:
  explicit Field(const detail::FieldData* d) : d_(d) {}
  const detail::FieldData* d_ = nullptr;
};

/// Reduced fraction of F2 polynomials; denominator nonzero, gcd(num, den) = 1.
struct RatFunc {
  Poly num;
  Poly den = Poly::one();
  friend bool operator==(const RatFunc&, const RatFunc&) = default;
};

RatFunc canonical(RatFunc f);

/// Exact element of a characteristic-2 field with value semantics.
class Elem {
 public:
  static Elem zero(Field f);
  static Elem one(Field f);
  static Elem from_bits(Field f, std::uint32_t bits);
  static Elem from_fraction(Field f, Poly num, Poly den = Poly::one());
  static Elem variable(Field f, std::size_t index);

  Field field() const { return field_; }
  bool is_zero() const;
  bool is_one() const;

  std::uint32_t bits() const;      // binary-extension only
  const RatFunc& fraction() const;  // rational-function only

  Elem inverse() const;  // throws FieldError on zero
  Elem square() const { return *this * *this; }
  Elem pow(std::int64_t e) const;

  friend Elem operator+(const Elem& a, const Elem& b);
  friend Elem operator-(const Elem& a, const Elem& b) { return a + b; }
  friend Elem operator*(const Elem& a, const Elem& b);
  friend Elem operator/(const Elem& a, const Elem& b) { return a * b.inverse(); }
  Elem& operator+=(const Elem& b) { return *this = *this + b; }
  Elem& operator*=(const Elem& b) { return *this = *this * b; }
  friend bool operator==(const Elem& a, const Elem& b);

  /// Total order used only for deterministic containers.
  friend bool operator<(const Elem& a, const Elem& b);

  std::string to_string() const;

 private:
  Elem(Field f, std::variant<std::uint32_t, RatFunc> v) : field_(f), value_(std::move(v)) {}
  Field field_;
  std::variant<std::uint32_t, RatFunc> value_;
};

/// Element y with y^2 = x, or nullopt when x is not a square.
std::optional<Elem> sqrt(const Elem& x);

/// Square-free monomial m_S -> c_S with x = sum c_S^2 m_S. For binary-extension
/// fields the only key is the unit monomial.
using K2Coordinates = std::map<Monomial, Elem>;

K2Coordinates k2_coordinates(const Elem& x);
Elem reconstruct(Field f, const K2Coordinates& c);

/// Absolute trace GF(2^m) -> GF(2), returned as 0 or 1.
unsigned trace(const Elem& x);

/// All field elements in bit order (binary-extension only).
std::vector<Elem> elements(Field f);

}  // namespace qf2
