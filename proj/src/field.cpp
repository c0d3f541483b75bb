#include "qf2/field.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>

namespace qf2 {

namespace detail {

struct FieldData {
  FieldKind kind;
  unsigned m = 0;
  std::uint32_t modulus = 0;
  std::vector<std::string> vars;
  std::uint32_t order_minus_one = 0;
  std::vector<std::uint32_t> exp;  // exp[i] = g^i, length 2*(q-1)
  std::vector<std::uint32_t> log;  // log[x] for x != 0
};

}  // namespace detail

namespace {

constexpr std::uint32_t kDefaultModulus[17] = {0,      0x3,    0x7,    0xB,    0x13,   0x25,
                                               0x43,   0x83,   0x11D,  0x211,  0x409,  0x805,
                                               0x1053, 0x201B, 0x4443, 0x8003, 0x1002D};

int poly_degree(std::uint32_t p) {
  int d = -1;
  while (p) {
    ++d;
    p >>= 1;
  }
  return d;
}

std::uint32_t poly_mod(std::uint32_t a, std::uint32_t m) {
  const int dm = poly_degree(m);
  for (int d = poly_degree(a); d >= dm; d = poly_degree(a)) a ^= m << (d - dm);
  return a;
}

bool irreducible(std::uint32_t p) {
  const int d = poly_degree(p);
  if (d < 1) return false;
  for (std::uint32_t q = 2; poly_degree(q) <= d / 2; ++q)
    if (poly_mod(p, q) == 0) return false;
  return true;
}

std::uint32_t mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t m, unsigned deg) {
  std::uint32_t r = 0;
  while (b) {
    if (b & 1) r ^= a;
    b >>= 1;
    a <<= 1;
    if (a >> deg & 1) a ^= m;
  }
  return r;
}

void build_tables(detail::FieldData& d) {
  const std::uint32_t n = (1u << d.m) - 1;
  d.order_minus_one = n;
  d.log.assign(n + 1, 0);
  d.exp.assign(2 * n, 0);
  for (std::uint32_t g = 1; g <= n; ++g) {
    std::uint32_t x = 1;
    std::uint32_t k = 0;
    std::vector<bool> seen(n + 1, false);
    bool primitive = true;
    for (; k < n; ++k) {
      if (seen[x]) {
        primitive = false;
        break;
      }
      seen[x] = true;
      d.exp[k] = x;
      d.log[x] = k;
      x = mul_mod(x, g, d.modulus, d.m);
    }
    if (primitive && x == 1) break;
  }
  for (std::uint32_t k = n; k < 2 * n; ++k) d.exp[k] = d.exp[k - n];
}

std::mutex& registry_mutex() {
  static std::mutex mu;
  return mu;
}

std::vector<std::unique_ptr<detail::FieldData>>& registry() {
  static std::vector<std::unique_ptr<detail::FieldData>> r;
  return r;
}

const detail::FieldData& need_finite(const Field& f) {
  if (!f.data() || f.kind() != FieldKind::BinaryExtension)
    throw FieldError("operation requires a binary-extension field");
  return *f.data();
}

}  // namespace

Field Field::gf2m(unsigned m, std::uint32_t modulus) {
  if (m < 1 || m > 16) throw FieldError("GF(2^m) supports 1 <= m <= 16");
  if (modulus == 0) modulus = kDefaultModulus[m];
  if (poly_degree(modulus) != int(m)) throw FieldError("modulus degree must equal m");
  if (!irreducible(modulus)) throw FieldError("modulus is not irreducible over F2");
  std::lock_guard lock(registry_mutex());
  for (const auto& d : registry())
    if (d->kind == FieldKind::BinaryExtension && d->modulus == modulus) return Field(d.get());
  auto d = std::make_unique<detail::FieldData>();
  d->kind = FieldKind::BinaryExtension;
  d->m = m;
  d->modulus = modulus;
  build_tables(*d);
  registry().push_back(std::move(d));
  return Field(registry().back().get());
}

Field Field::rational(std::vector<std::string> vars) {
  if (vars.empty() || vars.size() > kMaxVars) throw FieldError("F2(...) supports 1 to 3 variables");
  std::set<std::string> uniq(vars.begin(), vars.end());
  if (uniq.size() != vars.size()) throw FieldError("variable names must be distinct");
  for (const auto& v : vars)
    if (v.empty() || !std::isalpha(static_cast<unsigned char>(v[0])))
      throw FieldError("invalid variable name '" + v + "'");
  std::lock_guard lock(registry_mutex());
  for (const auto& d : registry())
    if (d->kind == FieldKind::RationalFunction && d->vars == vars) return Field(d.get());
  auto d = std::make_unique<detail::FieldData>();
  d->kind = FieldKind::RationalFunction;
  d->vars = std::move(vars);
  registry().push_back(std::move(d));
  return Field(registry().back().get());
}

FieldKind Field::kind() const { return d_->kind; }
unsigned Field::degree() const { return need_finite(*this).m; }
std::uint32_t Field::modulus() const { return need_finite(*this).modulus; }
std::uint64_t Field::order() const { return std::uint64_t{1} << need_finite(*this).m; }
const std::vector<std::string>& Field::vars() const { return d_->vars; }

std::string Field::to_string() const {
  if (kind() == FieldKind::RationalFunction) {
    std::string s = "F2(";
    for (std::size_t i = 0; i < d_->vars.size(); ++i) s += (i ? "," : "") + d_->vars[i];
    return s + ")";
  }
  if (d_->modulus == kDefaultModulus[d_->m]) {
    return d_->m == 1 ? "GF(2)" : "GF(" + std::to_string(1u << d_->m) + ")";
  }
  std::string bits;
  for (int i = poly_degree(d_->modulus); i >= 0; --i) bits += (d_->modulus >> i & 1) ? '1' : '0';
  return "GF(2^" + std::to_string(d_->m) + "; modulus=" + bits + ")";
}

RatFunc canonical(RatFunc f) {
  if (f.den.is_zero()) throw FieldError("zero denominator");
  if (f.num.is_zero()) return RatFunc{Poly{}, Poly::one()};
  const Poly g = Poly::gcd(f.num, f.den);
  if (!g.is_one()) {
    f.num = *Poly::divide_exact(f.num, g);
    f.den = *Poly::divide_exact(f.den, g);
  }
  return f;
}

Elem Elem::zero(Field f) {
  if (f.kind() == FieldKind::BinaryExtension) return Elem(f, std::uint32_t{0});
  return Elem(f, RatFunc{});
}

Elem Elem::one(Field f) {
  if (f.kind() == FieldKind::BinaryExtension) return Elem(f, std::uint32_t{1});
  return Elem(f, RatFunc{Poly::one(), Poly::one()});
}

Elem Elem::from_bits(Field f, std::uint32_t bits) {
  const auto& d = need_finite(f);
  if (bits > d.order_minus_one) throw FieldError("bit-vector exceeds field size");
  return Elem(f, bits);
}

Elem Elem::from_fraction(Field f, Poly num, Poly den) {
  if (f.kind() != FieldKind::RationalFunction) throw FieldError("fractions need a rational-function field");
  for (const Poly* p : {&num, &den})
    for (const auto& m : p->terms())
      for (std::size_t i = f.vars().size(); i < kMaxVars; ++i)
        if (m[i]) throw FieldError("polynomial uses a variable outside the field");
  return Elem(f, canonical(RatFunc{std::move(num), std::move(den)}));
}

Elem Elem::variable(Field f, std::size_t index) {
  if (f.kind() != FieldKind::RationalFunction || index >= f.vars().size())
    throw FieldError("no such variable");
  return Elem(f, RatFunc{Poly::variable(index), Poly::one()});
}

bool Elem::is_zero() const {
  if (auto b = std::get_if<std::uint32_t>(&value_)) return *b == 0;
  return std::get<RatFunc>(value_).num.is_zero();
}

bool Elem::is_one() const {
  if (auto b = std::get_if<std::uint32_t>(&value_)) return *b == 1;
  const auto& r = std::get<RatFunc>(value_);
  return r.num.is_one() && r.den.is_one();
}

std::uint32_t Elem::bits() const {
  if (auto b = std::get_if<std::uint32_t>(&value_)) return *b;
  throw FieldError("bits() on a rational-function element");
}

const RatFunc& Elem::fraction() const {
  if (auto r = std::get_if<RatFunc>(&value_)) return *r;
  throw FieldError("fraction() on a binary-extension element");
}

namespace {

void same_field(const Elem& a, const Elem& b) {
  if (!(a.field() == b.field())) throw FieldError("field descriptor mismatch");
}

}  // namespace

Elem operator+(const Elem& a, const Elem& b) {
  same_field(a, b);
  if (auto x = std::get_if<std::uint32_t>(&a.value_)) return Elem(a.field_, *x ^ std::get<std::uint32_t>(b.value_));
  const auto& p = std::get<RatFunc>(a.value_);
  const auto& q = std::get<RatFunc>(b.value_);
  if (p.num.is_zero()) return b;
  if (q.num.is_zero()) return a;
  if (p.den == q.den) return Elem(a.field_, canonical(RatFunc{p.num + q.num, p.den}));
  return Elem(a.field_, canonical(RatFunc{p.num * q.den + q.num * p.den, p.den * q.den}));
}

Elem operator*(const Elem& a, const Elem& b) {
  same_field(a, b);
  if (auto x = std::get_if<std::uint32_t>(&a.value_)) {
    const std::uint32_t y = std::get<std::uint32_t>(b.value_);
    if (*x == 0 || y == 0) return Elem(a.field_, std::uint32_t{0});
    const auto& d = *a.field_.data();
    return Elem(a.field_, d.exp[d.log[*x] + d.log[y]]);
  }
  const auto& p = std::get<RatFunc>(a.value_);
  const auto& q = std::get<RatFunc>(b.value_);
  if (p.num.is_zero() || q.num.is_zero()) return Elem::zero(a.field_);
  // Cross-cancel before multiplying to keep intermediate degrees small.
  const Poly g1 = Poly::gcd(p.num, q.den);
  const Poly g2 = Poly::gcd(q.num, p.den);
  RatFunc r{*Poly::divide_exact(p.num, g1) * *Poly::divide_exact(q.num, g2),
            *Poly::divide_exact(p.den, g2) * *Poly::divide_exact(q.den, g1)};
  return Elem(a.field_, std::move(r));
}

bool operator==(const Elem& a, const Elem& b) {
  same_field(a, b);
  return a.value_ == b.value_;
}

bool operator<(const Elem& a, const Elem& b) {
  if (auto x = std::get_if<std::uint32_t>(&a.value_)) return *x < std::get<std::uint32_t>(b.value_);
  const auto& p = std::get<RatFunc>(a.value_);
  const auto& q = std::get<RatFunc>(b.value_);
  auto key = [](const RatFunc& r) { return std::tie(r.num.terms(), r.den.terms()); };
  return key(p) < key(q);
}

Elem Elem::inverse() const {
  if (is_zero()) throw FieldError("inversion of zero");
  if (auto x = std::get_if<std::uint32_t>(&value_)) {
    const auto& d = *field_.data();
    return Elem(field_, d.exp[(d.order_minus_one - d.log[*x]) % d.order_minus_one]);
  }
  const auto& r = std::get<RatFunc>(value_);
  return Elem(field_, RatFunc{r.den, r.num});
}

Elem Elem::pow(std::int64_t e) const {
  if (e < 0) return inverse().pow(-e);
  Elem result = one(field_);
  Elem base = *this;
  while (e) {
    if (e & 1) result *= base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

std::string Elem::to_string() const {
  if (auto x = std::get_if<std::uint32_t>(&value_)) {
    std::ostringstream os;
    os << std::hex << *x;
    return os.str();
  }
  const auto& r = std::get<RatFunc>(value_);
  const auto& vars = field_.vars();
  if (r.den.is_one()) {
    const std::string n = r.num.to_string(vars);
    return r.num.terms().size() > 1 ? "(" + n + ")" : n;
  }
  return "(" + r.num.to_string(vars) + ")/(" + r.den.to_string(vars) + ")";
}

std::optional<Elem> sqrt(const Elem& x) {
  const Field f = x.field();
  if (f.kind() == FieldKind::BinaryExtension) {
    if (x.is_zero()) return x;
    const auto& d = *f.data();
    // sqrt(g^k) = g^(k * 2^(m-1)) since squaring is a bijection.
    const std::uint64_t k = d.log[x.bits()];
    const std::uint64_t e = (k << (d.m - 1)) % d.order_minus_one;
    return Elem::from_bits(f, d.exp[e]);
  }
  const auto& r = x.fraction();
  if (!r.num.is_square() || !r.den.is_square()) return std::nullopt;
  return Elem::from_fraction(f, r.num.frobenius_root(), r.den.frobenius_root());
}

K2Coordinates k2_coordinates(const Elem& x) {
  const Field f = x.field();
  K2Coordinates out;
  if (x.is_zero()) return out;
  if (f.kind() == FieldKind::BinaryExtension) {
    out.emplace(Monomial{}, *sqrt(x));
    return out;
  }
  // f/g = (f*g)/g^2; split f*g by exponent parity.
  const auto& r = x.fraction();
  const Poly fg = r.num * r.den;
  std::map<Monomial, std::vector<Monomial>> parts;
  for (const auto& m : fg.terms()) {
    Monomial parity{}, half{};
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      parity[i] = m[i] % 2;
      half[i] = m[i] / 2;
    }
    parts[parity].push_back(half);
  }
  for (auto& [parity, halves] : parts)
    out.emplace(parity, Elem::from_fraction(f, Poly::from_terms(std::move(halves)), r.den));
  return out;
}

Elem reconstruct(Field f, const K2Coordinates& c) {
  Elem acc = Elem::zero(f);
  for (const auto& [mono, coeff] : c) {
    Elem m = f.kind() == FieldKind::BinaryExtension ? Elem::one(f) : Elem::from_fraction(f, Poly::monomial(mono));
    acc += coeff.square() * m;
  }
  return acc;
}

unsigned trace(const Elem& x) {
  need_finite(x.field());
  Elem t = x;
  Elem acc = x;
  for (unsigned i = 1; i < x.field().degree(); ++i) {
    t = t.square();
    acc += t;
  }
  return acc.bits();
}

std::vector<Elem> elements(Field f) {
  const auto& d = need_finite(f);
  std::vector<Elem> out;
  out.reserve(d.order_minus_one + 1);
  for (std::uint32_t b = 0; b <= d.order_minus_one; ++b) out.push_back(Elem::from_bits(f, b));
  return out;
}

}  // namespace qf2
