#include "qf2/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace qf2 {

unsigned total_degree(const Monomial& m) {
  unsigned d = 0;
  for (auto e : m) d += e;
  return d;
}

bool grlex_greater(const Monomial& a, const Monomial& b) {
  const unsigned da = total_degree(a);
  const unsigned db = total_degree(b);
  if (da != db) return da > db;
  return a > b;
}

namespace {

bool divides(const Monomial& d, const Monomial& m) {
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (d[i] > m[i]) return false;
  return true;
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial r{};
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    const unsigned e = unsigned(a[i]) + unsigned(b[i]);
    if (e > 255) throw std::overflow_error("polynomial exponent overflow");
    r[i] = static_cast<std::uint8_t>(e);
  }
  return r;
}

Monomial mono_div(const Monomial& a, const Monomial& b) {
  Monomial r{};
  for (std::size_t i = 0; i < kMaxVars; ++i) r[i] = static_cast<std::uint8_t>(a[i] - b[i]);
  return r;
}

// Sorts descending and cancels repeated monomials in pairs (coefficients in F2).
std::vector<Monomial> normalize_terms(std::vector<Monomial> t) {
  std::sort(t.begin(), t.end(), grlex_greater);
  std::vector<Monomial> out;
  out.reserve(t.size());
  for (std::size_t i = 0; i < t.size();) {
    std::size_t j = i;
    while (j < t.size() && t[j] == t[i]) ++j;
    if ((j - i) % 2 == 1) out.push_back(t[i]);
    i = j;
  }
  return out;
}

}  // namespace

Poly Poly::one() { return Poly(std::vector<Monomial>{Monomial{}}); }

Poly Poly::monomial(const Monomial& m) { return Poly(std::vector<Monomial>{m}); }

Poly Poly::variable(std::size_t index) {
  if (index >= kMaxVars) throw std::out_of_range("variable index");
  Monomial m{};
  m[index] = 1;
  return monomial(m);
}

Poly Poly::from_terms(std::vector<Monomial> terms) { return Poly(normalize_terms(std::move(terms))); }

bool Poly::is_one() const { return terms_.size() == 1 && terms_[0] == Monomial{}; }

unsigned Poly::degree() const { return terms_.empty() ? 0 : total_degree(terms_.front()); }

unsigned Poly::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& m : terms_) d = std::max<unsigned>(d, m[var]);
  return d;
}

Poly Poly::coeff_in(std::size_t var, unsigned k) const {
  std::vector<Monomial> out;
  for (auto m : terms_) {
    if (m[var] != k) continue;
    m[var] = 0;
    out.push_back(m);
  }
  // Dropping one variable keeps distinct monomials distinct, but may reorder.
  std::sort(out.begin(), out.end(), grlex_greater);
  return Poly(std::move(out));
}

bool Poly::is_square() const {
  for (const auto& m : terms_)
    for (auto e : m)
      if (e % 2) return false;
  return true;
}

Poly Poly::frobenius_root() const {
  std::vector<Monomial> out;
  out.reserve(terms_.size());
  for (auto m : terms_) {
    for (auto& e : m) {
      if (e % 2) throw std::domain_error("polynomial is not a square");
      e /= 2;
    }
    out.push_back(m);
  }
  return Poly(std::move(out));
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<Monomial> out;
  out.reserve(a.terms_.size() + b.terms_.size());
  auto i = a.terms_.begin(), j = b.terms_.begin();
  while (i != a.terms_.end() && j != b.terms_.end()) {
    if (*i == *j) {
      ++i;
      ++j;
    } else if (grlex_greater(*i, *j)) {
      out.push_back(*i++);
    } else {
      out.push_back(*j++);
    }
  }
  out.insert(out.end(), i, a.terms_.end());
  out.insert(out.end(), j, b.terms_.end());
  return Poly(std::move(out));
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Monomial> t;
  t.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) t.push_back(mono_mul(x, y));
  return Poly(normalize_terms(std::move(t)));
}

Poly Poly::times_monomial(const Monomial& m) const {
  std::vector<Monomial> out;
  out.reserve(terms_.size());
  for (const auto& x : terms_) out.push_back(mono_mul(x, m));
  return Poly(std::move(out));  // multiplication by a monomial preserves grlex order
}

std::optional<Poly> Poly::divide_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  Poly rem = a;
  std::vector<Monomial> quot;
  const Monomial& lb = b.leading();
  while (!rem.is_zero()) {
    const Monomial& lr = rem.leading();
    if (!divides(lb, lr)) return std::nullopt;
    const Monomial q = mono_div(lr, lb);
    quot.push_back(q);
    rem = rem + b.times_monomial(q);
  }
  return Poly(std::move(quot));  // quotient terms are produced in decreasing order
}

namespace {

unsigned active_vars(const Poly& p) {
  unsigned v = 0;
  for (const auto& m : p.terms())
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if (m[i]) v = std::max<unsigned>(v, unsigned(i) + 1);
  return v;
}

Poly gcd_rec(const Poly& a, const Poly& b, unsigned nvars);

// gcd of the coefficients of p viewed as a polynomial in variable x.
Poly content(const Poly& p, std::size_t x) {
  Poly c;
  const unsigned d = p.degree_in(x);
  for (unsigned k = 0; k <= d; ++k) {
    Poly ck = p.coeff_in(x, k);
    if (ck.is_zero()) continue;
    c = gcd_rec(c, ck, unsigned(x));
    if (c.is_one()) break;
  }
  return c;
}

Poly exact(const Poly& a, const Poly& b) {
  auto q = Poly::divide_exact(a, b);
  if (!q) throw std::logic_error("internal: expected exact polynomial division");
  return *q;
}

Poly primitive_part(const Poly& p, std::size_t x) {
  if (p.is_zero()) return p;
  return exact(p, content(p, x));
}

Monomial var_power(std::size_t x, unsigned k) {
  Monomial m{};
  m[x] = static_cast<std::uint8_t>(k);
  return m;
}

// Sparse pseudo-remainder of a by b with respect to variable x.
Poly pseudo_remainder(Poly a, const Poly& b, std::size_t x) {
  const unsigned db = b.degree_in(x);
  const Poly lb = b.coeff_in(x, db);
  while (!a.is_zero()) {
    const unsigned da = a.degree_in(x);
    if (da < db) break;
    const Poly la = a.coeff_in(x, da);
    a = lb * a + (la * b).times_monomial(var_power(x, da - db));
  }
  return a;
}

Poly gcd_rec(const Poly& a, const Poly& b, unsigned nvars) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (nvars == 0) return Poly::one();
  const std::size_t x = nvars - 1;
  const Poly ca = content(a, x);
  const Poly cb = content(b, x);
  const Poly c = gcd_rec(ca, cb, nvars - 1);
  Poly p = exact(a, ca);
  Poly q = exact(b, cb);
  if (p.degree_in(x) < q.degree_in(x)) std::swap(p, q);
  while (!q.is_zero()) {
    Poly r = pseudo_remainder(p, q, x);
    p = std::move(q);
    q = primitive_part(r, x);
  }
  return c * p;
}

}  // namespace

Poly Poly::gcd(const Poly& a, const Poly& b) {
  return gcd_rec(a, b, std::max(active_vars(a), active_vars(b)));
}

std::string Poly::to_string(std::span<const std::string> vars) const {
  if (terms_.empty()) return "0";
  std::string out;
  // Print in increasing order: "1 + t1 + t1^2*t2".
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!out.empty()) out += "+";
    std::string mono;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      if ((*it)[i] == 0) continue;
      if (i >= vars.size()) throw std::logic_error("monomial uses undeclared variable");
      if (!mono.empty()) mono += "*";
      mono += vars[i];
      if ((*it)[i] > 1) mono += "^" + std::to_string((*it)[i]);
    }
    out += mono.empty() ? "1" : mono;
  }
  return out;
}

std::vector<Poly> polys_up_to(std::size_t nvars, unsigned degree, std::size_t limit) {
  std::vector<Monomial> monos;
  Monomial m{};
  for (unsigned a = 0; a <= degree; ++a)
    for (unsigned b = 0; b <= (nvars > 1 ? degree - a : 0); ++b)
      for (unsigned c = 0; c <= (nvars > 2 ? degree - a - b : 0); ++c) {
        m = {std::uint8_t(a), std::uint8_t(b), std::uint8_t(c)};
        monos.push_back(m);
      }
  std::vector<Poly> out;
  const std::size_t count = std::size_t{1} << monos.size();
  for (std::size_t mask = 0; mask < count; ++mask) {
    std::vector<Monomial> terms;
    for (std::size_t i = 0; i < monos.size(); ++i)
      if (mask >> i & 1) terms.push_back(monos[i]);
    out.push_back(Poly::from_terms(std::move(terms)));
    if (out.size() >= limit) break;
  }
  return out;
}

}  // namespace qf2
