#include "qf2/dsl.hpp"

#include <algorithm>
#include <cctype>

namespace qf2 {

DslError::DslError(std::string message, std::size_t position)
    : FormError(message + " at offset " + std::to_string(position)),
      message_(std::move(message)),
      position_(position) {}

std::string DslError::render(std::string_view input) const {
  std::string out = message_ + "\n  " + std::string(input) + "\n  ";
  out += std::string(std::min(position_, input.size()), ' ') + "^";
  return out;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip();
    return pos_ >= text_.size();
  }
  char peek() {
    skip();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(std::string_view tok) {
    skip();
    if (text_.substr(pos_, tok.size()) != tok) return false;
    pos_ += tok.size();
    return true;
  }
  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }
  [[noreturn]] void fail(const std::string& msg) {
    skip();
    throw DslError(msg, pos_);
  }
  void finish() {
    if (!at_end()) fail("unexpected trailing input");
  }
  std::size_t pos() {
    skip();
    return pos_;
  }

  std::string identifier() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_ || std::isdigit(static_cast<unsigned char>(text_[start]))) {
      pos_ = start;
      fail("expected a name");
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  std::uint64_t integer() {
    skip();
    const std::size_t start = pos_;
    std::uint64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      if (v > 1'000'000) fail("integer too large");
      v = v * 10 + std::uint64_t(text_[pos_++] - '0');
    }
    if (start == pos_) fail("expected an integer");
    return v;
  }

  Field field() {
    if (accept("GF")) {
      expect("(");
      unsigned m = 0;
      std::uint32_t modulus = 0;
      const std::size_t at = pos();
      const std::uint64_t base = integer();
      if (accept("^")) {
        if (base != 2) fail("field order must be a power of 2");
        m = unsigned(integer());
      } else {
        while (m < 20 && (std::uint64_t{1} << m) < base) ++m;
        if ((std::uint64_t{1} << m) != base) throw DslError("field order must be a power of 2", at);
      }
      if (accept(";")) {
        expect("modulus");
        expect("=");
        skip();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (text_[pos_] == '0' || text_[pos_] == '1')) {
          if (pos_ - start > 30) fail("modulus too long");
          modulus = modulus << 1 | std::uint32_t(text_[pos_++] - '0');
        }
        if (start == pos_) fail("expected modulus bits");
      }
      expect(")");
      try {
        return Field::gf2m(m, modulus);
      } catch (const FieldError& e) {
        throw DslError(e.what(), at);
      }
    }
    if (accept("F2")) {
      expect("(");
      const std::size_t at = pos();
      std::vector<std::string> vars{identifier()};
      while (accept(",")) vars.push_back(identifier());
      expect(")");
      try {
        return Field::rational(vars);
      } catch (const FieldError& e) {
        throw DslError(e.what(), at);
      }
    }
    fail("expected GF(...) or F2(...)");
  }

  Elem elem(Field f) {
    if (f.is_finite()) {
      skip();
      const std::size_t start = pos_;
      std::uint64_t v = 0;
      while (pos_ < text_.size() && std::isxdigit(static_cast<unsigned char>(text_[pos_]))) {
        if (v > 0xFFFFFF) fail("element too large");
        const char c = char(std::tolower(static_cast<unsigned char>(text_[pos_++])));
        v = v * 16 + std::uint64_t(std::isdigit(static_cast<unsigned char>(c)) ? c - '0' : c - 'a' + 10);
      }
      if (start == pos_) fail("expected a hex field element");
      if (v >= f.order()) throw DslError("element exceeds field size", start);
      return Elem::from_bits(f, std::uint32_t(v));
    }
    return sum(f);
  }

  Vector vector(Field f) {
    expect("(");
    Vector v;
    if (accept(")")) return v;
    do v.push_back(elem(f));
    while (accept(","));
    expect(")");
    return v;
  }

  Matrix matrix(Field f) {
    const std::size_t at = pos();
    expect("[");
    std::vector<Vector> rows;
    if (!accept("]")) {
      do {
        expect("[");
        Vector row;
        if (!accept("]")) {
          do row.push_back(elem(f));
          while (accept(","));
          expect("]");
        }
        rows.push_back(std::move(row));
      } while (accept(","));
      expect("]");
    }
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    for (const auto& r : rows)
      if (r.size() != cols) throw DslError("ragged matrix rows", at);
    return Matrix::from_rows(f, cols, rows);
  }

  QuadraticForm form(Field f) {
    QuadraticForm q{f, {}, {}};
    do {
      if (accept("H")) {
        q.pairs.emplace_back(Elem::zero(f), Elem::zero(f));
      } else if (accept("[")) {
        Elem a = elem(f);
        expect(",");
        Elem b = elem(f);
        expect("]");
        q.pairs.emplace_back(std::move(a), std::move(b));
      } else if (accept("<")) {
        if (!accept(">")) {
          do q.diag.push_back(elem(f));
          while (accept(","));
          expect(">");
        }
      } else {
        fail("expected H, [a,b] or <c,...>");
      }
    } while (accept("+") || accept("⊥"));
    return q;
  }

  inv::Factor factor(Field f) {
    if (peek() == '[') return inv::Raw{matrix(f)};
    const std::size_t at = pos();
    const std::string name = identifier();
    if (name == "tau") {
      expect("(");
      Vector u = vector(f);
      expect(";");
      Elem a = elem(f);
      expect(")");
      return inv::Tau{std::move(u), std::move(a)};
    }
    if (name == "null") {
      expect("(");
      NullBlock b;
      b.e1 = vector(f);
      expect(",");
      b.f2 = vector(f);
      expect(",");
      b.e2 = vector(f);
      expect(",");
      b.f1 = vector(f);
      expect(")");
      return inv::Null{std::move(b)};
    }
    if (name == "radswap") {
      expect("(");
      Vector g = vector(f);
      expect(",");
      Vector h = vector(f);
      expect(")");
      return inv::RadSwap{std::move(g), std::move(h)};
    }
    if (name == "block") {
      expect("(");
      expect("tau");
      expect("=");
      Matrix tau = matrix(f);
      expect(",");
      expect("Y");
      expect("=");
      const std::size_t yat = pos();
      Matrix Y = matrix(f);
      expect(",");
      expect("rho");
      expect("=");
      Matrix rho = matrix(f);
      expect(")");
      if (Y.rows() == 0 && Y.cols() == 0) Y = Matrix(f, rho.rows(), tau.rows());
      if (Y.rows() != rho.rows() || Y.cols() != tau.rows()) throw DslError("Y must be dim(rho) x dim(tau)", yat);
      return inv::Block{std::move(tau), std::move(Y), std::move(rho)};
    }
    throw DslError("unknown involution '" + name + "'", at);
  }

 private:
  Elem sum(Field f) {
    Elem v = product(f);
    while (accept("+")) v += product(f);
    return v;
  }
  Elem product(Field f) {
    Elem v = power(f);
    for (;;) {
      if (accept("*")) {
        v *= power(f);
      } else if (peek() == '/') {
        const std::size_t at = pos();
        accept("/");
        const Elem d = power(f);
        if (d.is_zero()) throw DslError("division by zero", at);
        v = v / d;
      } else {
        return v;
      }
    }
  }
  Elem power(Field f) {
    Elem v = atom(f);
    if (accept("^")) v = v.pow(std::int64_t(integer()));
    return v;
  }
  Elem atom(Field f) {
    if (accept("(")) {
      Elem v = sum(f);
      expect(")");
      return v;
    }
    if (accept("0")) return Elem::zero(f);
    if (accept("1")) return Elem::one(f);
    const std::size_t at = pos();
    skip();
    if (!std::isalpha(static_cast<unsigned char>(peek()))) fail("expected a field element");
    const std::string name = identifier();
    const auto& vars = f.vars();
    const auto it = std::find(vars.begin(), vars.end(), name);
    if (it == vars.end()) throw DslError("unknown variable '" + name + "'", at);
    return Elem::variable(f, std::size_t(it - vars.begin()));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

template <class T, class Fn>
T parse_all(std::string_view text, Fn fn) {
  Parser p(text);
  T v = fn(p);
  p.finish();
  return v;
}

Vector radical_coordinates(const QuadraticForm& f, const Vector& v) {
  if (v.size() == f.s()) return v;
  if (v.size() != f.dim()) throw FormError("radswap vector has wrong length");
  for (std::size_t i = 0; i < 2 * f.r(); ++i)
    if (!v[i].is_zero()) throw FormError("radswap vector is not in the radical");
  return Vector(v.begin() + std::ptrdiff_t(2 * f.r()), v.end());
}

}  // namespace

Field parse_field(std::string_view text) {
  return parse_all<Field>(text, [](Parser& p) { return p.field(); });
}

Elem parse_elem(Field f, std::string_view text) {
  return parse_all<Elem>(text, [f](Parser& p) { return p.elem(f); });
}

QuadraticForm parse_form(Field f, std::string_view text) {
  return parse_all<QuadraticForm>(text, [f](Parser& p) { return p.form(f); });
}

Vector parse_vector(Field f, std::string_view text) {
  return parse_all<Vector>(text, [f](Parser& p) { return p.vector(f); });
}

Matrix parse_matrix(Field f, std::string_view text) {
  return parse_all<Matrix>(text, [f](Parser& p) { return p.matrix(f); });
}

InvolutionExpr parse_involution(Field f, std::string_view text) {
  return parse_all<InvolutionExpr>(text, [f](Parser& p) {
    InvolutionExpr e;
    if (p.accept("id")) return e;
    do e.factors.push_back(p.factor(f));
    while (p.accept("*"));
    return e;
  });
}

std::string format_form(const QuadraticForm& f) {
  std::vector<std::string> parts;
  for (const auto& [a, b] : f.pairs)
    parts.push_back(a.is_zero() && b.is_zero() ? "H" : "[" + a.to_string() + "," + b.to_string() + "]");
  if (!f.diag.empty() || parts.empty()) {
    std::string d = "<";
    for (std::size_t i = 0; i < f.diag.size(); ++i) d += (i ? "," : "") + f.diag[i].to_string();
    parts.push_back(d + ">");
  }
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " + " : "") + parts[i];
  return out;
}

std::string format_matrix(const Matrix& m) { return m.rows() == 0 ? "[]" : m.to_string(); }

std::string format_involution(const InvolutionExpr& e) {
  if (e.factors.empty()) return "id";
  std::string out;
  for (const auto& fac : e.factors) {
    if (!out.empty()) out += " * ";
    if (auto t = std::get_if<inv::Tau>(&fac)) {
      out += "tau(" + to_string(t->u) + ";" + t->a.to_string() + ")";
    } else if (auto n = std::get_if<inv::Null>(&fac)) {
      const auto& b = n->block;
      out += "null(" + to_string(b.e1) + "," + to_string(b.f2) + "," + to_string(b.e2) + "," + to_string(b.f1) + ")";
    } else if (auto r = std::get_if<inv::RadSwap>(&fac)) {
      out += "radswap(" + to_string(r->g) + "," + to_string(r->h) + ")";
    } else if (auto b = std::get_if<inv::Block>(&fac)) {
      out += "block(tau=" + format_matrix(b->tau) + ", Y=" + format_matrix(b->Y) + ", rho=" + format_matrix(b->rho) +
             ")";
    } else {
      out += format_matrix(std::get<inv::Raw>(fac).m);
    }
  }
  return out;
}

Matrix evaluate(const QuadraticForm& f, const InvolutionExpr& e) {
  const std::size_t n = f.dim();
  Matrix out = Matrix::identity(f.field, n);
  for (const auto& fac : e.factors) {
    Matrix m = Matrix::identity(f.field, n);
    if (auto t = std::get_if<inv::Tau>(&fac)) {
      m = transvection_matrix(f, t->u, t->a);
    } else if (auto nb = std::get_if<inv::Null>(&fac)) {
      m = null_block_matrix(f, nb->block);
    } else if (auto r = std::get_if<inv::RadSwap>(&fac)) {
      const Vector g = radical_coordinates(f, r->g), h = radical_coordinates(f, r->h);
      std::vector<Vector> cands{g, h};
      for (std::size_t i = 0; i < f.s(); ++i) cands.push_back(unit_vector(f.field, f.s(), i));
      auto basis = independent_subset(f.field, cands);
      if (basis.size() < 2 || basis[0] != g || basis[1] != h) throw FormError("radswap vectors are dependent");
      RadicalInvolution ri{{{g, h}}, std::vector<Vector>(basis.begin() + 2, basis.end())};
      m = to_matrix(f, ri);
    } else if (auto b = std::get_if<inv::Block>(&fac)) {
      if (b->tau.rows() != 2 * f.r() || b->rho.rows() != f.s()) throw FormError("block shapes do not match the form");
      m = to_matrix(BlockInvolution{b->tau, b->Y, b->rho});
    } else {
      m = std::get<inv::Raw>(fac).m;
      if (m.rows() != n || m.cols() != n) throw FormError("matrix size does not match the form");
    }
    out = out * m;
  }
  return out;
}

bool operator==(const InvolutionExpr& a, const InvolutionExpr& b) {
  if (a.factors.size() != b.factors.size()) return false;
  for (std::size_t i = 0; i < a.factors.size(); ++i) {
    const auto& x = a.factors[i];
    const auto& y = b.factors[i];
    if (x.index() != y.index()) return false;
    bool same = false;
    if (auto t = std::get_if<inv::Tau>(&x)) {
      const auto& u = std::get<inv::Tau>(y);
      same = t->u == u.u && t->a == u.a;
    } else if (auto n = std::get_if<inv::Null>(&x)) {
      const auto& p = n->block;
      const auto& q = std::get<inv::Null>(y).block;
      same = p.e1 == q.e1 && p.f2 == q.f2 && p.e2 == q.e2 && p.f1 == q.f1;
    } else if (auto r = std::get_if<inv::RadSwap>(&x)) {
      const auto& s = std::get<inv::RadSwap>(y);
      same = r->g == s.g && r->h == s.h;
    } else if (auto bl = std::get_if<inv::Block>(&x)) {
      const auto& c = std::get<inv::Block>(y);
      same = bl->tau == c.tau && bl->Y == c.Y && bl->rho == c.rho;
    } else {
      same = std::get<inv::Raw>(x).m == std::get<inv::Raw>(y).m;
    }
    if (!same) return false;
  }
  return true;
}

}  // namespace qf2
