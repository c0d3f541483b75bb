#include "qf2/oracle.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "qf2/involutions.hpp"

namespace qf2 {

namespace {

using PackedSet = std::unordered_set<Packed, PackedHash>;

using Wide = unsigned __int128;

std::uint64_t clamp(Wide x) {
  return x > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                       : std::uint64_t(x);
}

Wide power(Wide q, std::size_t e) {
  Wide out = 1;
  for (std::size_t i = 0; i < e; ++i) out *= q;
  return out;
}

Wide gl_order(Wide q, std::size_t n) {
  Wide out = 1;
  for (std::size_t i = 0; i < n; ++i) out *= power(q, n) - power(q, i);
  return out;
}

Wide sp_order(Wide q, std::size_t r) {
  Wide out = power(q, r * r);
  for (std::size_t i = 1; i <= r; ++i) out *= power(q, 2 * i) - 1;
  return out;
}

// |O^e_{2r}(q)| with e = +1 for Arf invariant 0.
Wide o_order(Wide q, std::size_t r, bool plus) {
  if (r == 0) return 1;
  Wide out = 2 * power(q, r * (r - 1)) * (plus ? power(q, r) - 1 : power(q, r) + 1);
  for (std::size_t i = 1; i < r; ++i) out *= power(q, 2 * i) - 1;
  return out;
}

void check_enumerable(const QuadraticForm& f) {
  if (!f.field.is_finite()) throw FormError("enumeration needs a finite field");
  if (f.field.degree() > 4) throw FormError("enumeration supports GF(2^m) with m <= 4");
  if (f.dim() > 8) throw FormError("enumeration supports dimension <= 8");
}

bool is_hh_over_f2(const QuadraticForm& f) {
  return f.field.order() == 2 && f.r() == 2 && arf_invariant(nonsingular_part(f)) == 0;
}

std::vector<Vector> every_vector(const QuadraticForm& f) {
  std::vector<Vector> out;
  for (std::uint64_t i = 0;; ++i) {
    auto v = nth_vector(f.field, f.dim(), i);
    if (!v) break;
    out.push_back(std::move(*v));
  }
  return out;
}

class Closure {
 public:
  Closure(const PackedCodec& codec, std::size_t cap) : codec_(codec), cap_(cap) {}

  PackedSet run(const std::vector<Packed>& gens) const {
    PackedSet seen{codec_.identity()};
    std::vector<Packed> frontier{codec_.identity()};
    while (!frontier.empty()) {
      std::vector<Packed> next;
      for (const auto& x : frontier)
        for (const auto& g : gens) {
          const Packed y = codec_.multiply(x, g);
          if (!seen.insert(y).second) continue;
          if (seen.size() > cap_) throw CapExceeded(seen.size());
          next.push_back(y);
        }
      frontier = std::move(next);
    }
    return seen;
  }

 private:
  const PackedCodec& codec_;
  std::size_t cap_;
};

// Generators of the maps fixing V_B and preserving q on rad(V), written in a
// basis d_1..d_j of the defect extended by at most one anisotropic vector;
// with shears, also e_c -> e_c + c d_a for c in V_B.
std::vector<Matrix> defect_generators(const QuadraticForm& f, bool shears) {
  const Field k = f.field;
  const std::size_t n = f.dim(), nb = 2 * f.r();
  std::vector<Vector> cols;
  for (std::size_t c = 0; c < nb; ++c) cols.push_back(unit_vector(k, n, c));
  const auto def = row_reduce(k, defect_subspace(f));
  cols.insert(cols.end(), def.begin(), def.end());
  const std::size_t j = def.size();
  for (std::size_t i = nb; i < n && cols.size() < n; ++i)
    if (!in_span(k, cols, unit_vector(k, n, i))) cols.push_back(unit_vector(k, n, i));
  const Matrix P = Matrix::from_columns(k, n, cols);
  const Matrix Pinv = *P.inverse();
  std::vector<Matrix> out;
  auto add = [&](std::size_t row, std::size_t col, const Elem& c) {
    Matrix e = Matrix::identity(k, n);
    e(row, col) += c;
    out.push_back(P * e * Pinv);
  };
  for (std::uint32_t bits = 1; bits < k.order(); ++bits) {
    const Elem c = Elem::from_bits(k, bits);
    for (std::size_t a = 0; a < j; ++a) {
      for (std::size_t b = 0; b < j; ++b)
        if (a != b) add(nb + b, nb + a, c);
      if (!c.is_one()) add(nb + a, nb + a, c + Elem::one(k));
      for (std::size_t x = nb + j; x < n; ++x) add(nb + a, x, c);
      if (shears)
        for (std::size_t x = 0; x < nb; ++x) add(nb + a, x, c);
    }
  }
  return out;
}

std::vector<Matrix> closure_generators(const QuadraticForm& f, GroupMode mode) {
  const Field k = f.field;
  std::vector<Matrix> out;
  if (mode == GroupMode::RadicalOnly) return defect_generators(f, false);
  for (const auto& u : every_vector(f)) {
    if (in_radical(f, u)) continue;
    if (mode == GroupMode::Orthogonal) {
      if (!eval_q(f, u).is_zero()) out.push_back(orthogonal_transvection(f, u));
    } else {
      for (std::uint32_t a = 1; a < k.order(); ++a) out.push_back(transvection_matrix(f, u, Elem::from_bits(k, a)));
    }
  }
  if (mode == GroupMode::Orthogonal && f.s() > 0) {
    const auto extra = defect_generators(f, true);
    out.insert(out.end(), extra.begin(), extra.end());
  }
  return out;
}

std::vector<Packed> dedupe(const PackedCodec& codec, const std::vector<Matrix>& ms) {
  std::vector<Packed> out;
  for (const auto& m : ms) out.push_back(codec.pack(m));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  out.erase(std::remove(out.begin(), out.end(), codec.identity()), out.end());
  return out;
}

// Isometries found column by column from the q and B constraints.
std::vector<Packed> gl_filter(const QuadraticForm& f, GroupMode mode, const PackedCodec& codec, std::size_t cap) {
  const Field k = f.field;
  const std::size_t n = f.dim(), nb = 2 * f.r();
  const auto vecs = every_vector(f);
  const std::size_t nv = vecs.size();
  std::vector<unsigned> qv(nv);
  std::vector<std::vector<unsigned>> bt(nv, std::vector<unsigned>(nv));
  for (std::size_t i = 0; i < nv; ++i) {
    qv[i] = eval_q(f, vecs[i]).bits();
    for (std::size_t j = 0; j < nv; ++j) bt[i][j] = eval_B(f, vecs[i], vecs[j]).bits();
  }
  std::vector<std::size_t> unit(n);
  for (std::size_t j = 0; j < n; ++j)
    unit[j] = std::size_t(std::find(vecs.begin(), vecs.end(), unit_vector(k, n, j)) - vecs.begin());

  std::vector<std::vector<std::size_t>> candidates(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < nv; ++i) {
      if (mode == GroupMode::RadicalOnly) {
        if (j < nb ? i == unit[j] : (in_radical(f, vecs[i]) && qv[i] == qv[unit[j]])) candidates[j].push_back(i);
      } else if (mode == GroupMode::Symplectic || qv[i] == qv[unit[j]]) {
        candidates[j].push_back(i);
      }
    }

  std::vector<Packed> out;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t)> extend = [&](std::size_t j) {
    if (j == n) {
      std::vector<Vector> cols;
      for (auto i : chosen) cols.push_back(vecs[i]);
      const Matrix m = Matrix::from_columns(k, n, cols);
      if (m.rank() != n) return;
      out.push_back(codec.pack(m));
      if (out.size() > cap) throw CapExceeded(out.size());
      return;
    }
    for (auto i : candidates[j]) {
      bool ok = true;
      for (std::size_t t = 0; t < j && ok; ++t) ok = bt[chosen[t]][i] == bt[unit[t]][unit[j]];
      if (!ok) continue;
      chosen.push_back(i);
      extend(j + 1);
      chosen.pop_back();
    }
  };
  extend(0);
  std::sort(out.begin(), out.end());
  return out;
}

// Greedy generating set: add each element not yet generated.
std::vector<Packed> generating_set(const PackedCodec& codec, const std::vector<Packed>& elements) {
  std::vector<Packed> gens;
  PackedSet generated{codec.identity()};
  const Closure closure(codec, elements.size());
  for (const auto& x : elements) {
    if (generated.count(x)) continue;
    gens.push_back(x);
    generated = closure.run(gens);
  }
  return gens;
}

}  // namespace

std::string to_string(GroupMode m) {
  switch (m) {
    case GroupMode::Orthogonal:
      return "orthogonal";
    case GroupMode::Symplectic:
      return "symplectic";
    case GroupMode::RadicalOnly:
      return "radical-only";
  }
  return "?";
}

std::string to_string(GroupMethod m) {
  switch (m) {
    case GroupMethod::Auto:
      return "auto";
    case GroupMethod::TransvectionClosure:
      return "transvection-closure";
    case GroupMethod::GlFilter:
      return "gl-filter";
  }
  return "?";
}

std::optional<GroupMode> parse_group_mode(const std::string& s) {
  for (auto m : {GroupMode::Orthogonal, GroupMode::Symplectic, GroupMode::RadicalOnly})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

std::size_t PackedHash::operator()(const Packed& p) const {
  return std::hash<std::string_view>{}(
      std::string_view(reinterpret_cast<const char*>(p.bytes.data()), p.bytes.size()));
}

PackedCodec::PackedCodec(Field f, std::size_t n) : field_(f), n_(n), m_(f.is_finite() ? f.degree() : 0) {
  if (!f.is_finite() || m_ > 4 || n > 8) throw FormError("packed matrices need GF(2^m), m <= 4, dimension <= 8");
  for (std::uint32_t a = 0; a < f.order(); ++a)
    for (std::size_t src = 0; src < m_; ++src) {
      const unsigned prod = (Elem::from_bits(f, a) * Elem::from_bits(f, 1u << src)).bits();
      for (std::size_t p = 0; p < m_; ++p)
        if (prod >> p & 1) masks_[a][p] |= std::uint8_t(1u << src);
    }
}

Packed PackedCodec::pack(const Matrix& a) const {
  if (a.rows() != n_ || a.cols() != n_ || a.field() != field_) throw FormError("matrix does not fit the codec");
  Packed p;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      const unsigned bits = a(i, j).bits();
      for (std::size_t b = 0; b < m_; ++b)
        if (bits >> b & 1) p.bytes[i * m_ + b] |= std::uint8_t(1u << j);
    }
  return p;
}

unsigned PackedCodec::entry(const Packed& p, std::size_t i, std::size_t j) const {
  unsigned bits = 0;
  for (std::size_t b = 0; b < m_; ++b) bits |= unsigned(p.bytes[i * m_ + b] >> j & 1) << b;
  return bits;
}

Matrix PackedCodec::unpack(const Packed& p) const {
  Matrix a(field_, n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) a(i, j) = Elem::from_bits(field_, entry(p, i, j));
  return a;
}

Packed PackedCodec::multiply(const Packed& a, const Packed& b) const {
  Packed c;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      const unsigned x = entry(a, i, j);
      if (!x) continue;
      for (std::size_t p = 0; p < m_; ++p) {
        const std::uint8_t mask = masks_[x][p];
        for (std::size_t src = 0; src < m_; ++src)
          if (mask >> src & 1) c.bytes[i * m_ + p] ^= b.bytes[j * m_ + src];
      }
    }
  return c;
}

Packed PackedCodec::identity() const { return pack(Matrix::identity(field_, n_)); }

CapExceeded::CapExceeded(std::size_t partial)
    : FormError("enumeration cap exceeded after " + std::to_string(partial) + " elements"), partial(partial) {}

std::optional<std::size_t> EnumeratedGroup::find(const Packed& p) const {
  const auto it = std::lower_bound(elements.begin(), elements.end(), p);
  if (it == elements.end() || !(*it == p)) return std::nullopt;
  return std::size_t(it - elements.begin());
}

std::uint64_t predicted_order(const QuadraticForm& f, GroupMode mode) {
  if (!f.field.is_finite()) throw FormError("group orders need a finite field");
  const Wide q = f.field.order();
  const std::size_t r = f.r(), s = f.s(), j = defect(f);
  switch (mode) {
    case GroupMode::RadicalOnly:
      return clamp(gl_order(q, j) * power(q, j * (s - j)));
    case GroupMode::Symplectic:
      return clamp(sp_order(q, r) * gl_order(q, s) * power(q, 2 * r * s));
    case GroupMode::Orthogonal: {
      const Wide base =
          s == j ? o_order(q, r, r == 0 || arf_invariant(nonsingular_part(f)) == 0) : sp_order(q, r);
      return clamp(base * gl_order(q, j) * power(q, j * (2 * r + s - j)));
    }
  }
  return 0;
}

EnumeratedGroup enumerate_group(const QuadraticForm& f, GroupMode mode, std::size_t cap, GroupMethod method) {
  check_enumerable(f);
  if (mode == GroupMode::Symplectic && f.s() != 0) throw FormError("symplectic mode needs a nonsingular form");
  if (method == GroupMethod::Auto)
    method = mode == GroupMode::RadicalOnly || (mode == GroupMode::Orthogonal && is_hh_over_f2(f))
                 ? GroupMethod::GlFilter
                 : GroupMethod::TransvectionClosure;
  EnumeratedGroup g{f, mode, method, PackedCodec(f.field, f.dim()), {}, {}};
  std::vector<Packed> gens;
  if (method == GroupMethod::TransvectionClosure) {
    gens = dedupe(g.codec, closure_generators(f, mode));
    const PackedSet all = Closure(g.codec, cap).run(gens);
    g.elements.assign(all.begin(), all.end());
    std::sort(g.elements.begin(), g.elements.end());
  } else {
    g.elements = gl_filter(f, mode, g.codec, cap);
    gens = generating_set(g.codec, g.elements);
  }
  for (const auto& p : gens) g.generators.push_back(g.codec.unpack(p));
  return g;
}

std::vector<Matrix> list_involutions(const EnumeratedGroup& g) {
  const Packed id = g.codec.identity();
  std::vector<Matrix> out;
  for (const auto& x : g.elements)
    if (!(x == id) && g.codec.multiply(x, x) == id) out.push_back(g.codec.unpack(x));
  return out;
}

OrbitPartition orbit_partition(const EnumeratedGroup& g, const std::vector<Matrix>& elems) {
  std::unordered_map<Packed, std::size_t, PackedHash> index;
  std::vector<Packed> packed;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const Packed p = g.codec.pack(elems[i]);
    if (!g.find(p)) throw FormError("element is not in the group");
    packed.push_back(p);
    index.emplace(p, i);
  }
  std::vector<std::pair<Packed, Packed>> conj;
  for (const auto& m : g.generators) conj.emplace_back(g.codec.pack(m), g.codec.pack(*m.inverse()));

  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> label(elems.size(), none);
  std::vector<std::vector<std::size_t>> orbits;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (label[i] != none) continue;
    const std::size_t id = orbits.size();
    orbits.emplace_back();
    PackedSet seen{packed[i]};
    std::vector<Packed> frontier{packed[i]};
    while (!frontier.empty()) {
      std::vector<Packed> next;
      for (const auto& x : frontier) {
        const auto it = index.find(x);
        if (it != index.end() && label[it->second] == none) {
          label[it->second] = id;
          orbits[id].push_back(it->second);
        }
        for (const auto& [a, ainv] : conj) {
          const Packed y = g.codec.multiply(g.codec.multiply(a, x), ainv);
          if (seen.insert(y).second) next.push_back(y);
        }
      }
      frontier = std::move(next);
    }
  }
  for (auto& o : orbits)
    std::sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) { return packed[a] < packed[b]; });
  std::sort(orbits.begin(), orbits.end(),
            [&](const auto& a, const auto& b) { return packed[a[0]] < packed[b[0]]; });
  OrbitPartition out;
  for (auto& o : orbits) {
    out.representatives.push_back(o[0]);
    std::sort(o.begin(), o.end());
    out.orbits.push_back(std::move(o));
  }
  return out;
}

std::vector<std::vector<std::size_t>> canonical_partition(std::vector<std::vector<std::size_t>> classes) {
  for (auto& c : classes) std::sort(c.begin(), c.end());
  std::sort(classes.begin(), classes.end());
  return classes;
}

}  // namespace qf2
