#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <random>

#include "qf2/quadratic_form.hpp"
#include "test_util.hpp"

using namespace qf2;

namespace {

const Field F2 = Field::gf2m(1);
const Field F4 = Field::gf2m(2);

Elem e(Field f, std::uint32_t bits) { return Elem::from_bits(f, bits); }

QuadraticForm pairs_form(Field f, std::vector<std::pair<std::uint32_t, std::uint32_t>> ps,
                         std::vector<std::uint32_t> ds = {}) {
  QuadraticForm q{f, {}, {}};
  for (auto [a, b] : ps) q.pairs.emplace_back(e(f, a), e(f, b));
  for (auto c : ds) q.diag.push_back(e(f, c));
  return q;
}

// Largest subspace on which q vanishes, by depth-first search over bases
// listed in increasing scan order.
std::size_t max_singular_dim(const QuadraticForm& q) {
  std::vector<Vector> singular;
  for (const auto& v : test::all_vectors(q.field, q.dim()))
    if (!is_zero(v) && eval_q(q, v).is_zero()) singular.push_back(v);
  std::size_t best = 0;
  std::vector<Vector> basis;
  std::function<void(std::size_t)> dfs = [&](std::size_t from) {
    best = std::max(best, basis.size());
    for (std::size_t i = from; i < singular.size(); ++i) {
      const Vector& v = singular[i];
      bool ok = basis.empty() || !in_span(q.field, basis, v);
      for (const auto& b : basis) ok = ok && eval_B(q, v, b).is_zero();
      if (!ok) continue;
      basis.push_back(v);
      dfs(i + 1);
      basis.pop_back();
    }
  };
  dfs(0);
  return best;
}

bool gl_isometric(const QuadraticForm& a, const QuadraticForm& b) {
  return test::for_each_matrix(a.field, a.dim(), [&](const Matrix& m) {
    if (!m.inverse()) return false;
    for (const auto& v : test::all_vectors(a.field, a.dim()))
      if (!(eval_q(b, m * v) == eval_q(a, v))) return false;
    return true;
  });
}

}  // namespace

TEST_CASE("eval_q examples") {
  const QuadraticForm h = QuadraticForm::hyperbolic(F2, 1);
  CHECK(eval_q(h, zero_vector(F2, 2)).is_zero());
  CHECK(eval_q(h, Vector{e(F2, 1), e(F2, 1)}).is_one());
  const Field ft = Field::rational({"t1", "t2"});
  const Elem t2 = Elem::variable(ft, 1);
  const QuadraticForm d{ft, {}, {Elem::one(ft), t2}};
  CHECK(eval_q(d, unit_vector(ft, 2, 0)).is_one());
  CHECK(eval_q(d, unit_vector(ft, 2, 1)) == t2);
  CHECK_THROWS_AS(eval_q(d, zero_vector(ft, 3)), FormError);
}

TEST_CASE("B is the polarization, bilinear and alternating") {
  std::mt19937_64 rng(1);
  for (int it = 0; it < 200; ++it) {
    const Field f = it % 2 ? F4 : F2;
    const QuadraticForm q = test::random_form(f, rng, 1 + rng() % 2, rng() % 3);
    const auto u = test::random_vector(f, rng, q.dim()), v = test::random_vector(f, rng, q.dim()),
               w = test::random_vector(f, rng, q.dim());
    CHECK(eval_B(q, u, u).is_zero());
    CHECK(eval_B(q, u + v, w) == eval_B(q, u, w) + eval_B(q, v, w));
    CHECK(eval_B(q, u, w) == eval_q(q, u + w) + eval_q(q, u) + eval_q(q, w));
    const Elem c = test::random_elem(f, rng);
    CHECK(eval_q(q, c * u) == c * c * eval_q(q, u));
  }
  const QuadraticForm q = pairs_form(F2, {{1, 0}}, {1});
  CHECK(eval_B(q, unit_vector(F2, 3, 0), unit_vector(F2, 3, 1)).is_one());
  for (const auto& w : test::all_vectors(F2, 3)) CHECK(eval_B(q, unit_vector(F2, 3, 2), w).is_zero());
}

TEST_CASE("witt_decompose examples") {
  auto h = witt_decompose(QuadraticForm::hyperbolic(F2, 1));
  CHECK(h.witt_index == 1);
  CHECK(h.nonsingular_aniso.r() == 0);
  CHECK(h.defect == 0);

  auto n = witt_decompose(pairs_form(F2, {{1, 1}}));
  CHECK(n.witt_index == 0);
  CHECK(n.nonsingular_aniso == pairs_form(F2, {{1, 1}}));

  auto d = witt_decompose(pairs_form(F2, {}, {0, 0, 1}));
  CHECK(d.witt_index == 0);
  CHECK(d.defect == 2);
  CHECK(d.singular_aniso.diag == std::vector<Elem>{e(F2, 1)});

  auto g4 = witt_decompose(pairs_form(F4, {{1, 1}}));
  CHECK(g4.witt_index == 1);
  CHECK(g4.defect == 0);

  auto n4 = witt_decompose(pairs_form(F4, {{1, 2}}));
  CHECK(n4.witt_index == 0);
  CHECK(n4.nonsingular_aniso == pairs_form(F4, {{1, 2}}));

  auto mixed = witt_decompose(pairs_form(F2, {{1, 1}}, {1}));  // e + g is isotropic
  CHECK(mixed.witt_index == 1);
  CHECK(mixed.singular_aniso.s() == 1);
}

TEST_CASE("witt_decompose agrees with the brute-force singular-subspace oracle") {
  std::mt19937_64 rng(2);
  for (int it = 0; it < 120; ++it) {
    const Field f = it % 3 == 0 ? F4 : F2;
    const std::size_t r = f == F4 ? rng() % 2 + (rng() % 2) : rng() % 3;
    const std::size_t s = (f == F4 ? 3 : 5) - 2 * std::min<std::size_t>(r, 1) - (rng() % 2);
    const QuadraticForm q = test::random_form(f, rng, r, std::min<std::size_t>(s, f == F4 ? 3 - 2 * r : 5 - 2 * r));
    if (q.dim() == 0) continue;
    const auto w = witt_decompose(q);
    CAPTURE(q.dim());
    CHECK(w.conclusive);
    CHECK(w.witt_index + w.defect == max_singular_dim(q));
    const QuadraticForm re = w.reassembled();
    CHECK(is_isometry_between(re, q, w.basis));
    // Anisotropic core: no nonzero vector of N + S has zero norm.
    const QuadraticForm core = orthogonal_sum(w.nonsingular_aniso, w.singular_aniso);
    for (const auto& v : test::all_vectors(f, core.dim()))
      if (!is_zero(v)) CHECK_FALSE(eval_q(core, v).is_zero());
    if (q.s() == 0) CHECK(w.witt_index == q.r() - arf_invariant(q));
  }
}

TEST_CASE("rewrite_isometry examples and substitution maps") {
  const Field ft = Field::rational({"a", "b", "c", });
  const Elem a = Elem::variable(ft, 0), b = Elem::variable(ft, 1), c = Elem::variable(ft, 2);
  const QuadraticForm ab{ft, {{a, b}}, {}};
  CHECK(rewrite_isometry(ab, Rewrite::Swap, 0).form == QuadraticForm{ft, {{b, a}}, {}});
  CHECK(rewrite_isometry(pairs_form(F2, {{1, 1}}), Rewrite::Shift, 0).form == pairs_form(F2, {{1, 1}}));
  const Elem d = a * b + c;
  const QuadraticForm two{ft, {{a, b}, {c, d}}, {}};
  CHECK(rewrite_isometry(two, Rewrite::Mix, 0).form == QuadraticForm{ft, {{a + c, b}, {c, b + d}}, {}});
  CHECK_THROWS_AS(rewrite_isometry(ab, Rewrite::Mix, 0), FormError);
  CHECK_THROWS_AS(rewrite_isometry(ab, Rewrite::Scale, 0, Elem::zero(ft)), FormError);

  std::mt19937_64 rng(4);
  for (int it = 0; it < 100; ++it) {
    const Field f = it % 2 ? F4 : F2;
    const QuadraticForm q = test::random_form(f, rng, 2, rng() % 2);
    const auto rule = Rewrite(rng() % 5);
    const std::size_t pos = (rule == Rewrite::Mix || rule == Rewrite::Commute) ? 0 : rng() % 2;
    const auto out = rewrite_isometry(q, rule, pos, test::random_nonzero(f, rng));
    CHECK(is_isometry_between(out.form, q, out.map));
    const auto w = test::random_vector(f, rng, q.dim());
    CHECK(eval_q(out.form, w) == eval_q(q, out.map * w));
    const auto a1 = witt_decompose(q), a2 = witt_decompose(out.form);
    CHECK(a1.witt_index == a2.witt_index);
    CHECK(a1.defect == a2.defect);
  }
}

TEST_CASE("complete_symplectic_basis") {
  auto standard = [](const QuadraticForm& q, const std::vector<Vector>& basis) {
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j) {
        const bool paired = i / 2 == j / 2 && i != j;
        if (eval_B(q, basis[i], basis[j]).is_one() != paired) return false;
        if (!paired && !eval_B(q, basis[i], basis[j]).is_zero()) return false;
      }
    return true;
  };
  const QuadraticForm h = QuadraticForm::hyperbolic(F2, 1);
  auto b1 = complete_symplectic_basis(h, {unit_vector(F2, 2, 0)});
  REQUIRE(b1.size() == 2);
  CHECK(b1[0] == unit_vector(F2, 2, 0));
  CHECK(b1[1] == unit_vector(F2, 2, 1));

  const QuadraticForm hh = QuadraticForm::hyperbolic(F2, 2);
  const Vector v = unit_vector(F2, 4, 0) + unit_vector(F2, 4, 2);
  auto b2 = complete_symplectic_basis(hh, {v});
  REQUIRE(b2.size() == 4);
  CHECK(b2[0] == v);
  CHECK(standard(hh, b2));

  const QuadraticForm rad = pairs_form(F2, {{0, 0}}, {1});
  CHECK_THROWS_AS(complete_symplectic_basis(rad, {unit_vector(F2, 3, 2)}), FormError);

  std::mt19937_64 rng(9);
  for (int it = 0; it < 100; ++it) {
    const Field f = it % 2 ? F4 : F2;
    const QuadraticForm q = test::random_form(f, rng, 3, rng() % 3);
    // Build an orthogonal independent family from a random symplectic basis.
    auto base = complete_symplectic_basis(q, {});
    REQUIRE(base.size() == 6);
    std::vector<Vector> vecs;
    for (std::size_t i = 0; i < 3; ++i)
      if (rng() % 2) {
        Vector x = base[2 * i];
        for (std::size_t j = 2 * q.r(); j < q.dim(); ++j) x[j] = test::random_elem(f, rng);
        vecs.push_back(test::random_nonzero(f, rng) * x);
      }
    auto out = complete_symplectic_basis(q, vecs);
    REQUIRE(out.size() == 6);
    CHECK(standard(q, out));
    std::vector<Vector> es;
    for (std::size_t i = 0; i < vecs.size(); ++i) es.push_back(out[2 * i]);
    if (!vecs.empty()) {
      CHECK(rank_of(f, es) == vecs.size());
      for (const auto& x : vecs) CHECK(in_span(f, es, x));
    }
  }
}

TEST_CASE("is_isometric examples") {
  const QuadraticForm h = QuadraticForm::hyperbolic(F2, 1);
  CHECK(is_isometric(h, h).answer == Answer::Yes);
  CHECK(is_isometric(h, pairs_form(F2, {{1, 1}})).answer == Answer::No);

  const Field ft = Field::rational({"t1", "t2"});
  const Elem one = Elem::one(ft), t1 = Elem::variable(ft, 0), t2 = Elem::variable(ft, 1);
  const QuadraticForm u{ft, {}, {one, t2}}, x{ft, {}, {one + t1 * t1 * t2, one + t2}};
  const auto v = is_isometric(u, x);
  CHECK(v.answer == Answer::Yes);
  REQUIRE(v.witness);
  CHECK(is_isometry_between(u, x, *v.witness));
  CHECK(is_isometric(u, QuadraticForm{ft, {}, {one, t1}}).answer == Answer::No);
}

TEST_CASE("is_isometric matches exhaustive GL search in small dimensions") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 60; ++it) {
    const Field f = it % 4 == 0 ? F4 : F2;
    const std::size_t r = f == F4 ? 1 : rng() % 2;
    const std::size_t s = f == F4 ? 0 : 3 - 2 * r - rng() % 2;
    const QuadraticForm a = test::random_form(f, rng, r, s), b = test::random_form(f, rng, r, s);
    if (a.dim() == 0) continue;
    const auto v = is_isometric(a, b);
    CAPTURE(it);
    CHECK((v.answer == Answer::Yes) == gl_isometric(a, b));
    if (v.answer == Answer::Yes) CHECK(is_isometry_between(a, b, *v.witness));
  }
}
