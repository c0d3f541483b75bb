#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "qf2/conjugacy.hpp"
#include "test_util.hpp"

using namespace qf2;

namespace {

const Field F2 = Field::gf2m(1);
const Field F4 = Field::gf2m(2);
const Field FT = Field::rational({"t1", "t2"});

Vector vec(Field f, std::initializer_list<unsigned> bits) {
  Vector v;
  for (auto b : bits) v.push_back(Elem::from_bits(f, b));
  return v;
}

QuadraticForm form(Field f, std::vector<std::pair<unsigned, unsigned>> pairs, std::vector<unsigned> diag) {
  QuadraticForm q{f, {}, {}};
  for (auto [a, b] : pairs) q.pairs.emplace_back(Elem::from_bits(f, a), Elem::from_bits(f, b));
  for (auto c : diag) q.diag.push_back(Elem::from_bits(f, c));
  return q;
}

DiagonalInvolution orthogonal(const QuadraticForm& f, std::vector<Vector> us) {
  DiagonalInvolution d{us, {}};
  for (const auto& u : us) d.scalars.push_back(eval_q(f, u).inverse());
  return d;
}

void check_classifier_matches_orbits(const QuadraticForm& f) {
  const auto g = enumerate_group(f, GroupMode::Orthogonal);
  const auto invs = list_involutions(g);
  const auto orbits = orbit_partition(g, invs);
  CHECK(classifier_partition(g, invs) == canonical_partition(orbits.orbits));
}

}  // namespace

TEST_CASE("conjugate_diagonal examples") {
  const auto f = form(F4, {{0, 0}, {1, 2}}, {});
  const auto s = orthogonal(f, {vec(F4, {1, 1, 0, 0})});
  CHECK(conjugate_diagonal(f, s, s).answer == Answer::Yes);
  const auto two = orthogonal(f, {vec(F4, {1, 1, 0, 0}), vec(F4, {0, 0, 1, 0})});
  const auto v = conjugate_diagonal(f, s, two);
  CHECK(v.answer == Answer::No);
  CHECK(v.reason == "length");
  DiagonalInvolution bad = s;
  bad.scalars[0] = Elem::from_bits(F4, 2);
  CHECK_THROWS_AS(conjugate_diagonal(f, bad, s), FormError);

  const Elem one = Elem::one(FT), zero = Elem::zero(FT), t1 = Elem::variable(FT, 0), t2 = Elem::variable(FT, 1);
  const QuadraticForm g{FT, {{zero, zero}, {zero, zero}}, {}};
  const Vector u1{one, one, zero, zero}, u2{zero, zero, one, t2};
  const auto c = conjugate_diagonal(g, orthogonal(g, {u1, u2}), orthogonal(g, {u1 + t1 * u2, u1 + u2}));
  CHECK(c.answer == Answer::No);
}

TEST_CASE("conjugate_diagonal carries verified witnesses and is invariant under conjugation") {
  const auto f = form(F2, {{0, 0}, {1, 1}}, {});
  const auto g = enumerate_group(f, GroupMode::Orthogonal);
  std::mt19937_64 rng(3);
  const auto invs = list_involutions(g);
  for (int it = 0; it < 40; ++it) {
    const auto r1 = reduced_factorization(f, invs[rng() % invs.size()]);
    const auto r2 = reduced_factorization(f, invs[rng() % invs.size()]);
    if (r1.type != SymplecticType::Diagonal || r2.type != SymplecticType::Diagonal) continue;
    const auto v = conjugate_diagonal(f, r1.diagonal, r2.diagonal, {}, &g);
    const Matrix phi = g.matrix(rng() % g.order());
    const auto w = conjugate_diagonal(f, conjugate_by(f, phi, r1.diagonal), r2.diagonal);
    CHECK(v.answer == w.answer);
    if (v.answer == Answer::Yes) {
      REQUIRE(v.witness);
      CHECK(*v.witness * to_matrix(f, r1.diagonal) * *v.witness->inverse() == to_matrix(f, r2.diagonal));
    }
  }
}

TEST_CASE("conjugate_null examples") {
  const auto f = form(F2, {{0, 0}, {0, 0}}, {});
  const NullBlock b{vec(F2, {1, 0, 0, 0}), vec(F2, {0, 0, 0, 1}), vec(F2, {0, 0, 1, 0}), vec(F2, {0, 1, 0, 0})};
  const NullInvolution one{{b}};
  CHECK(conjugate_null(f, one, one).answer == Answer::Yes);
  CHECK(conjugate_null(f, one, NullInvolution{}).answer == Answer::No);
  const auto h4 = form(F2, {{0, 0}, {0, 0}, {0, 0}, {0, 0}}, {});
  auto pad = [](Vector v, std::size_t at) {
    Vector out(8, Elem::zero(F2));
    for (std::size_t i = 0; i < 4; ++i) out[at + i] = v[i];
    return out;
  };
  const NullBlock b1{pad(b.e1, 0), pad(b.f2, 0), pad(b.e2, 0), pad(b.f1, 0)};
  const NullBlock b2{pad(b.e1, 4), pad(b.f2, 4), pad(b.e2, 4), pad(b.f1, 4)};
  CHECK(conjugate_null(h4, NullInvolution{{b1}}, NullInvolution{{b1, b2}}).answer == Answer::No);
  CHECK(conjugate_null(h4, NullInvolution{{b1}}, NullInvolution{{b2}}).answer == Answer::Yes);
  const auto g = enumerate_group(f, GroupMode::Orthogonal);
  const auto invs = list_involutions(g);
  std::vector<Matrix> nulls;
  for (const auto& m : invs)
    if (reduced_factorization(f, m).type == SymplecticType::Hyperbolic) nulls.push_back(m);
  CHECK(orbit_partition(g, nulls).orbits.size() == 1);
  check_classifier_matches_orbits(f);
}

TEST_CASE("conjugate_radical examples") {
  const std::vector<Elem> diag{Elem::zero(F2), Elem::zero(F2), Elem::one(F2), Elem::one(F2)};
  Matrix a = Matrix::identity(F2, 4), b = Matrix::identity(F2, 4);
  a(0, 0) = a(1, 1) = Elem::zero(F2);
  a(0, 1) = a(1, 0) = Elem::one(F2);
  b(2, 2) = b(3, 3) = Elem::zero(F2);
  b(2, 3) = b(3, 2) = Elem::one(F2);
  const auto ra = decompose_radical(diag, a), rb = decompose_radical(diag, b);
  CHECK(quadratic_signature(diag, ra) == std::vector<Elem>{Elem::zero(F2)});
  CHECK(quadratic_signature(diag, rb) == std::vector<Elem>{Elem::one(F2)});
  CHECK(conjugate_radical(diag, ra, rb).answer == Answer::No);
  CHECK(conjugate_radical(diag, ra, ra).answer == Answer::Yes);
  CHECK(conjugate_radical(diag, RadicalInvolution{}, RadicalInvolution{}).answer == Answer::Yes);
  const auto rad = form(F2, {}, {0, 0, 1, 1});
  const auto g = enumerate_group(rad, GroupMode::RadicalOnly);
  CHECK(!find_conjugator(g, a, b));
}

TEST_CASE("radical classifier matches radical-only orbits") {
  for (const auto& diag : {std::vector<unsigned>{0, 0, 1, 1}, {0, 0, 0, 0}, {0, 1, 1, 1}, {0, 0, 1}}) {
    const auto f = form(F2, {}, diag);
    const auto g = enumerate_group(f, GroupMode::RadicalOnly);
    const auto invs = list_involutions(g);
    const auto orbits = orbit_partition(g, invs);
    CHECK(classifier_partition(g, invs) == canonical_partition(orbits.orbits));
  }
}

TEST_CASE("check_block_conjugacy_witness") {
  const auto f = form(F2, {{0, 0}}, {0, 0});
  const Matrix theta = orthogonal_transvection(f, vec(F2, {1, 1, 1, 0}));
  const auto b = split_block(f, theta);
  CHECK(check_block_conjugacy_witness(f, b, b, Matrix::identity(F2, 2), Matrix(F2, 2, 2), Matrix::identity(F2, 2)));
  Matrix X(F2, 2, 2);
  X(1, 0) = Elem::one(F2);
  CHECK(block_is_orthogonal(f, Matrix::identity(F2, 2), X, Matrix::identity(F2, 2)));
  CHECK_FALSE(check_block_conjugacy_witness(f, b, b, Matrix::identity(F2, 2), X, Matrix::identity(F2, 2)));
  const Matrix w = to_matrix(BlockInvolution{Matrix::identity(F2, 2), X, Matrix::identity(F2, 2)});
  CHECK_FALSE(w * theta == theta * w);
  const auto g = enumerate_group(f, GroupMode::Orthogonal);
  const auto phi = g.matrix(g.order() / 2);
  const auto b2 = split_block(f, phi * theta * *phi.inverse());
  const auto v = search_block_conjugator(f, b, b2, g);
  REQUIRE(v.answer == Answer::Yes);
  const auto t = split_block(f, *v.witness);
  CHECK(check_block_conjugacy_witness(f, b, b2, t.tau, t.Y, t.rho));
  Matrix bad = Matrix::identity(F2, 2);
  bad(0, 1) = Elem::one(F2);
  CHECK_THROWS_AS(check_block_conjugacy_witness(f, b, b, bad, X, Matrix::identity(F2, 2)), FormError);
}

TEST_CASE("search_block_conjugator") {
  // Anisotropic radical: rho = id on every orthogonal involution, Y need not vanish.
  const auto a = form(F2, {{0, 0}}, {1});
  const auto ga = enumerate_group(a, GroupMode::Orthogonal);
  std::size_t nonzero_y = 0;
  for (const auto& m : list_involutions(ga)) {
    const auto b = split_block(a, m);
    CHECK(b.rho.is_identity());
    nonzero_y += !b.Y.is_zero();
    CHECK(search_block_conjugator(a, b, b, ga).answer == Answer::Yes);
  }
  CHECK(nonzero_y > 0);

  // Different radical parts: not conjugate by exhaustion, as conjugate_radical says.
  const auto f = form(F2, {{0, 0}}, {0, 0, 1, 1});
  const auto g = enumerate_group(f, GroupMode::Orthogonal);
  Matrix m1 = Matrix::identity(F2, 6), m2 = Matrix::identity(F2, 6);
  m1(2, 2) = m1(3, 3) = Elem::zero(F2);
  m1(2, 3) = m1(3, 2) = Elem::one(F2);
  m2(4, 4) = m2(5, 5) = Elem::zero(F2);
  m2(4, 5) = m2(5, 4) = Elem::one(F2);
  const auto b1 = split_block(f, m1), b2 = split_block(f, m2);
  CHECK(search_block_conjugator(f, b1, b2, g).answer == Answer::No);
  CHECK(conjugate_radical(f.diag, decompose_radical(f.diag, b1.rho), decompose_radical(f.diag, b2.rho)).answer ==
        Answer::No);
  CHECK(search_block_conjugator(f, b1, b1, g).answer == Answer::Yes);
}

TEST_CASE("classifier partition equals orbit partition on small groups") {
  for (const auto& f : {form(F2, {{0, 0}}, {}), form(F2, {{1, 1}}, {}), form(F2, {{0, 0}, {1, 1}}, {}),
                        form(F2, {{0, 0}}, {0}), form(F2, {{0, 0}}, {1}), form(F2, {{0, 0}}, {0, 1}),
                        form(F2, {{1, 1}}, {0, 0}), form(F4, {{0, 0}}, {}), form(F4, {{1, 2}}, {}),
                        form(F4, {{0, 0}}, {1}), form(F4, {{0, 0}}, {0})}) {
    CAPTURE(f.dim());
    CAPTURE(f.s());
    check_classifier_matches_orbits(f);
  }
}

TEST_CASE("symplectic diagonal involutions: compatibility classes match Sp orbits") {
  for (const auto& f : {form(F2, {{0, 0}}, {}), form(F2, {{0, 0}, {0, 0}}, {}), form(F4, {{0, 0}}, {})}) {
    const auto g = enumerate_group(f, GroupMode::Symplectic);
    std::vector<Matrix> diag;
    std::vector<DiagonalInvolution> dec;
    for (const auto& m : list_involutions(g))
      if (classify_symplectic_involution(f, m) == SymplecticType::Diagonal) {
        diag.push_back(m);
        dec.push_back(symplectic_diagonal_factorization(f, m));
      }
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < diag.size(); ++i) {
      bool placed = false;
      for (auto& c : classes)
        if (!placed && conjugate_symplectic_diagonal(dec[c[0]], dec[i]).answer == Answer::Yes) {
          c.push_back(i);
          placed = true;
        }
      if (!placed) classes.push_back({i});
    }
    CHECK(canonical_partition(classes) == canonical_partition(orbit_partition(g, diag).orbits));
  }
}
