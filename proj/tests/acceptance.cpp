// One PASS/FAIL line per acceptance criterion; details of failures go to stderr.

#include <algorithm>
#include <array>
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "qf2/congruence.hpp"
#include "qf2/conjugacy.hpp"
#include "qf2/dsl.hpp"
#include "test_util.hpp"

using namespace qf2;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::string summary;
  void fail(const std::string& what) {
    if (pass) std::cerr << "  first failure: " << what << "\n";
    pass = false;
  }
  void check(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }
};

int failures = 0;

void report(int n, const std::string& name, Outcome o) {
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << " (" << name << "): " << o.summary << std::endl;
  if (!o.pass) ++failures;
}

template <class Fn>
Outcome guarded(Fn fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    Outcome o;
    o.fail(std::string("exception: ") + e.what());
    o.summary = "aborted";
    return o;
  }
}

/// Every form with r pairs from k x k and s diagonal entries from k, each as a
/// multiset, 1 <= 2r + s <= max_dim.
std::vector<QuadraticForm> all_forms(Field f, std::size_t max_dim) {
  std::vector<QuadraticForm> out;
  const std::vector<Elem> ks = elements(f);
  const std::size_t q = ks.size();
  std::function<void(QuadraticForm&, std::size_t, std::size_t, std::size_t, std::size_t)> rec =
      [&](QuadraticForm& cur, std::size_t r, std::size_t s, std::size_t pair_from, std::size_t diag_from) {
        if (cur.r() < r) {
          for (std::size_t i = pair_from; i < q * q; ++i) {
            cur.pairs.emplace_back(ks[i / q], ks[i % q]);
            rec(cur, r, s, i, 0);
            cur.pairs.pop_back();
          }
          return;
        }
        if (cur.s() < s) {
          for (std::size_t i = diag_from; i < q; ++i) {
            cur.diag.push_back(ks[i]);
            rec(cur, r, s, pair_from, i);
            cur.diag.pop_back();
          }
          return;
        }
        out.push_back(cur);
      };
  for (std::size_t r = 0; 2 * r <= max_dim; ++r)
    for (std::size_t s = 0; 2 * r + s <= max_dim; ++s) {
      if (r + s == 0) continue;
      QuadraticForm cur{f, {}, {}};
      rec(cur, r, s, 0, 0);
    }
  return out;
}

Vector concat_zero(Vector u, std::size_t s) {
  for (std::size_t i = 0; i < s; ++i) u.push_back(Elem::zero(u.front().field()));
  return u;
}

std::string name(const QuadraticForm& f) { return f.field.to_string() + " " + format_form(f); }

std::uint64_t gl_order(std::uint64_t q, std::uint64_t j) {
  std::uint64_t qj = 1, out = 1;
  for (std::uint64_t i = 0; i < j; ++i) qj *= q;
  for (std::uint64_t i = 0, qi = 1; i < j; ++i, qi *= q) out *= qj - qi;
  return out;
}

Outcome criterion1() {
  const auto start = Clock::now();
  const auto res = cli::counterexample();
  Outcome o;
  o.check(res.isometric == Answer::Yes, "quadratic forms not reported isometric");
  o.check(res.congruent == Answer::No, "bilinear forms not reported non-congruent");
  o.check(res.product == res.expected, "A^T <1,t2> A = " + format_matrix(res.product));
  const double t = seconds_since(start);
  o.check(t < 1.0, "runtime " + std::to_string(t) + " s");
  std::ostringstream s;
  s << "isometric=" << to_string(res.isometric) << ", congruent=" << to_string(res.congruent)
    << ", product=" << format_matrix(res.product) << ", " << t << " s";
  o.summary = s.str();
  return o;
}

struct FormStats {
  std::size_t forms = 0, radical_forms = 0, involutions = 0, skipped = 0;
  std::size_t nondefective_groups = 0, factored = 0, diagonal = 0, null = 0;
  double seconds = 0;
};

/// Criteria 2 and 3 share the enumerations.
void classify_and_factor(Outcome& c2, Outcome& c3, FormStats& st) {
  const auto start = Clock::now();
  std::vector<QuadraticForm> forms = all_forms(Field::gf2m(1), 6);
  for (auto& f : all_forms(Field::gf2m(2), 4)) forms.push_back(std::move(f));
  const std::size_t cap = 1'000'000;
  const auto hh00 = parse_form(Field::gf2m(1), "H + H + <0,0>");
  for (const auto& f : forms) {
    const bool named = f == hh00;
    if (!named && predicted_order(f, GroupMode::Orthogonal) > cap) {
      ++st.skipped;
      std::cerr << "  skipped (order " << predicted_order(f, GroupMode::Orthogonal) << "): " << name(f) << "\n";
      continue;
    }
    const auto g = enumerate_group(f, GroupMode::Orthogonal, named ? 2 * cap : cap);
    const auto invs = list_involutions(g);
    ++st.forms;
    st.involutions += invs.size();
    if (f.s() > 0) ++st.radical_forms;
    const auto truth = canonical_partition(orbit_partition(g, invs).orbits);
    const auto got = classifier_partition(g, invs);
    c2.check(got == truth, "classifier partition differs from orbits on " + name(f));

    if (defect(f) != 0) continue;
    ++st.nondefective_groups;
    for (const auto& m : invs) {
      try {
        const auto rf = reduced_factorization(f, m);
        const std::size_t res = residual_space(m).size();
        if (rf.type == SymplecticType::Diagonal) {
          ++st.diagonal;
          c3.check(to_matrix(f, rf.diagonal) == m, "diagonal factors do not recompose " + format_matrix(m));
          c3.check(rf.diagonal.length() == res, "factor count differs from res for " + format_matrix(m));
          for (std::size_t i = 0; i < rf.diagonal.length(); ++i)
            c3.check((rf.diagonal.scalars[i] * eval_q(f, rf.diagonal.vectors[i])).is_one(),
                     "non-orthogonal factor in " + format_matrix(m));
        } else {
          ++st.null;
          c3.check(to_matrix(f, rf.null) == m, "null blocks do not recompose " + format_matrix(m));
          c3.check(2 * rf.null.length() == res, "null block count differs from res/2 for " + format_matrix(m));
        }
        ++st.factored;
      } catch (const std::exception& e) {
        c3.fail(name(f) + " " + format_matrix(m) + ": " + e.what());
      }
    }
  }
  st.seconds = seconds_since(start);
}

/// The basic null involution of H + H against products of symplectic transvections.
std::string null_versus_transvections(Outcome& o) {
  const Field F2 = Field::gf2m(1);
  const auto f = parse_form(F2, "H + H");
  const auto e = [&](std::size_t i) { return unit_vector(F2, 4, i); };
  const Matrix eta = null_block_matrix(f, {e(0), e(3), e(2), e(1)});
  o.check((eta * eta).is_identity() && !eta.is_identity() && is_isometry(f, eta), "basic null involution malformed");
  std::vector<Matrix> ts;
  for (const auto& u : test::all_vectors(F2, 4))
    if (!is_zero(u)) ts.push_back(transvection_matrix(f, u, Elem::one(F2)));
  std::size_t len1 = 0, len2 = 0, len3 = 0;
  for (const auto& a : ts) {
    len1 += a == eta;
    for (const auto& b : ts) {
      const Matrix ab = a * b;
      len2 += ab == eta;
      for (const auto& c : ts) len3 += ab * c == eta;
    }
  }
  o.check(!eta.is_identity() && len1 == 0 && len2 == 0, "basic null involution is a product of <= 2 transvections");
  o.check(len3 > 0, "basic null involution is not a product of 3 transvections");
  return std::to_string(ts.size()) + " transvections, products of length 1/2/3 hitting eta: " + std::to_string(len1) +
         "/" + std::to_string(len2) + "/" + std::to_string(len3);
}

Outcome criterion4() {
  Outcome o;
  struct Case {
    Field f;
    const char* form;
    std::uint64_t j, s;
  };
  const Field F2 = Field::gf2m(1), F4 = Field::gf2m(2);
  std::string summary;
  for (const auto& c : {Case{F2, "<0>", 1, 1}, Case{F2, "<0,1>", 1, 2}, Case{F2, "<0,0>", 2, 2},
                        Case{F2, "<0,0,1>", 2, 3}, Case{F4, "<0>", 1, 1}, Case{F4, "<0,1>", 1, 2}}) {
    const auto f = parse_form(c.f, c.form);
    o.check(defect(f) == c.j, "defect of " + name(f));
    const auto g = enumerate_group(f, GroupMode::RadicalOnly);
    std::uint64_t want = gl_order(c.f.order(), c.j);
    for (std::uint64_t i = 0; i < c.j * (c.s - c.j); ++i) want *= c.f.order();
    o.check(g.order() == want, name(f) + ": enumerated " + std::to_string(g.order()) + ", formula " +
                                   std::to_string(want));
    summary += (summary.empty() ? "" : ", ") + c.f.to_string() + " (" + std::to_string(c.j) + "," +
               std::to_string(c.s) + ")=" + std::to_string(g.order());
  }
  o.summary = summary;
  return o;
}

/// Random orthogonal block involution with tau of diagonal type or tau = id.
std::optional<Matrix> random_block(const QuadraticForm& f, std::mt19937_64& rng) {
  const Field k = f.field;
  const std::size_t nb = 2 * f.r(), s = f.s();
  const QuadraticForm fb = nonsingular_part(f), fr = radical_part(f);
  DiagonalInvolution tau;
  const std::size_t want = rng() % (f.r() + 1);
  for (int tries = 0; tau.length() < want && tries < 100; ++tries) {
    const Vector u = test::random_vector(k, rng, nb);
    const Elem qu = eval_q(fb, u);
    if (qu.is_zero()) continue;
    bool ok = true;
    for (const auto& v : tau.vectors) ok = ok && eval_B(f, v, concat_zero(u, s)).is_zero();
    std::vector<Vector> all;
    for (const auto& v : tau.vectors) all.push_back(v);
    all.push_back(concat_zero(u, s));
    if (!ok || rank_of(k, all) != all.size()) continue;
    tau.vectors.push_back(concat_zero(u, s));
    tau.scalars.push_back(qu.inverse());
  }
  Matrix rho = Matrix::identity(k, s);
  for (int tries = 0; tries < 200; ++tries) {
    Matrix r(k, s, s);
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j) r(i, j) = test::random_elem(k, rng);
    if (!(r * r).is_identity()) continue;
    bool keeps_q = true;
    for (std::size_t j = 0; j < s; ++j) keeps_q = keeps_q && eval_q(fr, r.column(j)) == fr.diag[j];
    if (keeps_q) {
      rho = r;
      break;
    }
  }
  const auto def = defect_subspace(fr);
  std::vector<Vector> h;
  for (std::size_t i = 0; i < tau.length(); ++i) {
    Vector x = zero_vector(k, s);
    for (const auto& d : def) x = x + test::random_elem(k, rng) * d;
    h.push_back(x);
  }
  Matrix theta = to_matrix(construct_block_Y(f, tau, rho, h));
  if (tau.length() == 0) {
    // Y with totally singular columns on V_B and Y = rho Y.
    Matrix Y(k, s, nb);
    for (std::size_t c = 0; c < nb; ++c) {
      Vector x = zero_vector(k, s);
      for (const auto& d : def) x = x + test::random_elem(k, rng) * d;
      x = x + rho * x;
      for (std::size_t r = 0; r < s; ++r) Y(r, c) = x[r];
    }
    theta = to_matrix(BlockInvolution{Matrix::identity(k, nb), Y, rho});
  }
  // Conjugate by a random product of orthogonal transvections.
  Matrix g = Matrix::identity(k, f.dim());
  for (int i = 0; i < 8; ++i) {
    const Vector u = test::random_vector(k, rng, f.dim());
    if (!eval_q(f, u).is_zero()) g = g * orthogonal_transvection(f, u);
  }
  theta = g * theta * *g.inverse();
  if (theta.is_identity()) return std::nullopt;
  return theta;
}

Outcome criterion5() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  std::size_t done = 0, with_factors = 0, nonzero_Y = 0;
  while (done < 100) {
    const Field k = rng() % 2 ? Field::gf2m(1) : Field::gf2m(2);
    const std::size_t r = 1 + rng() % 2, s = 1 + rng() % 3;
    QuadraticForm f = test::random_form(k, rng, r, s);
    f.diag[0] = Elem::zero(k);
    const auto theta = random_block(f, rng);
    if (!theta) continue;
    ++done;
    const BlockInvolution b = split_block(f, *theta);
    o.check(block_is_involution(b) && block_is_orthogonal(f, b.tau, b.Y, b.rho),
            "constructed matrix is not an orthogonal block involution: " + format_matrix(*theta));
    try {
      const auto nb = normalize_block(f, b);
      const std::size_t n2 = 2 * f.r();
      Matrix mid = Matrix::identity(k, f.dim()), last = Matrix::identity(k, f.dim());
      mid.set_block(n2, 0, nb.Y);
      last.set_block(n2, n2, nb.rho);
      o.check(to_matrix(f, nb.first) * mid * last == *theta, "three factors do not multiply back: " + name(f));
      for (std::size_t i = 0; i < nb.first.length(); ++i)
        o.check((nb.first.scalars[i] * eval_q(f, nb.first.vectors[i])).is_one(), "a_i q(u_i') != 1");
      const QuadraticForm fr = radical_part(f);
      for (std::size_t c = 0; c < n2; ++c) o.check(eval_q(fr, nb.Y.column(c)).is_zero(), "q(Y'w) != 0");
      with_factors += nb.first.length() > 0;
      nonzero_Y += !b.Y.is_zero();
    } catch (const std::exception& e) {
      o.fail(name(f) + " " + format_matrix(*theta) + ": " + e.what());
    }
  }
  o.summary = std::to_string(done) + " block involutions, " + std::to_string(with_factors) +
              " with transvection factors, " + std::to_string(nonzero_Y) + " with Y != 0";
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::size_t groups = 0, invs_total = 0, skipped = 0;
  for (const Field k : {Field::gf2m(1), Field::gf2m(2)}) {
    for (const auto& f : all_forms(k, 4)) {
      if (f.r() != 0) continue;
      if (predicted_order(f, GroupMode::RadicalOnly) > 1'000'000) {
        ++skipped;
        continue;
      }
      const auto g = enumerate_group(f, GroupMode::RadicalOnly);
      const auto invs = list_involutions(g);
      ++groups;
      invs_total += invs.size();
      std::vector<RadicalInvolution> decs;
      for (const auto& m : invs) {
        const auto r = decompose_radical(f.diag, m);
        Matrix prod = Matrix::identity(k, f.s());
        for (const auto& b : basic_radical_factors(k, r)) prod = b * prod;
        o.check(prod == m, "basic factors do not recompose " + format_matrix(m) + " in " + name(f));
        decs.push_back(r);
      }
      std::vector<std::vector<std::size_t>> classes;
      for (std::size_t i = 0; i < invs.size(); ++i) {
        bool placed = false;
        for (auto& c : classes) {
          const auto v = conjugate_radical(f.diag, decs[c.front()], decs[i]);
          o.check(v.answer != Answer::Inconclusive, "inconclusive radical comparison");
          if (v.answer == Answer::Yes) {
            c.push_back(i);
            placed = true;
            break;
          }
        }
        if (!placed) classes.push_back({i});
      }
      o.check(canonical_partition(classes) == canonical_partition(orbit_partition(g, invs).orbits),
              "conjugate_radical partition differs from orbits on " + name(f));
    }
  }
  o.summary = std::to_string(groups) + " radical-only groups (s <= 4), " + std::to_string(invs_total) +
              " involutions, " + std::to_string(skipped) + " over the order cap";
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::mt19937_64 rng(7);
  const Field F2 = Field::gf2m(1), F4 = Field::gf2m(2), F16 = Field::gf2m(4);

  std::size_t scaled = 0;
  for (int it = 0; it < 200; ++it) {
    const auto f = test::random_form(F4, rng, 1 + rng() % 2, rng() % 3);
    const Vector u = test::random_vector(F4, rng, f.dim());
    if (eval_q(f, u).is_zero()) continue;
    const Matrix t = orthogonal_transvection(f, u);
    for (std::uint32_t a = 1; a < 4; ++a) {
      o.check(orthogonal_transvection(f, Elem::from_bits(F4, a) * u) == t, "tau_{au} != tau_u");
      ++scaled;
    }
  }

  std::size_t triples = 0;
  for (int it = 0; it < 200; ++it) {
    const Field k = it % 2 ? F2 : F4;
    const std::size_t l = 1 + rng() % 3;
    std::vector<std::vector<Elem>> d(3);
    for (auto& x : d)
      for (std::size_t i = 0; i < l; ++i) x.push_back(test::random_elem(k, rng));
    const auto ab = congruent(d[0], d[1]), ba = congruent(d[1], d[0]), bc = congruent(d[1], d[2]),
               ac = congruent(d[0], d[2]), aa = congruent(d[0], d[0]);
    o.check(aa.answer == Answer::Yes, "congruence not reflexive");
    o.check(ab.answer == ba.answer, "congruence not symmetric");
    if (ab.answer == Answer::Yes && bc.answer == Answer::Yes)
      o.check(ac.answer == Answer::Yes, "congruence not transitive");
    for (const auto* v : {&ab, &ba, &bc, &ac, &aa})
      o.check(v->answer != Answer::Inconclusive, "finite-field congruence inconclusive");
    if (ab.answer == Answer::Yes) o.check(check_witness(d[0], d[1], *ab.witness), "bad congruence witness");
    ++triples;
  }

  std::size_t witt_cases = 0;
  while (witt_cases < 200) {
    const Field k = std::array{F2, F4, F16}[rng() % 3];
    const auto f = test::random_form(k, rng, rng() % 4, rng() % 3);
    if (f.dim() == 0) continue;
    QuadraticForm g = f;
    for (int step = 0; step < 6 && g.r() > 0; ++step) {
      const auto rule = Rewrite(rng() % 5);
      const bool two = rule == Rewrite::Mix || rule == Rewrite::Commute;
      if (two && g.r() < 2) continue;
      const std::size_t pos = rng() % (two ? g.r() - 1 : g.r());
      try {
        g = rewrite_isometry(g, rule, pos, test::random_nonzero(k, rng)).form;
      } catch (const FormError&) {
      }
    }
    std::shuffle(g.diag.begin(), g.diag.end(), rng);
    const auto wf = witt_decompose(f), wg = witt_decompose(g);
    o.check(wf.witt_index == wg.witt_index && wf.defect == wg.defect, "witt index or defect changed: " + name(f));
    o.check(wf.reassembled() == wg.reassembled(), "normal form changed: " + name(f) + " vs " + format_form(g));
    o.check(is_isometry_between(wg.reassembled(), g, wg.basis), "basis is not an isometry for " + format_form(g));
    ++witt_cases;
  }
  o.summary = std::to_string(scaled) + " scaled transvections, " + std::to_string(triples) +
              " congruence triples, " + std::to_string(witt_cases) + " Witt basis changes";
  return o;
}

}  // namespace

int main() {
  report(1, "counterexample reproduction", guarded(criterion1));

  Outcome c2, c3;
  FormStats st;
  try {
    classify_and_factor(c2, c3, st);
  } catch (const std::exception& e) {
    c2.fail(std::string("exception: ") + e.what());
    c3.fail(std::string("exception: ") + e.what());
  }
  c2.check(st.seconds < 600, "runtime " + std::to_string(st.seconds) + " s");
  c2.check(st.radical_forms >= 3, "fewer than three forms with a radical");
  {
    std::ostringstream s;
    s << st.forms << " forms (" << st.radical_forms << " with radical), " << st.involutions << " involutions, "
      << st.skipped << " over the order cap, " << st.seconds << " s";
    c2.summary = s.str();
  }
  const std::string scan = null_versus_transvections(c3);
  c3.summary = std::to_string(st.nondefective_groups) + " nondefective groups, " + std::to_string(st.factored) +
               " involutions recomposed (" + std::to_string(st.diagonal) + " diagonal, " +
               std::to_string(st.null) + " null); " + scan;
  report(2, "orbit-vs-classifier equality", c2);
  report(3, "factorization roundtrip", c3);
  report(4, "radical group orders", guarded(criterion4));
  report(5, "block normalization", guarded(criterion5));
  report(6, "radical decomposition roundtrip", guarded(criterion6));
  report(7, "property suites", guarded(criterion7));
  return failures == 0 ? 0 : 1;
}
