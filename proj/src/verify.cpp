#include "qf2/verify.hpp"

#include <algorithm>

#include "qf2/conjugacy.hpp"
#include "qf2/dsl.hpp"

namespace qf2 {

namespace {

constexpr std::size_t kKeptFailures = 20;

void fail(TheoremCheck& c, const Matrix& m, std::string detail) {
  ++c.failed;
  if (c.failures.size() < kKeptFailures) c.failures.push_back({format_matrix(m), std::move(detail)});
}

template <class Fn>
void run(TheoremCheck& c, const Matrix& m, Fn fn) {
  ++c.checked;
  try {
    if (auto detail = fn(); !detail.empty()) fail(c, m, detail);
  } catch (const std::exception& e) {
    fail(c, m, e.what());
  }
}

std::uint64_t radical_formula(const QuadraticForm& f) {
  const std::uint64_t q = f.field.order();
  const std::uint64_t s = f.s(), j = defect(f);
  std::uint64_t gl = 1, qj = 1;
  for (std::uint64_t i = 0; i < j; ++i) qj *= q;
  for (std::uint64_t i = 0, qi = 1; i < j; ++i, qi *= q) gl *= qj - qi;
  for (std::uint64_t i = 0; i < j * (s - j); ++i) gl *= q;
  return gl;
}

Matrix radical_product(const QuadraticForm& f, const RadicalInvolution& r) {
  Matrix rho = Matrix::identity(f.field, f.s());
  for (const auto& b : basic_radical_factors(f.field, r)) rho = b * rho;
  return rho;
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const TheoremCheck& c) { return c.passed(); });
}

VerifyReport verify_theorems(const QuadraticForm& f, std::size_t cap) {
  const EnumeratedGroup g = enumerate_group(f, GroupMode::Orthogonal, cap);
  VerifyReport rep{f, g.order(), g.method, 0, 0, false, g.order(), {}};

  TheoremCheck order{"group-order"};
  ++order.checked;
  if (const auto want = predicted_order(f, GroupMode::Orthogonal); want != g.order())
    fail(order, Matrix::identity(f.field, f.dim()),
         "enumerated " + std::to_string(g.order()) + ", formula " + std::to_string(want));
  if (g.method == GroupMethod::GlFilter && f.dim() > 0) {
    const auto closure = enumerate_group(f, GroupMode::Orthogonal, cap, GroupMethod::TransvectionClosure);
    rep.transvection_subgroup_order = closure.order();
    rep.generation_exception = closure.order() < g.order();
  }
  rep.checks.push_back(std::move(order));

  const auto invs = list_involutions(g);
  rep.involutions = invs.size();
  TheoremCheck factor{"involution-factorization"}, radical{"radical-decomposition"}, block{"block-normalization"};
  std::vector<InvolutionProfile> profiles;
  for (const auto& m : invs) {
    InvolutionProfile p{m, InvolutionKind::Block, 0, {}, {}, {m, m, m}, std::nullopt, 0};
    try {
      p = profile_involution(f, m);
    } catch (const std::exception& e) {
      ++factor.checked;
      fail(factor, m, std::string("profile: ") + e.what());
      continue;
    }
    switch (p.kind) {
      case InvolutionKind::Diagonal:
        run(factor, m, [&]() -> std::string {
          if (to_matrix(f, p.reduced.diagonal) != m) return "transvections do not recompose";
          if (p.reduced.diagonal.length() != p.residual) return "factor count differs from res";
          return "";
        });
        break;
      case InvolutionKind::Null:
        run(factor, m, [&]() -> std::string {
          if (to_matrix(f, p.reduced.null) != m) return "null blocks do not recompose";
          if (4 * p.reduced.null.length() != 2 * p.residual) return "block count differs from res/2";
          return "";
        });
        break;
      case InvolutionKind::Block:
        run(block, m, [&]() -> std::string {
          if (!block_is_involution(p.block)) return "Y != rho Y tau";
          if (p.tau_type == SymplecticType::Hyperbolic) return "";
          normalize_block(f, p.block);
          return "";
        });
        [[fallthrough]];
      case InvolutionKind::Radical:
        run(radical, m, [&]() -> std::string {
          return radical_product(f, p.radical) == p.block.rho ? "" : "basic radical factors do not recompose";
        });
        break;
    }
    profiles.push_back(std::move(p));
  }
  if (f.s() == 0 || factor.checked > 0) rep.checks.push_back(std::move(factor));
  if (f.s() > 0) {
    rep.checks.push_back(std::move(radical));
    if (f.r() > 0) rep.checks.push_back(std::move(block));
  }

  TheoremCheck cls{"conjugacy-classification"};
  const auto orbits = orbit_partition(g, invs);
  const auto truth = canonical_partition(orbits.orbits);
  rep.classes = truth.size();
  try {
    const auto got = classifier_partition(g, invs);
    cls.checked = invs.size();
    if (got != truth) {
      std::vector<std::size_t> in_got(invs.size()), in_truth(invs.size());
      for (std::size_t c = 0; c < got.size(); ++c)
        for (auto i : got[c]) in_got[i] = c;
      for (std::size_t c = 0; c < truth.size(); ++c)
        for (auto i : truth[c]) in_truth[i] = c;
      for (std::size_t i = 0; i < invs.size(); ++i)
        if (got[in_got[i]] != truth[in_truth[i]])
          fail(cls, invs[i], "classifier class has " + std::to_string(got[in_got[i]].size()) + " members, orbit has " +
                                 std::to_string(truth[in_truth[i]].size()));
    }
  } catch (const std::exception& e) {
    ++cls.checked;
    fail(cls, Matrix::identity(f.field, f.dim()), e.what());
  }
  rep.checks.push_back(std::move(cls));

  if (f.s() > 0) {
    TheoremCheck rad{"radical-group-order"};
    ++rad.checked;
    const QuadraticForm fr = radical_part(f);
    const auto rg = enumerate_group(fr, GroupMode::RadicalOnly, cap);
    if (rg.order() != radical_formula(fr))
      fail(rad, Matrix::identity(f.field, f.s()),
           "enumerated " + std::to_string(rg.order()) + ", formula " + std::to_string(radical_formula(fr)));
    rep.checks.push_back(std::move(rad));
  }
  return rep;
}

}  // namespace qf2
