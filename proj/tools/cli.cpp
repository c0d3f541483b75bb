#include "cli.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <fstream>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qf2/congruence.hpp"
#include "qf2/conjugacy.hpp"
#include "qf2/dsl.hpp"
#include "qf2/verify.hpp"

namespace qf2::cli {

namespace {

using nlohmann::json;

/// Library failure tagged with the operation that raised it.
struct StageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
  InputError(const std::string& what, std::string text) : std::runtime_error(what), text(std::move(text)) {}
  std::string text;
};

template <class Fn>
auto stage(const char* where, Fn fn) {
  try {
    return fn();
  } catch (const DslError&) {
    throw;
  } catch (const CapExceeded& e) {
    throw StageError(std::string(where) + ": " + e.what() + " (partial count " + std::to_string(e.partial) + ")");
  } catch (const std::exception& e) {
    throw StageError(std::string(where) + ": " + e.what());
  }
}

template <class Fn>
auto parse_input(const std::string& what, const std::string& text, Fn fn) {
  try {
    return fn(text);
  } catch (const DslError& e) {
    throw InputError(what + ": " + e.render(text), text);
  }
}

struct Options {
  std::string field = "GF(2)";
  std::string form;
  std::string mode = "auto";
  unsigned degree_bound = SearchBounds{}.degree;
  std::size_t cap = 1'000'000;
  bool records = false;
  std::string out;
  std::vector<std::string> args;
};

class Report {
 public:
  Report(std::string verb, json inputs) : verb_(std::move(verb)), inputs_(std::move(inputs)) {}

  void record(json r) { records_.push_back(std::move(r)); }
  void line(std::string s) { human_.push_back(std::move(s)); }
  void finish(int code, std::string provenance) {
    code_ = code;
    provenance_ = std::move(provenance);
  }
  int code() const { return code_; }

  void write(std::ostream& os, bool records, double elapsed_ms) const {
    if (records) {
      os << json{{"type", "header"}, {"schema", kSchema}, {"verb", verb_}, {"inputs", inputs_}}.dump() << "\n";
      for (const auto& r : records_) os << r.dump() << "\n";
      os << json{{"type", "summary"}, {"exit", code_}, {"provenance", provenance_}}.dump() << "\n";
      return;
    }
    for (const auto& l : human_) os << l << "\n";
    os << "provenance: " << provenance_ << "\n";
    std::ostringstream t;
    t.precision(1);
    t << std::fixed << elapsed_ms;
    os << "time: " << t.str() << " ms\n";
  }

 private:
  std::string verb_;
  json inputs_;
  std::vector<json> records_;
  std::vector<std::string> human_;
  int code_ = 0;
  std::string provenance_;
};

int answer_code(Answer a) { return a == Answer::Inconclusive ? 2 : 0; }

std::string upper(Answer a) {
  switch (a) {
    case Answer::Yes: return "YES";
    case Answer::No: return "NO";
    case Answer::Inconclusive: return "INCONCLUSIVE";
  }
  return "";
}

struct Context {
  Options opt;
  Field field = Field::gf2m(1);
  SearchBounds bounds;

  QuadraticForm form() const {
    if (opt.form.empty()) throw InputError("--form is required", "");
    return parse_input("--form", opt.form, [&](const std::string& s) { return parse_form(field, s); });
  }
  Matrix involution(const QuadraticForm& f, const std::string& text) const {
    const auto e = parse_input("involution", text, [&](const std::string& s) { return parse_involution(field, s); });
    return stage("dsl.evaluate", [&] { return evaluate(f, e); });
  }
};

json base_inputs(const Context& c) {
  json in{{"field", c.field.to_string()}};
  if (!c.opt.form.empty()) in["form"] = format_form(c.form());
  return in;
}

std::string join_factors(const std::vector<std::string>& xs) {
  if (xs.empty()) return "id";
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : " * ") + x;
  return out;
}

std::string tau_text(const Vector& u, const Elem& a) { return "tau(" + to_string(u) + ";" + a.to_string() + ")"; }

std::string diagonal_text(const DiagonalInvolution& d) {
  std::vector<std::string> xs;
  for (std::size_t i = d.length(); i-- > 0;) xs.push_back(tau_text(d.vectors[i], d.scalars[i]));
  return join_factors(xs);
}

std::string null_text(const NullInvolution& n) {
  std::vector<std::string> xs;
  for (std::size_t i = n.length(); i-- > 0;)
    xs.push_back(format_involution({{inv::Null{n.blocks[i]}}}));
  return join_factors(xs);
}

std::string radical_text(const RadicalInvolution& r) {
  std::vector<std::string> xs;
  for (std::size_t i = r.length(); i-- > 0;)
    xs.push_back("radswap(" + to_string(r.pairs[i].first) + "," + to_string(r.pairs[i].second) + ")");
  return join_factors(xs);
}

std::string elems_text(const std::vector<Elem>& xs) {
  std::string s = "<";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + xs[i].to_string();
  return s + ">";
}

Report cmd_normalize(const Context& c) {
  const auto f = c.form();
  Report rep("normalize", base_inputs(c));
  const auto w = stage("quadspace.witt_decompose", [&] { return witt_decompose(f, c.bounds); });
  const json r{{"type", "witt"},
               {"witt_index", w.witt_index},
               {"defect", w.defect},
               {"nonsingular_anisotropic", format_form(w.nonsingular_aniso)},
               {"singular_anisotropic", format_form(w.singular_aniso)},
               {"reassembled", format_form(w.reassembled())},
               {"basis", format_matrix(w.basis)},
               {"conclusive", w.conclusive}};
  rep.record(r);
  rep.line("form: " + format_form(f));
  rep.line("witt index: " + std::to_string(w.witt_index) + ", defect: " + std::to_string(w.defect));
  rep.line("normal form: " + format_form(w.reassembled()));
  rep.line("basis: " + format_matrix(w.basis));
  if (!w.conclusive) rep.line("anisotropic part not proven anisotropic within the degree bound");
  rep.finish(w.conclusive ? 0 : 2, "witt decomposition");
  return rep;
}

Report cmd_classify(const Context& c) {
  if (c.opt.args.size() != 1) throw InputError("classify takes one involution", "");
  const auto f = c.form();
  const Matrix m = c.involution(f, c.opt.args[0]);
  json in = base_inputs(c);
  in["involution"] = c.opt.args[0];
  Report rep("classify", in);
  json r{{"type", "classification"}, {"matrix", format_matrix(m)}};
  if (!(m * m).is_identity() || m.is_identity()) throw StageError("involutions: not an involution");
  if (is_isometry(f, m)) {
    const auto p = stage("conjugacy.profile_involution", [&] { return profile_involution(f, m); });
    r["group"] = "orthogonal";
    r["kind"] = to_string(p.kind);
    r["residual"] = p.residual;
    switch (p.kind) {
      case InvolutionKind::Diagonal: r["factors"] = diagonal_text(p.reduced.diagonal); break;
      case InvolutionKind::Null: r["factors"] = null_text(p.reduced.null); break;
      case InvolutionKind::Radical:
      case InvolutionKind::Block: {
        r["radical_factors"] = radical_text(p.radical);
        r["signature"] = elems_text(quadratic_signature(f.diag, p.radical));
        if (p.kind == InvolutionKind::Radical) break;
        r["tau_type"] = p.tau_type ? to_string(*p.tau_type) : "identity";
        r["tau_residual"] = p.tau_residual;
        if (p.tau_type != SymplecticType::Hyperbolic) {
          const auto nb = stage("involutions.normalize_block", [&] { return normalize_block(f, p.block); });
          r["normalized"] = {{"first", diagonal_text(nb.first)}, {"Y", format_matrix(nb.Y)},
                             {"rho", format_matrix(nb.rho)}};
        }
      }
    }
  } else if (preserves_B(f, m) && m.inverse()) {
    const auto t = stage("involutions.classify_symplectic_involution",
                         [&] { return classify_symplectic_involution(f, m); });
    r["group"] = "symplectic";
    r["kind"] = to_string(t);
    r["residual"] = residual_space(m).size();
    if (t == SymplecticType::Diagonal)
      r["factors"] = diagonal_text(stage("involutions.symplectic_diagonal_factorization",
                                         [&] { return symplectic_diagonal_factorization(f, m); }));
  } else {
    throw StageError("involutions: matrix does not preserve B");
  }
  rep.record(r);
  for (const auto& [k, v] : r.items())
    if (k != "type") rep.line(k + ": " + (v.is_string() ? v.get<std::string>() : v.dump()));
  rep.finish(0, "involution classification");
  return rep;
}

const EnumeratedGroup* maybe_group(const Context& c, const QuadraticForm& f, GroupMode mode,
                                   std::optional<EnumeratedGroup>& slot) {
  if (!f.field.is_finite()) return nullptr;
  if (predicted_order(f, mode) > c.opt.cap) return nullptr;
  slot.emplace(stage("oracle.enumerate_group", [&] { return enumerate_group(f, mode, c.opt.cap); }));
  return &*slot;
}

Report cmd_conjugate(const Context& c) {
  if (c.opt.args.size() != 2) throw InputError("conjugate takes two involutions", "");
  const auto f = c.form();
  const Matrix m1 = c.involution(f, c.opt.args[0]), m2 = c.involution(f, c.opt.args[1]);
  json in = base_inputs(c);
  in["involutions"] = c.opt.args;
  in["mode"] = c.opt.mode;
  Report rep("conjugate", in);
  std::string mode = c.opt.mode;
  if (mode == "auto") mode = is_isometry(f, m1) && is_isometry(f, m2) ? "orthogonal" : "symplectic";
  std::optional<EnumeratedGroup> slot;
  ConjugacyVerdict v;
  if (mode == "orthogonal") {
    const auto* g = f.field.is_finite() ? maybe_group(c, f, GroupMode::Orthogonal, slot) : nullptr;
    v = stage("conjugacy.conjugate_involutions", [&] { return conjugate_involutions(f, m1, m2, c.bounds, g); });
  } else if (mode == "symplectic") {
    for (const auto* m : {&m1, &m2})
      if (!preserves_B(f, *m) || !(*m * *m).is_identity() || m->is_identity())
        throw StageError("involutions: not a symplectic involution");
    const auto t1 = classify_symplectic_involution(f, m1), t2 = classify_symplectic_involution(f, m2);
    if (t1 != t2) {
      v = {Answer::No, std::nullopt, "involution type"};
    } else if (t1 == SymplecticType::Diagonal && f.s() == 0) {
      v = stage("conjugacy.conjugate_symplectic_diagonal", [&] {
        return conjugate_symplectic_diagonal(symplectic_diagonal_factorization(f, m1),
                                             symplectic_diagonal_factorization(f, m2), c.bounds);
      });
    } else if (const auto* g = f.s() == 0 ? maybe_group(c, f, GroupMode::Symplectic, slot) : nullptr) {
      const auto w = find_conjugator(*g, m1, m2);
      v = {w ? Answer::Yes : Answer::No, w, "exhaustive search"};
    } else {
      v = {Answer::Inconclusive, std::nullopt, "no decision procedure without an enumerated group"};
    }
  } else {
    throw InputError("--mode must be auto, orthogonal or symplectic", c.opt.mode);
  }
  json r{{"type", "verdict"}, {"group", mode}, {"answer", conjugacy_word(v.answer)}, {"criterion", v.reason}};
  if (v.witness) r["witness"] = format_matrix(*v.witness);
  rep.record(r);
  rep.line("verdict: " + conjugacy_word(v.answer));
  rep.line("criterion: " + v.reason);
  if (v.witness) rep.line("witness: " + format_matrix(*v.witness));
  rep.finish(answer_code(v.answer), mode + " conjugacy of involutions");
  return rep;
}

std::vector<Elem> diagonal_entries(const Context& c, const std::string& text) {
  const auto q = parse_input("form", text, [&](const std::string& s) { return parse_form(c.field, s); });
  if (!q.pairs.empty()) throw InputError("congruent takes diagonal forms <a1,...>", text);
  return q.diag;
}

Report cmd_congruent(const Context& c) {
  if (c.opt.args.size() != 2) throw InputError("congruent takes two diagonal forms", "");
  const auto a = diagonal_entries(c, c.opt.args[0]), b = diagonal_entries(c, c.opt.args[1]);
  Report rep("congruent", {{"field", c.field.to_string()}, {"a", elems_text(a)}, {"b", elems_text(b)},
                           {"degree_bound", c.bounds.degree}});
  const auto v = stage("bilinear_congruence.congruent", [&] { return congruent(a, b, c.bounds); });
  json r{{"type", "verdict"}, {"answer", upper(v.answer)}, {"reason", v.reason}};
  if (v.witness) r["witness"] = format_matrix(*v.witness);
  rep.record(r);
  rep.line("congruent: " + upper(v.answer));
  rep.line("reason: " + v.reason);
  if (v.witness) rep.line("witness: " + format_matrix(*v.witness));
  rep.finish(answer_code(v.answer), "congruence of diagonal bilinear forms");
  return rep;
}

Report cmd_enumerate(const Context& c) {
  const auto f = c.form();
  const std::string mode_text = c.opt.mode == "auto" ? "orthogonal" : c.opt.mode;
  const auto mode = parse_group_mode(mode_text);
  if (!mode) throw InputError("--mode must be orthogonal, symplectic or radical-only", c.opt.mode);
  json in = base_inputs(c);
  in["mode"] = mode_text;
  in["cap"] = c.opt.cap;
  Report rep("enumerate", in);
  const auto g = stage("oracle.enumerate_group", [&] { return enumerate_group(f, *mode, c.opt.cap); });
  const auto invs = list_involutions(g);
  const auto orbits = stage("oracle.orbit_partition", [&] { return orbit_partition(g, invs); });
  rep.record({{"type", "group"},
              {"order", g.order()},
              {"predicted_order", predicted_order(f, *mode)},
              {"method", to_string(g.method)},
              {"generators", g.generators.size()},
              {"involutions", invs.size()},
              {"classes", orbits.orbits.size()}});
  rep.line("order: " + std::to_string(g.order()) + " (" + to_string(g.method) + ")");
  rep.line("involutions: " + std::to_string(invs.size()) + " in " + std::to_string(orbits.orbits.size()) +
           " classes");
  for (std::size_t i = 0; i < orbits.orbits.size(); ++i) {
    const std::string rep_text = format_matrix(invs[orbits.representatives[i]]);
    rep.record({{"type", "class"}, {"representative", rep_text}, {"size", orbits.orbits[i].size()}});
    rep.line("  " + std::to_string(orbits.orbits[i].size()) + " x " + rep_text);
  }
  rep.finish(0, "brute-force enumeration");
  return rep;
}

Report cmd_verify(const Context& c) {
  const auto f = c.form();
  json in = base_inputs(c);
  in["cap"] = c.opt.cap;
  Report rep("verify", in);
  const auto v = stage("oracle.verify_theorems", [&] { return verify_theorems(f, c.opt.cap); });
  rep.record({{"type", "group"},
              {"order", v.order},
              {"method", to_string(v.method)},
              {"involutions", v.involutions},
              {"classes", v.classes},
              {"generation_exception", v.generation_exception},
              {"transvection_subgroup_order", v.transvection_subgroup_order}});
  rep.line("order: " + std::to_string(v.order) + " (" + to_string(v.method) + "), involutions: " +
           std::to_string(v.involutions) + ", classes: " + std::to_string(v.classes));
  if (v.generation_exception)
    rep.line("orthogonal transvections generate a subgroup of order " +
             std::to_string(v.transvection_subgroup_order) + " only");
  for (const auto& chk : v.checks) {
    json fails = json::array();
    for (const auto& x : chk.failures) fails.push_back({{"element", x.element}, {"detail", x.detail}});
    rep.record({{"type", "check"},
                {"name", chk.name},
                {"checked", chk.checked},
                {"failed", chk.failed},
                {"failures", fails}});
    rep.line((chk.passed() ? "PASS " : "FAIL ") + chk.name + " (" + std::to_string(chk.checked) + " checked, " +
             std::to_string(chk.failed) + " failed)");
    for (const auto& x : chk.failures) rep.line("  " + x.element + ": " + x.detail);
  }
  rep.finish(v.passed() ? 0 : 1, "theorem verification against enumeration");
  return rep;
}

Report cmd_counterexample(const Context& c) {
  Report rep("counterexample", {{"field", "F2(t1,t2)"}, {"a", "<1,t2>"}, {"b", "<(1+t1^2*t2),(1+t2)>"}});
  const auto res = stage("bilinear_congruence.counterexample", [&] { return counterexample(c.bounds); });
  rep.record({{"type", "isometric"}, {"answer", upper(res.isometric)}});
  rep.record({{"type", "congruent"}, {"answer", upper(res.congruent)}});
  rep.record({{"type", "check_witness"},
              {"A", "[[1,1],[t1,1]]"},
              {"product", format_matrix(res.product)},
              {"matches", res.product == res.expected}});
  rep.line("quadratic forms isometric: " + upper(res.isometric));
  rep.line("bilinear forms congruent: " + upper(res.congruent));
  rep.line("A^T <1,t2> A = " + format_matrix(res.product));
  rep.finish(res.holds() ? 0 : 1, "counterexample to norm congruence over F2(t1,t2)");
  return rep;
}

}  // namespace

CounterexampleResult counterexample(const SearchBounds& bounds) {
  const Field k = Field::rational({"t1", "t2"});
  const Elem one = Elem::one(k), t1 = Elem::variable(k, 0), t2 = Elem::variable(k, 1);
  const std::vector<Elem> a{one, t2}, b{one + t1 * t1 * t2, one + t2};
  const QuadraticForm qa{k, {}, a}, qb{k, {}, b};
  Matrix A = Matrix::identity(k, 2), expected(k, 2, 2);
  A(0, 1) = one;
  A(1, 0) = t1;
  expected(0, 0) = b[0];
  expected(0, 1) = expected(1, 0) = one + t1 * t2;
  expected(1, 1) = b[1];
  return {is_isometric(qa, qb, bounds).answer, congruent(a, b, bounds).answer, congruence_product(a, A), expected};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quadratic forms and orthogonal involutions in characteristic 2"};
  app.require_subcommand(1);
  Options opt;
  std::array<std::string, 2> positional;
  app.add_option("--field", opt.field, "GF(2^m), GF(2^m; modulus=bits) or F2(t1,...)")->capture_default_str();
  app.add_option("--degree-bound", opt.degree_bound, "polynomial degree bound for function-field searches")
      ->capture_default_str();
  app.add_option("--cap", opt.cap, "maximum group order to enumerate")->capture_default_str();
  app.add_flag("--records", opt.records, "line-delimited JSON records instead of text");
  app.add_option("--out", opt.out, "write the report to a file");
  app.fallthrough();

  struct Verb {
    const char* name;
    const char* help;
    std::function<Report(const Context&)> fn;
    std::vector<const char*> positional;
  };
  const std::vector<Verb> verbs{
      {"normalize", "Witt decomposition of --form", cmd_normalize, {}},
      {"classify", "type and factorization of an involution", cmd_classify, {"involution"}},
      {"conjugate", "decide conjugacy of two involutions", cmd_conjugate, {"first", "second"}},
      {"congruent", "decide congruence of two diagonal bilinear forms", cmd_congruent, {"a", "b"}},
      {"enumerate", "enumerate the group of --form", cmd_enumerate, {}},
      {"verify", "check every theorem against enumeration", cmd_verify, {}},
      {"counterexample", "reproduce the F2(t1,t2) counterexample", cmd_counterexample, {}},
  };
  for (const auto& v : verbs) {
    auto* sub = app.add_subcommand(v.name, v.help);
    if (v.name != std::string("counterexample") && v.name != std::string("congruent"))
      sub->add_option("--form", opt.form, "quadratic form, e.g. \"H + [1,1] + <0,1>\"");
    if (v.name == std::string("conjugate") || v.name == std::string("enumerate"))
      sub->add_option("--mode", opt.mode, "group: orthogonal, symplectic, radical-only (enumerate)");
    for (std::size_t i = 0; i < v.positional.size(); ++i) sub->add_option(v.positional[i], positional[i])->required();
  }

  if (!args.empty() && !args[0].starts_with("-") &&
      std::none_of(verbs.begin(), verbs.end(), [&](const Verb& v) { return args[0] == v.name; })) {
    err << "error: unknown verb '" << args[0] << "'\n";
    return 1;
  }
  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const auto verb = std::find_if(verbs.begin(), verbs.end(), [&](const Verb& v) { return sub->get_name() == v.name; });
  opt.args.assign(positional.begin(), positional.begin() + std::ptrdiff_t(verb->positional.size()));
  const auto started = std::chrono::steady_clock::now();
  try {
    Context c{opt, Field::gf2m(1), SearchBounds{}};
    c.field = parse_input("--field", opt.field, [](const std::string& s) { return parse_field(s); });
    c.bounds.degree = opt.degree_bound;
    Report rep = verb->fn(c);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    if (opt.out.empty()) {
      rep.write(out, opt.records, ms);
    } else {
      std::ofstream file(opt.out);
      if (!file) throw InputError("cannot open --out file", opt.out);
      rep.write(file, opt.records, ms);
    }
    return rep.code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 1;
}

}  // namespace qf2::cli
