#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "selftest.hpp"
#include "urysohn.hpp"
#include "urysohn/io.hpp"

namespace {

using namespace urysohn;
using io::json;

enum Exit { ok = 0, input_error = 1, guard_refusal = 2, invariant_breach = 3 };

struct Context {
  bool as_json = false;
};

std::string frac(Grid num, Grid den) { return Fraction{num, den}.str(); }

void emit(const Context& ctx, const json& machine, const std::string& human) {
  if (ctx.as_json)
    std::cout << machine.dump(2) << '\n';
  else
    std::cout << human;
}

std::string table(const std::vector<std::string>& rows, const std::vector<std::string>& cols,
                  const std::vector<std::vector<std::string>>& cells) {
  std::size_t w = 0;
  for (const auto& r : rows) w = std::max(w, r.size());
  for (const auto& c : cols) w = std::max(w, c.size());
  for (const auto& row : cells)
    for (const auto& c : row) w = std::max(w, c.size());
  std::ostringstream out;
  out << std::setw(static_cast<int>(w)) << "";
  for (const auto& c : cols) out << "  " << std::setw(static_cast<int>(w)) << c;
  out << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << std::setw(static_cast<int>(w)) << rows[i];
    for (const auto& c : cells[i]) out << "  " << std::setw(static_cast<int>(w)) << c;
    out << '\n';
  }
  return out.str();
}

std::string matrix_table(const FiniteMetricSpace& s, const GridMatrix& m) {
  std::vector<std::vector<std::string>> cells(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) cells[i].push_back(frac(m(i, j), s.denominator()));
  return table(s.points(), s.points(), cells);
}

std::string space_table(const FiniteMetricSpace& s) { return matrix_table(s, s.distances()); }

std::string permutation_str(const FiniteMetricSpace& s, const Permutation& p) {
  std::string out;
  for (std::size_t x = 0; x < p.size(); ++x) out += (x ? " " : "") + s.name(x) + "->" + s.name(p[x]);
  return out;
}

json permutation_json(const FiniteMetricSpace& s, const Permutation& p) {
  json out = json::object();
  for (std::size_t x = 0; x < p.size(); ++x) out[s.name(x)] = s.name(p[x]);
  return out;
}

std::string values_str(const std::vector<Grid>& v, Grid q) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + frac(v[i], q);
  return out + ")";
}

std::vector<std::size_t> point_list(const FiniteMetricSpace& s, const std::string& csv) {
  std::vector<std::size_t> out;
  std::stringstream in(csv);
  std::string name;
  while (std::getline(in, name, ','))
    if (!name.empty()) out.push_back(s.index_of(name));
  return out;
}

unsigned worker_count() {
  const char* env = std::getenv("URYSOHN_WORKERS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1 || v > 256) throw InputError("URYSOHN_WORKERS must be an integer in [1, 256]");
  return static_cast<unsigned>(v);
}

// ---- metric spaces -------------------------------------------------------

int cmd_validate(const Context& ctx, const std::string& path, bool pseudo) {
  const auto doc = io::read_document(path);
  const auto c = io::candidate_from_json(doc.value);
  const auto report = validate_space(c, pseudo ? SpaceKind::pseudometric : SpaceKind::metric);
  json machine = {{"valid", report.valid()}, {"violations", json::array()}};
  std::string human = report.valid() ? "valid\n" : "";
  for (const auto& v : report.violations) {
    const std::string where = c.points[v.i] + "," + c.points[v.j] + "," + c.points[v.k];
    machine["violations"].push_back({{"axiom", axiom_name(v.axiom)}, {"points", {c.points[v.i], c.points[v.j], c.points[v.k]}}});
    human += std::string("invalid: ") + axiom_name(v.axiom) + " at (" + where + ")\n";
  }
  emit(ctx, machine, human);
  return report.valid() ? ok : input_error;
}

int cmd_complete(const Context& ctx, const std::string& path) {
  const auto doc = io::read_document(path);
  const auto s = shortest_path_completion(io::partial_from_json(doc.value));
  const std::string kind = s.separates_points() ? "metric" : "pseudometric";
  emit(ctx, {{"kind", kind}, {"space", io::space_to_json(s)}}, kind + "\n" + space_table(s));
  return ok;
}

int cmd_amalgam(const Context& ctx, const std::string& path) {
  const auto in = io::amalgam_from_json(io::read_document(path));
  const auto a = amalgam(in.x, in.y, in.glue);
  emit(ctx, {{"space", io::space_to_json(a.space)}, {"embed_x", a.embed_x}, {"embed_y", a.embed_y}},
       space_table(a.space));
  return ok;
}

int cmd_isogroup(const Context& ctx, const std::string& path) {
  const auto s = io::space_ref(io::read_document(path).value, {});
  const auto group = iso_group(s);
  json perms = json::array();
  std::string human = "order " + std::to_string(group.size()) + (is_point_transitive(s, group) ? ", point-transitive\n" : "\n");
  for (const auto& g : group) {
    perms.push_back(permutation_json(s, g));
    human += permutation_str(s, g) + "\n";
  }
  emit(ctx, {{"order", group.size()}, {"transitive", is_point_transitive(s, group)}, {"isometries", perms}}, human);
  return ok;
}

// ---- Katetov functions and approximants ------------------------------------

int cmd_katetov_check(const Context& ctx, const std::string& path) {
  const auto in = io::katetov_from_json(io::read_document(path));
  const auto c = is_katetov(in.space, in.f);
  json machine = {{"katetov", c.ok}};
  std::string human = c.ok ? "katetov\n" : "";
  if (!c.ok) {
    const auto [x, y] = *c.witness;
    const std::string rule = c.distance_exceeds_sum ? "d(x,y) > f(x)+f(y)" : "|f(x)-f(y)| > d(x,y)";
    machine["witness"] = {in.space.name(x), in.space.name(y)};
    machine["rule"] = rule;
    human = "not katetov: " + rule + " at (" + in.space.name(x) + "," + in.space.name(y) + ")\n";
  }
  emit(ctx, machine, human);
  return ok;
}

int cmd_katetov_extend(const Context& ctx, const std::string& path) {
  const auto in = io::katetov_from_json(io::read_document(path));
  const auto g = kappa_extend(in.space, in.f);
  std::vector<std::vector<std::string>> cells{{}};
  for (Grid v : g) cells[0].push_back(frac(v, in.space.denominator()));
  emit(ctx, {{"points", in.space.points()}, {"denominator", in.space.denominator()}, {"values", g}},
       table({"f"}, in.space.points(), cells));
  return ok;
}

int cmd_katetov_realize(const Context& ctx, const std::string& path, const std::string& name) {
  const auto in = io::katetov_from_json(io::read_document(path));
  const auto g = kappa_extend(in.space, in.f);
  const auto ext = realize_one_point(in.space, g, name);
  json machine = {{"space", io::space_to_json(ext.space)}};
  std::string human = space_table(ext.space);
  if (ext.identified_with) {
    machine["identified_with"] = in.space.name(*ext.identified_with);
    human += "new point coincides with " + in.space.name(*ext.identified_with) + "\n";
  }
  emit(ctx, machine, human);
  return ok;
}

int cmd_approximant_build(const Context& ctx, const std::string& path, const ApproximantOptions& opts) {
  const auto seed = io::space_ref(io::read_document(path).value, {});
  const auto a = build_approximant(seed, opts);
  emit(ctx,
       {{"status", status_name(a.status)}, {"size", a.space.size()}, {"space", io::space_to_json(a.space)}},
       std::string("status ") + status_name(a.status) + ", " + std::to_string(a.space.size()) + " points\n" +
           space_table(a.space));
  return ok;
}

int cmd_approximant_verify(const Context& ctx, const std::string& path, std::size_t subset, Grid grid,
                           std::size_t homog) {
  const auto s = io::space_ref(io::read_document(path).value, {});
  const auto inj = injectivity_check(s, subset, grid);
  const auto hom = homogeneity_check(s, homog);
  json unrealized = json::array();
  std::string human = "katetov functions checked " + std::to_string(inj.functions_checked) + ", unrealized " +
                      std::to_string(inj.unrealized.size()) + "\n";
  for (const auto& f : inj.unrealized) {
    json entry = json::object();
    std::string line = "  unrealized:";
    for (std::size_t k = 0; k < f.support.size(); ++k) {
      entry[s.name(f.support[k])] = frac(f.values[k], inj.grid);
      line += " " + s.name(f.support[k]) + "=" + frac(f.values[k], inj.grid);
    }
    unrealized.push_back(entry);
    human += line + "\n";
  }
  human += "partial isometries checked " + std::to_string(hom.checked) + ", non-extendable " +
           std::to_string(hom.non_extendable.size()) + "\n";
  emit(ctx,
       {{"functions_checked", inj.functions_checked},
        {"unrealized", unrealized},
        {"partial_isometries_checked", hom.checked},
        {"non_extendable", hom.non_extendable.size()}},
       human);
  return ok;
}

// ---- bi-Katetov matrices ---------------------------------------------------

int emit_matrix(const Context& ctx, const FiniteMetricSpace& s, const GridMatrix& m) {
  emit(ctx, io::matrix_to_json(s, m), matrix_table(s, m));
  return ok;
}

io::MatrixInput bi_katetov_input(const std::string& path) {
  auto in = io::matrix_from_json(io::read_document(path));
  if (auto c = check_bi_katetov(in.space, in.entries); !c)
    throw InputError("'" + path + "' is not bi-Katetov: " + (c.by_row ? "row " : "column ") +
                     in.space.name(c.line) + " fails at (" + in.space.name(c.a) + "," + in.space.name(c.b) + ")");
  return in;
}

int cmd_theta_product(const Context& ctx, const std::string& a, const std::string& b) {
  const auto f = bi_katetov_input(a);
  const auto g = bi_katetov_input(b);
  if (!(f.space == g.space)) throw InputError("factors are defined on different spaces");
  return emit_matrix(ctx, f.space, product(f.space, f.entries, g.entries));
}

int cmd_theta_star(const Context& ctx, const std::string& a) {
  const auto f = bi_katetov_input(a);
  return emit_matrix(ctx, f.space, star(f.entries));
}

int cmd_theta_bf(const Context& ctx, const std::string& path, const std::string& set) {
  const auto s = io::space_ref(io::read_document(path).value, {});
  return emit_matrix(ctx, s, idempotent_bF(s, point_list(s, set)));
}

int cmd_theta_classify(const Context& ctx, const std::string& path) {
  const auto s = io::space_ref(io::read_document(path).value, {});
  const auto found = classify_idempotents(s, worker_count());
  json list = json::array();
  std::string human = std::to_string(found.size()) + " idempotents >= d\n";
  bool all = true;
  for (const auto& c : found) {
    std::vector<std::string> zero;
    for (std::size_t z : c.zero_set) zero.push_back(s.name(z));
    list.push_back({{"entries", io::matrix_to_json(s, c.p)["entries"]}, {"zero_set", zero}, {"equals_bF", c.equals_bF}});
    std::string f = "{";
    for (std::size_t i = 0; i < zero.size(); ++i) f += (i ? "," : "") + zero[i];
    human += "F=" + f + "} " + (c.equals_bF ? "equals b_F" : "DIFFERS from b_F") + "\n" + matrix_table(s, c.p);
    all = all && c.equals_bF;
  }
  emit(ctx, {{"count", found.size()}, {"idempotents", list}}, human);
  return all ? ok : invariant_breach;
}

int cmd_theta_greatest(const Context& ctx, const std::vector<std::string>& paths) {
  std::vector<GridMatrix> gens;
  FiniteMetricSpace s;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    auto in = bi_katetov_input(paths[i]);
    if (i == 0) s = in.space;
    else if (!(in.space == s)) throw InputError("'" + paths[i] + "' is defined on a different space");
    gens.push_back(std::move(in.entries));
  }
  const auto top = greatest_idempotent(s, gens);
  if (!top) {
    emit(ctx, {{"greatest", nullptr}}, "no element of the generated semigroup dominates d\n");
    return ok;
  }
  return emit_matrix(ctx, s, *top);
}

int cmd_theta_invert(const Context& ctx, const std::string& path) {
  const auto f = bi_katetov_input(path);
  const auto phi = is_invertible(f.space, f.entries);
  if (!phi) {
    emit(ctx, {{"invertible", false}}, "not invertible\n");
    return ok;
  }
  const GridMatrix inv = star(f.entries);
  if (!is_two_sided_inverse(f.space, f.entries, inv)) throw InvariantBreach("f* is not a two-sided inverse of i(phi)");
  emit(ctx, {{"invertible", true}, {"isometry", permutation_json(f.space, *phi)}, {"inverse", io::matrix_to_json(f.space, inv)["entries"]}},
       "invertible: i(" + permutation_str(f.space, *phi) + ")\ninverse\n" + matrix_table(f.space, inv));
  return ok;
}

// ---- Graev seminorms -------------------------------------------------------

int cmd_graev_norm(const Context& ctx, const std::string& path, bool oracle) {
  const auto in = io::word_from_json(io::read_document(path));
  const Grid p = oracle ? graev_norm_bruteforce(in.word, in.alphabet) : graev_norm_dp(in.word, in.alphabet);
  const std::string v = frac(p, in.alphabet.denominator());
  emit(ctx, {{"word", format_word(in.word, in.alphabet.space().points())}, {"norm", v}}, v + "\n");
  return ok;
}

int cmd_graev_dist(const Context& ctx, const std::string& path, const std::string& other, bool oracle) {
  const auto in = io::word_from_json(io::read_document(path));
  const GroupWord v = parse_word(other, in.alphabet.space().points());
  const GroupWord w = reduce_word(concat(inverse_word(in.word), v));
  const Grid p = oracle ? graev_norm_bruteforce(w, in.alphabet) : graev_norm_dp(w, in.alphabet);
  const std::string s = frac(p, in.alphabet.denominator());
  emit(ctx, {{"distance", s}}, s + "\n");
  return ok;
}

// ---- relation words --------------------------------------------------------

std::string pairs_str(const FiniteMetricSpace& s, const Relation& r) {
  std::string out = "{";
  for (std::size_t i = 0; i < r.pairs.size(); ++i)
    out += (i ? ", " : "") + std::string("(") + s.name(r.pairs[i].first) + "," + s.name(r.pairs[i].second) + ")";
  return out + "}";
}

json pairs_json(const FiniteMetricSpace& s, const Relation& r) {
  json out = json::array();
  for (const auto& [a, b] : r.pairs) out.push_back({s.name(a), s.name(b)});
  return out;
}

int cmd_homog_phi(const Context& ctx, const std::string& path) {
  const auto in = io::relation_word_from_json(io::read_document(path));
  const Relation phi = to_relation(phi_of_word(in.alphabet, in.word));
  emit(ctx, {{"word", format_word(in.word, in.alphabet.names())}, {"phi", pairs_json(in.alphabet.space(), phi)}},
       pairs_str(in.alphabet.space(), phi) + "\n");
  return ok;
}

int cmd_homog_nu(const Context& ctx, const std::string& path, const std::string& from, const std::string& to,
                 std::size_t max_len) {
  const auto doc = io::read_document(path);
  const bool has_relations = doc.value.is_object() && doc.value.contains("relations");
  const RelationAlphabet alpha = has_relations ? io::relation_word_from_json(doc).alphabet
                                               : singleton_alphabet(io::space_ref(doc.value, doc.base));
  const auto& m = alpha.space();
  NuResult r;
  try {
    r = nu_truncated(alpha, m.index_of(from), m.index_of(to), max_len);
  } catch (const NuSearchRefusal& e) {
    std::cerr << "partial minimum: "
              << (e.partial_minimum() ? frac(*e.partial_minimum(), m.denominator()) : std::string("none")) << '\n';
    throw;
  }
  const std::string v = r.value ? frac(*r.value, m.denominator()) : "none";
  json machine = {{"nu", r.value ? json(v) : json(nullptr)}, {"words_examined", r.words_examined}};
  std::string human = v + "\n";
  if (r.value) {
    machine["witness"] = format_word(r.witness, alpha.names());
    human += "witness " + format_word(r.witness, alpha.names()) + "\n";
  }
  emit(ctx, machine, human);
  return ok;
}

int cmd_homog_lemma42(const Context& ctx, const std::string& path) {
  const auto in = io::relation_word_from_json(io::read_document(path));
  const auto& m = in.alphabet.space();
  const Grid p = graev_norm_dp(in.word, in.alphabet);
  const Relation phi = to_relation(phi_of_word(in.alphabet, in.word));
  bool all = true;
  json rows = json::array();
  std::string human = "p(w) = " + frac(p, m.denominator()) + "\n";
  for (const auto& [a, b] : phi.pairs) {
    const bool holds = p >= m.d(a, b);
    all = all && holds;
    rows.push_back({{"pair", {m.name(a), m.name(b)}}, {"d", frac(m.d(a, b), m.denominator())}, {"holds", holds}});
    human += "(" + m.name(a) + "," + m.name(b) + ") d = " + frac(m.d(a, b), m.denominator()) +
             (holds ? " holds\n" : " VIOLATED\n");
  }
  emit(ctx, {{"p", frac(p, m.denominator())}, {"pairs", rows}}, human);
  return all ? ok : invariant_breach;
}

int cmd_homog_lemma43(const Context& ctx, const std::string& path, int which, int e, int f,
                      const std::string& use) {
  const auto in = io::relation_word_from_json(io::read_document(path));
  const auto& alpha = in.alphabet;
  std::vector<Relation> rels;
  if (use.empty()) {
    const std::size_t need = which == 2 ? 3 : 2;
    if (alpha.size() < need) throw InputError("case needs " + std::to_string(need) + " relations");
    for (std::size_t i = 0; i < need; ++i) rels.push_back(alpha.relation(i));
  } else {
    std::stringstream ss(use);
    std::string id;
    while (std::getline(ss, id, ',')) {
      const auto it = std::find(alpha.names().begin(), alpha.names().end(), id);
      if (it == alpha.names().end()) throw InputError("unknown relation '" + id + "'");
      rels.push_back(alpha.relation(static_cast<std::size_t>(it - alpha.names().begin())));
    }
  }
  const auto r = check_k_bounds(alpha.space(), which, rels, e, f);
  const Grid q = alpha.space().denominator();
  emit(ctx, {{"status", bound_status_name(r.status)}, {"k", frac(r.lhs, q)}, {"bound", frac(r.rhs, q)}},
       std::string(bound_status_name(r.status)) +
           (r.status == BoundStatus::skipped ? "\n" : ": k(S) = " + frac(r.lhs, q) + ", bound " + frac(r.rhs, q) + "\n"));
  return r.status == BoundStatus::violated ? invariant_breach : ok;
}

// ---- enumerated Gromov-Hausdorff distance ----------------------------------

int cmd_gh_dist(const Context& ctx, const std::string& path, bool oracle) {
  const auto inst = io::gh_instance_from_json(io::read_document(path));
  json machine;
  std::string human;
  if (oracle) {
    const auto r = gh_en_oracle(inst);
    machine["distance"] = r.value.str();
    human = r.value.str() + "\n";
    if (r.below) {
      const auto& c = *r.below;
      const auto& s = c.in_x ? inst.x : inst.y;
      const Grid q2 = 2 * inst.denominator();
      machine["below"] = {{"space", c.in_x ? "X" : "Y"}, {"pair", {s.name(c.i), s.name(c.j)}},
                          {"original", frac(c.original, q2)}, {"contracted", frac(c.contracted, q2)}};
      human += "one step lower, d" + std::string(c.in_x ? "X" : "Y") + "(" + s.name(c.i) + "," + s.name(c.j) +
               ") shrinks from " + frac(c.original, q2) + " to " + frac(c.contracted, q2) + "\n";
    }
  } else {
    const auto v = gh_en_formula(inst);
    machine["distance"] = v.str();
    human = v.str() + "\n";
  }
  emit(ctx, machine, human);
  return ok;
}

// ---- relations on K --------------------------------------------------------

int cmd_relations_k(const Context& ctx, const std::string& path) {
  const GridFunctionSpace k(io::space_ref(io::read_document(path).value, {}));
  const Grid q = k.space().denominator();
  std::string human = std::to_string(k.size()) + " members\n";
  for (std::size_t i = 0; i < k.size(); ++i) human += std::to_string(i) + " " + values_str(k.member(i), q) + "\n";
  emit(ctx, {{"space", io::space_to_json(k.space())}, {"members", io::members_to_json(k)}}, human);
  return ok;
}

int cmd_relations_h(const Context& ctx, const std::string& path) {
  const auto in = io::k_relation_from_json(io::read_document(path));
  return emit_matrix(ctx, in.carrier.space(), H_of(in.carrier, in.relation));
}

int cmd_relations_hinv(const Context& ctx, const std::string& path) {
  const auto in = bi_katetov_input(path);
  const GridFunctionSpace k(in.space);
  const BoolMatrix r = Hinv_of(k, in.entries);
  const Grid q = in.space.denominator();
  std::string human;
  std::size_t count = 0;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < r.size(); ++j)
      if (r(i, j)) {
        ++count;
        human += values_str(k.member(i), q) + " ~ " + values_str(k.member(j), q) + "\n";
      }
  emit(ctx, io::k_relation_to_json(k, r), std::to_string(count) + " pairs\n" + human);
  return ok;
}

int cmd_relations_roundtrip(const Context& ctx, const std::string& path) {
  const auto in = bi_katetov_input(path);
  const GridFunctionSpace k(in.space);
  const BoolMatrix r = Hinv_of(k, in.entries);
  const GridMatrix back = H_of(k, r);
  const bool exact = back == in.entries;
  for (std::size_t y0 = 0; y0 < in.space.size(); ++y0) {
    const auto [p, q] = roundtrip_witness(in.space, in.entries, y0);
    if (!r(k.index_of(p), k.index_of(q))) throw InvariantBreach("witness pair for column " + in.space.name(y0) + " is not related");
  }
  emit(ctx, {{"exact", exact}, {"H", io::matrix_to_json(in.space, back)["entries"]}},
       std::string(exact ? "round trip exact\n" : "round trip MISMATCH\n") + matrix_table(in.space, back));
  return exact ? ok : invariant_breach;
}

// ---- selftest --------------------------------------------------------------

int cmd_selftest(const Context& ctx) {
  json results = json::object();
  std::string human;
  bool all = true;
  for (const auto& suite : selftest::suites(worker_count())) {
    const std::string failure = suite.run();
    all = all && failure.empty();
    results[suite.name] = failure.empty() ? "pass" : failure;
    human += (failure.empty() ? "PASS " : "FAIL ") + suite.name + (failure.empty() ? "" : ": " + failure) + "\n";
  }
  emit(ctx, results, human);
  return all ? ok : invariant_breach;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact finite-scale Katetov, bi-Katetov, Graev and relation computations"};
  app.require_subcommand(1);
  Context ctx;
  app.add_flag("--json", ctx.as_json, "Machine-readable output");
  app.fallthrough();

  std::string file, file2, name = "p", set, other, from, to, use;
  std::vector<std::string> files;
  bool pseudo = false, oracle = false;
  std::size_t max_len = 2, homog = 1;
  int which = 1, e = 1, f = 1;
  ApproximantOptions opts;
  std::string strategy = "repair";
  std::function<int()> action;

  auto file_arg = [&](CLI::App* s, const char* what = "Input JSON file") {
    s->add_option("file", file, what)->required();
  };

  auto* validate = app.add_subcommand("validate", "Check the metric axioms of a space file");
  file_arg(validate);
  validate->add_flag("--pseudo", pseudo, "Allow zero distances between distinct points");
  validate->callback([&] { action = [&] { return cmd_validate(ctx, file, pseudo); }; });

  auto* complete = app.add_subcommand("complete", "Shortest-path completion of a partial space");
  file_arg(complete);
  complete->callback([&] { action = [&] { return cmd_complete(ctx, file); }; });

  auto* amalg = app.add_subcommand("amalgam", "Amalgam of two spaces over a glued subspace");
  file_arg(amalg);
  amalg->callback([&] { action = [&] { return cmd_amalgam(ctx, file); }; });

  auto* iso = app.add_subcommand("isogroup", "Isometry group of a space");
  file_arg(iso);
  iso->callback([&] { action = [&] { return cmd_isogroup(ctx, file); }; });

  auto* kat = app.add_subcommand("katetov", "Katetov functions");
  kat->require_subcommand(1);
  auto* kcheck = kat->add_subcommand("check", "Check the Katetov inequalities");
  file_arg(kcheck);
  kcheck->callback([&] { action = [&] { return cmd_katetov_check(ctx, file); }; });
  auto* kext = kat->add_subcommand("extend", "Largest Katetov extension to the whole space");
  file_arg(kext);
  kext->callback([&] { action = [&] { return cmd_katetov_extend(ctx, file); }; });
  auto* kreal = kat->add_subcommand("realize", "Add a point realizing the extended function");
  file_arg(kreal);
  kreal->add_option("--name", name, "Name of the new point");
  kreal->callback([&] { action = [&] { return cmd_katetov_realize(ctx, file, name); }; });

  auto* appr = app.add_subcommand("approximant", "Finite approximants of the Urysohn space");
  appr->require_subcommand(1);
  auto* build = appr->add_subcommand("build", "Grow a seed space until every small Katetov function is realized");
  file_arg(build, "Seed space file");
  build->add_option("--subset", opts.subset, "Largest support size s")->capture_default_str();
  build->add_option("--grid", opts.grid, "Grid denominator q (0: the seed's own)")->capture_default_str();
  build->add_option("--cap", opts.cap, "Maximum number of points")->capture_default_str();
  build->add_option("--seed", opts.seed, "Random seed")->capture_default_str();
  build->add_option("--strategy", strategy, "kappa or repair")->check(CLI::IsMember({"kappa", "repair"}))->capture_default_str();
  build->callback([&] {
    opts.strategy = strategy == "kappa" ? ApproximantStrategy::kappa : ApproximantStrategy::repair;
    action = [&] { return cmd_approximant_build(ctx, file, opts); };
  });
  auto* verify = appr->add_subcommand("verify", "Injectivity and homogeneity checks");
  file_arg(verify, "Space file");
  verify->add_option("--subset", opts.subset, "Largest support size s")->capture_default_str();
  verify->add_option("--grid", opts.grid, "Grid denominator q (0: the space's own)")->capture_default_str();
  verify->add_option("--homog", homog, "Largest partial isometry domain")->capture_default_str();
  verify->callback([&] { action = [&] { return cmd_approximant_verify(ctx, file, opts.subset, opts.grid, homog); }; });

  auto* theta = app.add_subcommand("theta", "Bi-Katetov matrices under the bounded min-plus product");
  theta->require_subcommand(1);
  auto* prod = theta->add_subcommand("product", "f * g");
  prod->add_option("f", file, "Matrix file")->required();
  prod->add_option("g", file2, "Matrix file")->required();
  prod->callback([&] { action = [&] { return cmd_theta_product(ctx, file, file2); }; });
  auto* st = theta->add_subcommand("star", "Transpose f*");
  file_arg(st, "Matrix file");
  st->callback([&] { action = [&] { return cmd_theta_star(ctx, file); }; });
  auto* bf = theta->add_subcommand("bf", "Idempotent b_F routed through a subset F");
  file_arg(bf, "Space file");
  bf->add_option("--set", set, "Comma-separated point names of F (empty: constant 1)");
  bf->callback([&] { action = [&] { return cmd_theta_bf(ctx, file, set); }; });
  auto* cls = theta->add_subcommand("classify", "Enumerate all grid idempotents >= d");
  file_arg(cls, "Space file");
  cls->callback([&] { action = [&] { return cmd_theta_classify(ctx, file); }; });
  auto* great = theta->add_subcommand("greatest", "Greatest idempotent of the semigroup generated by matrices");
  great->add_option("files", files, "Matrix files")->required();
  great->callback([&] { action = [&] { return cmd_theta_greatest(ctx, files); }; });
  auto* inv = theta->add_subcommand("invert", "Invertibility via the isometry group");
  file_arg(inv, "Matrix file");
  inv->callback([&] { action = [&] { return cmd_theta_invert(ctx, file); }; });

  auto* graev = app.add_subcommand("graev", "Graev seminorm on free-group words");
  graev->require_subcommand(1);
  auto* gnorm = graev->add_subcommand("norm", "p(w)");
  file_arg(gnorm, "Word file");
  gnorm->add_flag("--oracle", oracle, "Minimize over all pairings instead of the interval DP");
  gnorm->callback([&] { action = [&] { return cmd_graev_norm(ctx, file, oracle); }; });
  auto* gdist = graev->add_subcommand("dist", "p(u^-1 v) for the file's word u");
  file_arg(gdist, "Word file");
  gdist->add_option("--other", other, "The word v")->required();
  gdist->add_flag("--oracle", oracle, "Minimize over all pairings instead of the interval DP");
  gdist->callback([&] { action = [&] { return cmd_graev_dist(ctx, file, other, oracle); }; });

  auto* hom = app.add_subcommand("homog", "Words over partial isometries");
  hom->require_subcommand(1);
  auto* phi = hom->add_subcommand("phi", "Relation image of the file's word");
  file_arg(phi, "Relation-word file");
  phi->callback([&] { action = [&] { return cmd_homog_phi(ctx, file); }; });
  auto* nu = hom->add_subcommand("nu", "Least seminorm of a word mapping one point to another");
  file_arg(nu, "Relation-word file, or a space file for singleton generators");
  nu->add_option("--from", from, "Point a")->required();
  nu->add_option("--to", to, "Point b")->required();
  nu->add_option("--max-len", max_len, "Longest word considered")->capture_default_str();
  nu->callback([&] { action = [&] { return cmd_homog_nu(ctx, file, from, to, max_len); }; });
  auto* l42 = hom->add_subcommand("lemma42", "p(w) >= d(a,b) for every (a,b) in the image of w");
  file_arg(l42, "Relation-word file");
  l42->callback([&] { action = [&] { return cmd_homog_lemma42(ctx, file); }; });
  auto* l43 = hom->add_subcommand("lemma43", "Weight bounds for short compositions");
  file_arg(l43, "Relation-word file");
  l43->add_option("--case", which, "1, 2 or 3")->check(CLI::Range(1, 3))->capture_default_str();
  l43->add_option("--e", e, "Sign of the outer factors")->check(CLI::IsMember({-1, 1}))->capture_default_str();
  l43->add_option("--f", f, "Sign of the middle factor")->check(CLI::IsMember({-1, 1}))->capture_default_str();
  l43->add_option("--use", use, "Comma-separated relation ids (default: the first ones in the file)");
  l43->callback([&] { action = [&] { return cmd_homog_lemma43(ctx, file, which, e, f, use); }; });

  auto* gh = app.add_subcommand("gh", "Enumerated Gromov-Hausdorff distance");
  gh->require_subcommand(1);
  auto* ghd = gh->add_subcommand("dist", "Distance between the enumerated spaces X and Y");
  file_arg(ghd, "Instance file");
  ghd->add_flag("--oracle", oracle, "Scan the common cross distance instead of the closed formula");
  ghd->callback([&] { action = [&] { return cmd_gh_dist(ctx, file, oracle); }; });

  auto* rel = app.add_subcommand("relations", "Relations on non-expanding grid functions");
  rel->require_subcommand(1);
  auto* rk = rel->add_subcommand("k", "Enumerate the carrier K");
  file_arg(rk, "Space file");
  rk->callback([&] { action = [&] { return cmd_relations_k(ctx, file); }; });
  auto* rh = rel->add_subcommand("h", "Matrix H(R) of a relation on K");
  file_arg(rh, "Relation-on-K file");
  rh->callback([&] { action = [&] { return cmd_relations_h(ctx, file); }; });
  auto* rhinv = rel->add_subcommand("hinv", "Relation H^-1(f) of a bi-Katetov matrix");
  file_arg(rhinv, "Matrix file");
  rhinv->callback([&] { action = [&] { return cmd_relations_hinv(ctx, file); }; });
  auto* rrt = rel->add_subcommand("roundtrip", "Check H(H^-1(f)) = f");
  file_arg(rrt, "Matrix file");
  rrt->callback([&] { action = [&] { return cmd_relations_roundtrip(ctx, file); }; });

  auto* self = app.add_subcommand("selftest", "Exhaustive small-case suites");
  self->callback([&] { action = [&] { return cmd_selftest(ctx); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return input_error;
  }

  try {
    return action();
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return input_error;
  } catch (const GuardRefusal& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return guard_refusal;
  } catch (const InvariantBreach& e) {
    std::cerr << "invariant breach: " << e.what() << '\n';
    return invariant_breach;
  }
}
