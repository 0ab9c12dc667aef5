// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails. All randomness is fixed-seed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "metamine/engine.hpp"
#include "metamine/error.hpp"
#include "metamine/gadgets.hpp"
#include "metamine/oracle.hpp"
#include "metamine/structure.hpp"
#include "support/generators.hpp"

using namespace metamine;
namespace mt = metamine::testing;

namespace {

// Pinned parameters.
constexpr int equivalence_instances = 500;
constexpr int reducer_instances = 200;
constexpr int csat_instances = 60;
constexpr int reduction_instances = 100;
constexpr double decomposition_slope_max = 1.5;  // strict upper bound
constexpr double oracle_slope_min = 2.0;         // inclusive lower bound
constexpr int timing_repeats = 3;                // minimum of repeats is kept

const Thresholds zeros{Ratio::zero(), Ratio::zero(), Ratio::zero()};

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome criterion_examples() {
  const Database db = gen_fig1();
  const auto mq = parse_metaquery("R(X,Z) <- P(X,Y), Q(Y,Z).");
  const auto result = find_rules(db, mq, zeros, InstantiationType::type0);
  const Indices expected{Ratio::one(), Ratio::one(), Ratio(5, 7)};
  bool found = false;
  for (const auto& r : result.rules)
    if (r.rule.to_string() == "UsPT(X,Z) <- UsCa(X,Y), CaTe(Y,Z).") found = r.indices == expected;
  const Rule cover{{"UsCa", {"X", "Z"}}, {{"UsPT", {"X", "H"}}}};
  const Ratio engine_cvr = indices(cover, db).cvr;
  const Ratio oracle_cvr = brute_force_indices(cover, db).cvr;
  const bool ok = found && engine_cvr == Ratio::one() && oracle_cvr == Ratio::one();
  return {ok, std::string("canonical rule ") + (found ? "found with (1/1, 1/1, 5/7)" : "missing or wrong") +
                  "; cover example cvr " + engine_cvr.to_string() + " (oracle " + oracle_cvr.to_string() + ")"};
}

LiteralScheme ls(const std::string& symbol, std::vector<std::string> args) {
  return {symbol, std::isupper(static_cast<unsigned char>(symbol[0])) != 0, std::move(args)};
}

Outcome criterion_structure() {
  std::vector<std::string> failed;
  auto expect = [&](bool ok, const char* what) {
    if (!ok) failed.emplace_back(what);
  };
  expect(is_acyclic(parse_metaquery("P(X,Y) <- P(Y,Z), Q(Z,W).")), "MQ1 acyclic");
  expect(!is_acyclic(parse_metaquery("P(X,Y) <- Q(Y,Z), P(Z,W).")), "MQ2 cyclic");
  const auto n = parse_metaquery("N(X) <- N(Y), E(X,Y).");
  expect(is_semi_acyclic(n) && !is_acyclic(n), "N query semi-acyclic only");

  const auto tree = build_join_tree({ls("p", {"A", "B"}), ls("q", {"B", "C"}), ls("r", {"C", "D"})});
  expect(tree && tree->root == 1 && tree->children[1] == std::vector<std::size_t>{0, 2} && is_join_tree(*tree),
         "chain join tree");
  if (tree)
    expect(render_program(*tree, full_reducer(*tree)) ==
               "q(B,C) := q(B,C) semijoin r(C,D)\n"
               "q(B,C) := q(B,C) semijoin p(A,B)\n"
               "p(A,B) := p(A,B) semijoin q(B,C)\n"
               "r(C,D) := r(C,D) semijoin q(B,C)\n",
           "four-step reducer");
  const auto hd = hypertree_decompose({ls("P", {"A", "B"}), ls("Q", {"B", "C"}), ls("R", {"C", "D"}), ls("S", {"B", "D"})});
  expect(hd.width() == 2 && check_decomposition(hd).ok(), "width 2");
  std::string detail = failed.empty() ? "all 7 checks hold" : "failed:";
  for (const auto& f : failed) detail += " [" + f + "]";
  return {failed.empty(), detail};
}

Outcome criterion_equivalence() {
  std::mt19937 rng(20240601);
  int compared = 0, mismatches = 0, refused = 0, rules = 0;
  int per_type[3] = {0, 0, 0};
  while (compared < equivalence_instances) {
    const Database db = mt::random_database(rng, {4, 25, 3, 3});
    const int t = static_cast<int>(rng() % 3);
    const auto type = instantiation_type(t);
    const auto mq = mt::random_metaquery(rng, db, 4, type == InstantiationType::type2);
    const auto th = mt::random_thresholds(rng);
    std::vector<MinedRule> reference;
    try {
      reference = brute_force_mine(db, mq, th, type);
    } catch (const OracleRefused&) {
      ++refused;
      continue;
    }
    const auto got = find_rules(db, mq, th, type).rules;
    ++compared;
    ++per_type[t];
    rules += static_cast<int>(reference.size());
    if (mt::encode(got) != mt::encode(reference)) ++mismatches;
  }
  return {mismatches == 0, std::to_string(compared) + " instances (types 0/1/2: " + std::to_string(per_type[0]) + "/" +
                               std::to_string(per_type[1]) + "/" + std::to_string(per_type[2]) + "), " +
                               std::to_string(rules) + " rules, " + std::to_string(mismatches) + " mismatches, " +
                               std::to_string(refused) + " oracle refusals skipped"};
}

Outcome criterion_reducer() {
  std::mt19937 rng(1357);
  int checked = 0, bad = 0;
  while (checked < reducer_instances) {
    const auto atoms = mt::random_atoms(rng, 1 + static_cast<int>(rng() % 4), 5);
    std::vector<LiteralScheme> schemes;
    for (const auto& a : atoms) schemes.push_back(scheme_of(a));
    const auto tree = build_join_tree(schemes);
    if (!tree) continue;
    ++checked;
    const Database db = mt::random_database_for(rng, atoms, 20, 3);
    std::vector<Table> tables;
    for (const auto& node : tree->nodes) tables.push_back(bind(atom_of(node), db));
    const auto reduced = run_semijoin_program(full_reducer(*tree), tables);
    const Table all = natural_join(atoms, db);
    for (std::size_t i = 0; i < reduced.size(); ++i)
      if (reduced[i] != project(all, tables[i].schema())) {
        ++bad;
        break;
      }
  }
  return {bad == 0, std::to_string(checked) + " semi-acyclic sets, " + std::to_string(bad) + " unsound"};
}

Graph make_graph(int n, const std::vector<std::pair<int, int>>& edges) {
  Graph g;
  for (int i = 1; i <= n; ++i) g.vertices.push_back(std::to_string(i));
  for (auto [a, b] : edges) g.edges.emplace_back(std::to_string(a), std::to_string(b));
  return g;
}

std::vector<Graph> all_graphs(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) pairs.emplace_back(i, j);
  std::vector<Graph> out;
  for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
    std::vector<std::pair<int, int>> edges;
    for (std::size_t e = 0; e < pairs.size(); ++e)
      if (mask >> e & 1) edges.push_back(pairs[e]);
    out.push_back(make_graph(n, edges));
  }
  return out;
}

std::vector<Graph> named_graphs() {
  std::vector<Graph> out;
  out.push_back(make_graph(3, {{1, 2}, {2, 3}, {1, 3}}));
  out.push_back(make_graph(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}));
  for (int n = 3; n <= 6; ++n) {
    std::vector<std::pair<int, int>> star, path;
    for (int i = 2; i <= n; ++i) {
      star.emplace_back(1, i);
      path.emplace_back(i - 1, i);
    }
    out.push_back(make_graph(n, star));
    out.push_back(make_graph(n, path));
  }
  return out;
}

bool nonempty(const Gadget& g, InstantiationType type, const Thresholds& th = zeros) {
  return !find_rules(g.db, g.mq, th, type).rules.empty();
}

Outcome criterion_gadgets() {
  std::vector<Graph> graphs;
  for (int n = 2; n <= 5; ++n)
    for (auto& g : all_graphs(n)) graphs.push_back(std::move(g));
  for (auto& g : named_graphs()) graphs.push_back(std::move(g));

  int col_checked = 0, col_bad = 0, ham_checked = 0, ham_bad = 0, structural_bad = 0;
  for (const auto& g : graphs) {
    if (!g.edges.empty()) {
      const bool colorable = is_three_colorable(g);
      const auto plain = gen_3col(g);
      for (int t = 0; t < 3; ++t) col_bad += nonempty(plain, instantiation_type(t)) != colorable;
      const auto semi = gen_semiacyclic_3col(g);
      structural_bad += !is_semi_acyclic(semi.mq);
      col_bad += nonempty(semi, InstantiationType::type0) != colorable;
      ++col_checked;
    }
    if (g.vertices.size() >= 3) {
      const bool path = has_hamiltonian_path(g);
      const auto ham = gen_hamiltonian(g);
      structural_bad += !is_acyclic(ham.mq);
      ham_bad += nonempty(ham, InstantiationType::type1) != path;
      ham_bad += nonempty(ham, InstantiationType::type2) != path;
      ++ham_checked;
    }
  }

  std::mt19937 rng(4242);
  const std::vector<std::string> names{"a", "b", "c", "d", "e", "f"};
  int csat_bad = 0, yes = 0;
  for (int iter = 0; iter < csat_instances; ++iter) {
    CnfFormula f;
    const int np = 1 + static_cast<int>(rng() % 3), nc = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < np; ++i) f.pi.push_back(names[i]);
    for (int i = 0; i < nc; ++i) f.chi.push_back(names[3 + i]);
    std::vector<std::string> vars = f.pi;
    vars.insert(vars.end(), f.chi.begin(), f.chi.end());
    const int clauses = 1 + static_cast<int>(rng() % 3);
    for (int c = 0; c < clauses; ++c) {
      std::vector<CnfLiteral> clause;
      for (int l = 0; l < 3; ++l) clause.push_back({vars[rng() % vars.size()], rng() % 2 == 0});
      f.clauses.push_back(std::move(clause));
    }
    // k' at or just above the best achievable count balances yes and no.
    std::uint64_t best = 0;
    for (std::uint64_t k = 1u << nc; k >= 1 && best == 0; --k) {
      f.k_prime = k;
      if (csat_holds(f)) best = k;
    }
    f.k_prime = std::clamp<std::uint64_t>(best + rng() % 2, 1, 1u << nc);
    const bool expected = csat_holds(f);
    yes += expected;
    for (int t = 0; t < 3; ++t) {
      const auto g = gen_csat(f, instantiation_type(t));
      csat_bad += nonempty(g, instantiation_type(t), {Ratio::zero(), Ratio::zero(), g.threshold}) != expected;
    }
  }
  const bool ok = col_bad == 0 && ham_bad == 0 && csat_bad == 0 && structural_bad == 0;
  return {ok, "3col " + std::to_string(col_checked) + " graphs / " + std::to_string(col_bad) + " disagreements; ham " +
                  std::to_string(ham_checked) + " graphs / " + std::to_string(ham_bad) + "; csat " +
                  std::to_string(csat_instances) + " formulas (" + std::to_string(yes) + " yes) x 3 types / " +
                  std::to_string(csat_bad) + "; structural violations " + std::to_string(structural_bad)};
}

Outcome criterion_reduction() {
  std::mt19937 rng(3232);
  int bad = 0, sat = 0;
  for (int iter = 0; iter < reduction_instances; ++iter) {
    const Database db = mt::random_database(rng, {4, 10, 3, 3});
    const auto mq = mt::random_metaquery(rng, db, 4, false);
    const auto red = reduce_to_cq(mq, db, IndexKind::cvr);
    const bool satisfiable = count_substitutions(red.query, red.db) > 0;
    sat += satisfiable;
    bad += satisfiable == find_rules(db, mq, zeros, InstantiationType::type0).rules.empty();
  }
  return {bad == 0, std::to_string(reduction_instances) + " pure instances (" + std::to_string(sat) +
                        " satisfiable), " + std::to_string(bad) + " disagreements"};
}

double seconds(const std::function<void()>& f) {
  double best = 1e300;
  for (int i = 0; i < timing_repeats; ++i) {
    const auto start = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return best;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += std::log(x[i]), my += std::log(y[i]);
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    num += dx * (std::log(y[i]) - my);
    den += dx * dx;
  }
  return num / den;
}

// Chain body r(X,Y), s(Y,Z) with d tuples per relation and a join of size d.
Database chain_instance(std::size_t d) {
  std::vector<std::vector<std::string>> r, s, h;
  for (std::size_t i = 0; i < d; ++i) {
    r.push_back({"x" + std::to_string(i), "y" + std::to_string(i)});
    s.push_back({"y" + std::to_string(i), "z" + std::to_string(i)});
    h.push_back({"x" + std::to_string(i), "z" + std::to_string((i * 7) % d)});
  }
  Database db;
  db.add(Relation::from_rows("r", 2, r));
  db.add(Relation::from_rows("s", 2, s));
  db.add(Relation::from_rows("h", 2, h));
  return db;
}

Outcome criterion_scaling() {
  const Rule rule{{"h", {"X", "Z"}}, {{"r", {"X", "Y"}}, {"s", {"Y", "Z"}}}};
  const std::vector<std::size_t> sizes{100, 200, 500, 1000, 2000, 5000, 10000};
  std::vector<double> d, fast, naive;
  bool agree = true;
  for (auto n : sizes) {
    const Database db = chain_instance(n);
    Ratio a, b;
    fast.push_back(seconds([&] { a = support_via_decomposition(rule, db); }));
    naive.push_back(seconds([&] { b = brute_force_indices(rule, db, UINT64_MAX).sup; }));
    agree = agree && a == b;
    d.push_back(static_cast<double>(n));
  }
  const double s_fast = loglog_slope(d, fast), s_naive = loglog_slope(d, naive);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "d=100..10000: decomposition slope %.3f (< %.1f), oracle slope %.3f (>= %.1f), "
                "times at d=10000 %.4fs vs %.4fs, values %s",
                s_fast, decomposition_slope_max, s_naive, oracle_slope_min, fast.back(), naive.back(),
                agree ? "agree" : "DIFFER");
  return {agree && s_fast < decomposition_slope_max && s_naive >= oracle_slope_min, buf};
}

}  // namespace

// --allow-fail N[,N...] lists criteria whose failure does not fail the run;
// their lines still read FAIL.
int main(int argc, char** argv) {
  std::set<int> allowed;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--allow-fail") == 0)
      for (const char* p = argv[i + 1]; *p;) {
        char* end = nullptr;
        allowed.insert(static_cast<int>(std::strtol(p, &end, 10)));
        p = *end ? end + 1 : end;
      }

  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"1 example regression", criterion_examples},   {"2 structural regression", criterion_structure},
      {"3 oracle equivalence", criterion_equivalence}, {"4 full-reducer soundness", criterion_reducer},
      {"5 gadget soundness", criterion_gadgets},       {"6 reduction cross-check", criterion_reduction},
      {"7 scaling trend", criterion_scaling},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), took);
    std::fflush(stdout);
    if (!o.pass && !allowed.count(std::atoi(c.name))) ++failures;
  }
  if (!allowed.empty()) std::printf("failures allowed for criteria given by --allow-fail\n");
  return failures == 0 ? 0 : 1;
}
