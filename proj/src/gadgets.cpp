#include "metamine/gadgets.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "metamine/error.hpp"

namespace metamine {

namespace {

using Rows = std::vector<std::vector<std::string>>;

bool alnum_label(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) != 0; });
}

std::string args(const std::vector<std::string>& vars) {
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ",";
    out += vars[i];
  }
  return out;
}

std::string literal(const std::string& symbol, const std::vector<std::string>& vars) {
  return symbol + "(" + args(vars) + ")";
}

std::string rule_text(const std::string& head, const std::vector<std::string>& body) {
  std::string out = head + " <- ";
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) out += ", ";
    out += body[i];
  }
  return out + ".";
}

std::vector<std::string> tokens(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

// Lines with comments and surrounding blanks stripped; empty lines dropped.
std::vector<std::pair<std::size_t, std::string>> content_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (tokens(line).empty()) continue;
    out.emplace_back(line_no, line);
  }
  return out;
}

// Edges deduplicated as unordered pairs, first orientation kept.
std::vector<std::pair<std::string, std::string>> distinct_edges(const Graph& g) {
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [a, b] : g.edges) {
    auto key = std::minmax(a, b);
    if (seen.emplace(key.first, key.second).second) out.emplace_back(a, b);
  }
  return out;
}

std::map<std::string, std::size_t> vertex_index(const Graph& g) {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < g.vertices.size(); ++i) idx.emplace(g.vertices[i], i);
  return idx;
}

bool clause_satisfied(const std::vector<CnfLiteral>& clause, const std::map<std::string, bool>& assignment) {
  for (const auto& l : clause)
    if (assignment.at(l.variable) != l.negated) return true;
  return false;
}

}  // namespace

Database gen_fig1() {
  Database db;
  db.add(Relation::from_rows("UsCa", 2, {{"John K.", "Omnitel"}, {"John K.", "Tim"}, {"Anastasia A.", "Omnitel"}}));
  db.add(Relation::from_rows("CaTe", 2,
                             {{"Tim", "ETACS"},
                              {"Tim", "GSM 900"},
                              {"Tim", "GSM 1800"},
                              {"Omnitel", "GSM 900"},
                              {"Omnitel", "GSM 1800"},
                              {"Wind", "GSM 1800"}}));
  db.add(Relation::from_rows("UsPT", 2,
                             {{"John K.", "GSM 900"}, {"John K.", "GSM 1800"}, {"Anastasia A.", "GSM 900"}}));
  return db;
}

Database gen_fig2() {
  Database db;
  Database fig1 = gen_fig1();
  db.add(fig1.at("UsCa"));
  db.add(fig1.at("CaTe"));
  db.add(Relation::from_rows("UsPT", 3,
                             {{"John K.", "GSM 900", "Nokia 6150"},
                              {"John K.", "GSM 1800", "Nokia 6150"},
                              {"Anastasia A.", "GSM 900", "Bosch 607"}}));
  return db;
}

void check_graph(const Graph& g) {
  std::set<std::string> seen;
  for (const auto& v : g.vertices) {
    if (!alnum_label(v)) throw ValidationError("vertex label '" + v + "' is not alphanumeric");
    if (!seen.insert(v).second) throw ValidationError("duplicate vertex '" + v + "'");
  }
  for (const auto& [a, b] : g.edges) {
    if (!seen.count(a) || !seen.count(b)) throw ValidationError("edge " + a + "-" + b + " uses an unknown vertex");
    if (a == b) throw ValidationError("self-loop on vertex '" + a + "'");
  }
}

Gadget gen_3col(const Graph& g) {
  check_graph(g);
  const auto edges = distinct_edges(g);
  if (edges.empty()) throw ValidationError("3-coloring gadget needs at least one edge");
  Database db;
  db.add(Relation::from_rows("e", 2, {{"1", "2"}, {"1", "3"}, {"2", "3"}, {"2", "1"}, {"3", "1"}, {"3", "2"}}));
  std::vector<std::string> body;
  for (const auto& [u, v] : edges) body.push_back(literal("E", {"X" + u, "X" + v}));
  return {std::move(db), parse_metaquery(rule_text(body.front(), body)), Ratio::zero()};
}

Gadget gen_semiacyclic_3col(const Graph& g) {
  check_graph(g);
  const auto edges = distinct_edges(g);
  if (edges.empty()) throw ValidationError("3-coloring gadget needs at least one edge");
  Database db;
  db.add(Relation::from_rows("r'", 2, {{"g", "r"}, {"b", "r"}}));
  db.add(Relation::from_rows("g'", 2, {{"r", "g"}, {"b", "g"}}));
  db.add(Relation::from_rows("b'", 2, {{"g", "b"}, {"r", "b"}}));
  std::vector<std::string> body;
  for (const auto& [u, v] : edges) body.push_back(literal("X" + u + "'", {"X" + v, "_"}));
  for (const auto& z : g.vertices) body.push_back(literal("X" + z + "'", {"_", "X" + z}));
  return {std::move(db), parse_metaquery(rule_text(body.front(), body)), Ratio::zero()};
}

Gadget gen_hamiltonian(const Graph& g) {
  check_graph(g);
  const auto n = g.vertices.size();
  if (n <= 2) throw ValidationError("Hamiltonian path gadget needs more than two vertices");
  Database db;
  db.add(Relation::from_rows("g", n, {g.vertices}));
  Rows e;
  for (const auto& [a, b] : distinct_edges(g)) {
    e.push_back({a, b});
    e.push_back({b, a});
  }
  db.add(Relation::from_rows("e", 2, e));
  std::vector<std::string> xs;
  for (std::size_t i = 1; i <= n; ++i) xs.push_back("X" + std::to_string(i));
  std::vector<std::string> body{literal("N", xs)};
  for (std::size_t i = 0; i + 1 < n; ++i) body.push_back(literal("e", {xs[i], xs[i + 1]}));
  return {std::move(db), parse_metaquery(rule_text(body.front(), body)), Ratio::zero()};
}

Gadget gen_csat(const CnfFormula& f, InstantiationType type) {
  std::set<std::string> pi(f.pi.begin(), f.pi.end()), chi(f.chi.begin(), f.chi.end());
  if (pi.size() != f.pi.size() || chi.size() != f.chi.size()) throw ValidationError("duplicate variable in partition");
  for (const auto& v : f.pi) {
    if (!alnum_label(v)) throw ValidationError("variable name '" + v + "' is not alphanumeric");
    if (chi.count(v)) throw ValidationError("variable '" + v + "' is in both pi and chi");
  }
  for (const auto& v : f.chi)
    if (!alnum_label(v)) throw ValidationError("variable name '" + v + "' is not alphanumeric");
  if (f.clauses.empty()) throw ValidationError("formula has no clauses");
  const std::size_t h = f.chi.size();
  if (h >= 63) throw ValidationError("too many counted variables");
  const std::uint64_t total = std::uint64_t{1} << h;
  if (f.k_prime < 1 || f.k_prime > total)
    throw ValidationError("k must lie in [1, " + std::to_string(total) + "]");

  std::vector<std::vector<CnfLiteral>> clauses;
  for (const auto& c : f.clauses) {
    if (c.empty() || c.size() > 3) throw ValidationError("clauses need one to three literals");
    for (const auto& l : c)
      if (!pi.count(l.variable) && !chi.count(l.variable))
        throw ValidationError("variable '" + l.variable + "' is in neither pi nor chi");
    auto padded = c;
    while (padded.size() < 3) padded.push_back(padded.back());
    clauses.push_back(std::move(padded));
  }
  // With exactly three clauses the head relation is ternary, and a type-0
  // pattern P(Vx,Nx,Y) could then map onto it. A repeated clause keeps the
  // count of satisfying assignments and rules that out.
  if (type == InstantiationType::type0 && clauses.size() == 3) clauses.push_back(clauses.back());
  const auto n = clauses.size();

  Database db;
  const Rows c_prime = {{"1", "0", "0", "1"}, {"0", "1", "0", "1"}, {"0", "0", "1", "1"}, {"1", "0", "1", "1"},
                        {"1", "1", "0", "1"}, {"0", "1", "1", "1"}, {"1", "1", "1", "1"}, {"0", "0", "0", "0"}};
  if (type == InstantiationType::type0) {
    db.add(Relation::from_rows("pa", 3, {{"1", "0", "l"}}));
    db.add(Relation::from_rows("pb", 3, {{"0", "1", "l"}}));
  } else {
    db.add(Relation::from_rows("p", 3, {{"1", "0", "l"}}));
    db.add(Relation::from_rows("ch", 1, {{"l"}}));
  }
  db.add(Relation::from_rows("q", 2, {{"1", "0"}, {"0", "1"}}));
  db.add(Relation::from_rows("c'", 4, c_prime));
  db.add(Relation::from_rows("c", n, {std::vector<std::string>(n, "1")}));

  auto term = [](const CnfLiteral& l) { return (l.negated ? "N" : "V") + l.variable; };
  std::vector<std::string> body;
  for (const auto& v : f.pi) {
    const std::string pv = type == InstantiationType::type0 ? "P" + v : "P";
    body.push_back(literal(pv, {"V" + v, "N" + v, "Y"}));
  }
  if (type != InstantiationType::type0) body.push_back(literal("ch", {"Y"}));
  for (const auto& v : f.chi) body.push_back(literal("q", {"V" + v, "N" + v}));
  std::vector<std::string> cs;
  for (std::size_t i = 0; i < n; ++i) {
    cs.push_back("C" + std::to_string(i + 1));
    body.push_back(literal("c'", {term(clauses[i][0]), term(clauses[i][1]), term(clauses[i][2]), cs.back()}));
  }
  return {std::move(db), parse_metaquery(rule_text(literal("c", cs), body)), Ratio(f.k_prime - 1, total)};
}

bool is_three_colorable(const Graph& g) {
  check_graph(g);
  const auto idx = vertex_index(g);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& [a, b] : g.edges) edges.emplace_back(idx.at(a), idx.at(b));
  std::vector<int> color(g.vertices.size(), 0);
  std::function<bool(std::size_t)> go = [&](std::size_t v) {
    if (v == color.size()) {
      return std::all_of(edges.begin(), edges.end(), [&](auto e) { return color[e.first] != color[e.second]; });
    }
    for (int c = 0; c < 3; ++c) {
      color[v] = c;
      if (go(v + 1)) return true;
    }
    return false;
  };
  return go(0);
}

bool has_hamiltonian_path(const Graph& g) {
  check_graph(g);
  const auto idx = vertex_index(g);
  const auto n = g.vertices.size();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const auto& [a, b] : g.edges) adj[idx.at(a)][idx.at(b)] = adj[idx.at(b)][idx.at(a)] = true;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  do {
    bool ok = true;
    for (std::size_t i = 0; i + 1 < n && ok; ++i) ok = adj[order[i]][order[i + 1]];
    if (ok) return true;
  } while (std::next_permutation(order.begin(), order.end()));
  return false;
}

bool csat_holds(const CnfFormula& f) {
  const auto s = f.pi.size(), h = f.chi.size();
  std::map<std::string, bool> assignment;
  for (std::uint64_t pm = 0; pm < (std::uint64_t{1} << s); ++pm) {
    for (std::size_t i = 0; i < s; ++i) assignment[f.pi[i]] = (pm >> i) & 1;
    std::uint64_t count = 0;
    for (std::uint64_t cm = 0; cm < (std::uint64_t{1} << h); ++cm) {
      for (std::size_t i = 0; i < h; ++i) assignment[f.chi[i]] = (cm >> i) & 1;
      if (std::all_of(f.clauses.begin(), f.clauses.end(),
                      [&](const auto& c) { return clause_satisfied(c, assignment); }))
        ++count;
    }
    if (count >= f.k_prime) return true;
  }
  return false;
}

Graph parse_graph(std::string_view text) {
  Graph g;
  bool have_vertices = false;
  for (const auto& [line_no, line] : content_lines(text)) {
    auto t = tokens(line);
    if (t[0] == "v") {
      if (have_vertices) throw ParseError("second vertex line", line_no, 1);
      have_vertices = true;
      g.vertices.assign(t.begin() + 1, t.end());
    } else if (t[0] == "e") {
      if (!have_vertices) throw ParseError("edge before the vertex line", line_no, 1);
      if (t.size() != 3) throw ParseError("edge line needs two vertices", line_no, 1);
      g.edges.emplace_back(t[1], t[2]);
    } else {
      throw ParseError("unknown graph line '" + t[0] + "'", line_no, 1);
    }
  }
  if (!have_vertices) throw ParseError("missing vertex line", 1, 1);
  check_graph(g);
  return g;
}

CnfFormula parse_formula(std::string_view text) {
  CnfFormula f;
  bool have_k = false;
  for (const auto& [line_no, line] : content_lines(text)) {
    auto t = tokens(line);
    if (t[0] == "pi") {
      f.pi.insert(f.pi.end(), t.begin() + 1, t.end());
    } else if (t[0] == "chi") {
      f.chi.insert(f.chi.end(), t.begin() + 1, t.end());
    } else if (t[0] == "k") {
      if (t.size() != 2 || !std::all_of(t[1].begin(), t[1].end(), [](unsigned char c) { return std::isdigit(c); }))
        throw ParseError("k line needs one non-negative integer", line_no, 1);
      f.k_prime = std::stoull(t[1]);
      have_k = true;
    } else {
      std::vector<CnfLiteral> clause;
      for (const auto& tok : t) {
        CnfLiteral l{tok, false};
        if (tok[0] == '~') l = {tok.substr(1), true};
        if (!alnum_label(l.variable)) throw ParseError("bad literal '" + tok + "'", line_no, 1);
        clause.push_back(std::move(l));
      }
      if (clause.size() > 3) throw ParseError("clause with more than three literals", line_no, 1);
      f.clauses.push_back(std::move(clause));
    }
  }
  if (!have_k) throw ParseError("missing k line", 1, 1);
  return f;
}

}  // namespace metamine
