#include "metamine/structure.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <random>
#include <set>

#include "metamine/error.hpp"

namespace metamine {

namespace {

std::vector<LiteralScheme> distinct(const std::vector<LiteralScheme>& schemes) {
  std::vector<LiteralScheme> out;
  for (const auto& s : schemes)
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  return out;
}

Hypergraph make_hypergraph(const std::vector<LiteralScheme>& schemes, bool with_predicates) {
  Hypergraph h;
  std::set<std::string> vertices;
  for (const auto& s : distinct(schemes)) {
    std::set<std::string> edge(s.args.begin(), s.args.end());
    if (with_predicates && s.predicate_variable) edge.insert("@" + s.symbol);
    vertices.insert(edge.begin(), edge.end());
    h.edges.emplace_back(edge.begin(), edge.end());
    h.labels.push_back(s.to_string());
  }
  h.vertices.assign(vertices.begin(), vertices.end());
  return h;
}

bool subset(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::string braces(const std::vector<std::string>& items) {
  std::string out = "{";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += items[i];
  }
  return out + "}";
}

// Minimal dynamic bitset for vertex sets in the decomposition search.
class VarSet {
 public:
  VarSet() = default;
  explicit VarSet(std::size_t n) : words_((n + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
  bool any() const {
    return std::any_of(words_.begin(), words_.end(), [](auto w) { return w != 0; });
  }
  bool subset_of(const VarSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  bool intersects(const VarSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }
  VarSet operator|(const VarSet& o) const {
    VarSet r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] |= o.words_[i];
    return r;
  }
  VarSet operator&(const VarSet& o) const {
    VarSet r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= o.words_[i];
    return r;
  }
  VarSet minus(const VarSet& o) const {
    VarSet r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= ~o.words_[i];
    return r;
  }
  friend auto operator<=>(const VarSet&, const VarSet&) = default;

 private:
  std::vector<std::uint64_t> words_;
};

class KDecomp {
 public:
  struct Recipe {
    std::vector<std::size_t> lambda;
    VarSet chi;
    std::vector<VarSet> components;
  };

  KDecomp(const std::vector<LiteralScheme>& atoms, std::size_t k, std::size_t budget, std::size_t& expansions)
      : k_(k), budget_(budget), expansions_(expansions) {
    std::map<std::string, std::size_t> ids;
    for (const auto& a : atoms)
      for (const auto& v : a.args) ids.emplace(v, 0);
    for (auto& [name, id] : ids) {
      id = names_.size();
      names_.push_back(name);
    }
    for (const auto& a : atoms) {
      VarSet s(names_.size());
      for (const auto& v : a.args) s.set(ids.at(v));
      atom_vars_.push_back(s);
    }
  }

  bool exhausted() const { return exhausted_; }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<VarSet> all() const {
    VarSet s(names_.size());
    for (const auto& a : atom_vars_) s = s | a;
    return s;
  }

  // Returns false when no decomposition of the component exists (or the
  // budget ran out).
  bool solve(const VarSet& component) {
    if (auto it = memo_.find(component); it != memo_.end()) return it->second.has_value();
    memo_[component] = std::nullopt;
    VarSet edge_vars(names_.size());
    for (const auto& a : atom_vars_)
      if (a.intersects(component)) edge_vars = edge_vars | a;
    const VarSet conn = edge_vars.minus(component);
    const VarSet scope = component | conn;

    std::vector<std::size_t> relevant;
    for (std::size_t i = 0; i < atom_vars_.size(); ++i)
      if (atom_vars_[i].intersects(scope)) relevant.push_back(i);

    std::vector<std::size_t> pick;
    std::optional<Recipe> found;
    // Subsets of relevant atoms by increasing size, lexicographic.
    for (std::size_t size = 1; size <= k_ && size <= relevant.size() && !found && !exhausted_; ++size) {
      std::vector<std::size_t> idx(size);
      for (std::size_t i = 0; i < size; ++i) idx[i] = i;
      while (true) {
        if (++expansions_ > budget_) {
          exhausted_ = true;
          break;
        }
        VarSet lv(names_.size());
        for (auto i : idx) lv = lv | atom_vars_[relevant[i]];
        if (conn.subset_of(lv) && lv.intersects(component)) {
          Recipe r;
          for (auto i : idx) r.lambda.push_back(relevant[i]);
          r.chi = lv & scope;
          r.components = components_of(component.minus(r.chi));
          bool ok = true;
          for (const auto& c : r.components) {
            if (!solve(c)) {
              ok = false;
              break;
            }
          }
          if (exhausted_) break;
          if (ok) {
            found = std::move(r);
            break;
          }
        }
        // Next combination.
        std::size_t i = size;
        while (i > 0 && idx[i - 1] == relevant.size() - size + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
    memo_[component] = found;
    return found.has_value();
  }

  const Recipe& recipe(const VarSet& component) const { return *memo_.at(component); }

 private:
  std::vector<VarSet> components_of(const VarSet& rest) const {
    std::vector<VarSet> out;
    VarSet seen(names_.size());
    for (std::size_t v = 0; v < names_.size(); ++v) {
      if (!rest.test(v) || seen.test(v)) continue;
      VarSet comp(names_.size());
      comp.set(v);
      bool grew = true;
      while (grew) {
        grew = false;
        for (const auto& a : atom_vars_) {
          if (!a.intersects(comp)) continue;
          VarSet add = a & rest;
          if (!add.subset_of(comp)) {
            comp = comp | add;
            grew = true;
          }
        }
      }
      seen = seen | comp;
      out.push_back(comp);
    }
    return out;
  }

  std::size_t k_;
  std::size_t budget_;
  std::size_t& expansions_;
  bool exhausted_ = false;
  std::vector<std::string> names_;
  std::vector<VarSet> atom_vars_;
  std::map<VarSet, std::optional<Recipe>> memo_;
};

void complete(HypertreeDecomposition& hd) {
  for (std::size_t a = 0; a < hd.atoms.size(); ++a) {
    const auto vars = ordinary_variables(hd.atoms[a]);
    std::size_t host = npos;
    bool done = false;
    for (std::size_t p = 0; p < hd.nodes.size() && !done; ++p) {
      if (!subset(vars, hd.nodes[p].chi)) continue;
      const auto& lambda = hd.nodes[p].lambda;
      if (std::find(lambda.begin(), lambda.end(), a) != lambda.end()) done = true;
      if (host == npos) host = p;
    }
    if (done) continue;
    if (host == npos) throw std::logic_error("decomposition does not cover " + hd.atoms[a].to_string());
    HypertreeNode extra{vars, {a}, host, {}};
    hd.nodes[host].children.push_back(hd.nodes.size());
    hd.nodes.push_back(std::move(extra));
  }
}

std::vector<std::string> lambda_vars(const HypertreeDecomposition& hd, const HypertreeNode& node) {
  std::vector<LiteralScheme> atoms;
  for (auto i : node.lambda) atoms.push_back(hd.atoms[i]);
  return ordinary_variables(atoms);
}

}  // namespace

Hypergraph hypergraph_of(const Metaquery& mq) { return make_hypergraph(mq.literal_schemes(), true); }

Hypergraph semi_hypergraph_of(const Metaquery& mq) { return make_hypergraph(mq.literal_schemes(), false); }

Hypergraph semi_hypergraph_of(const std::vector<LiteralScheme>& schemes) { return make_hypergraph(schemes, false); }

GyoResult gyo_reduce(const Hypergraph& h, std::optional<std::uint64_t> shuffle_seed) {
  const auto n = h.edges.size();
  std::vector<bool> alive(n, true);
  std::map<std::string, std::size_t> count;
  for (const auto& e : h.edges)
    for (const auto& v : e) ++count[v];

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::optional<std::mt19937_64> rng;
  if (shuffle_seed) rng.emplace(*shuffle_seed);
  auto reshuffle = [&] {
    if (rng) std::shuffle(order.begin(), order.end(), *rng);
  };

  GyoResult result;
  auto remove = [&](std::size_t e, std::size_t witness) {
    alive[e] = false;
    for (const auto& v : h.edges[e]) --count[v];
    result.steps.push_back({e, witness});
  };
  auto isolated = [&](std::size_t e) {
    return std::all_of(h.edges[e].begin(), h.edges[e].end(), [&](const auto& v) { return count[v] == 1; });
  };
  auto witness_of = [&](std::size_t e) -> std::size_t {
    for (auto w : order) {
      if (w == e || !alive[w]) continue;
      bool ear = true;
      for (const auto& v : h.edges[e]) {
        if (count[v] > 1 && !std::binary_search(h.edges[w].begin(), h.edges[w].end(), v)) {
          ear = false;
          break;
        }
      }
      if (ear) return w;
    }
    return npos;
  };

  while (true) {
    reshuffle();
    for (auto e : order)
      if (alive[e] && isolated(e)) remove(e, npos);
    std::vector<std::size_t> ears;
    for (auto e : order)
      if (alive[e] && witness_of(e) != npos) ears.push_back(e);
    if (ears.empty()) break;
    for (auto e : ears) {
      if (!alive[e]) continue;
      if (auto w = witness_of(e); w != npos) remove(e, w);
    }
  }

  std::set<std::string> vertices;
  for (std::size_t e = 0; e < n; ++e) {
    if (!alive[e]) continue;
    result.residual.edges.push_back(h.edges[e]);
    result.residual.labels.push_back(h.labels[e]);
    vertices.insert(h.edges[e].begin(), h.edges[e].end());
  }
  result.residual.vertices.assign(vertices.begin(), vertices.end());
  return result;
}

bool is_acyclic(const Metaquery& mq) { return gyo_reduce(hypergraph_of(mq)).acyclic(); }

bool is_semi_acyclic(const Metaquery& mq) { return gyo_reduce(semi_hypergraph_of(mq)).acyclic(); }

std::optional<JoinTree> build_join_tree(const std::vector<LiteralScheme>& schemes) {
  JoinTree tree;
  tree.nodes = distinct(schemes);
  if (tree.nodes.empty()) return std::nullopt;
  const auto gyo = gyo_reduce(semi_hypergraph_of(tree.nodes));
  if (!gyo.acyclic()) return std::nullopt;
  const auto n = tree.nodes.size();
  tree.root = gyo.steps.back().edge;
  tree.parent.assign(n, npos);
  tree.children.assign(n, {});
  for (const auto& step : gyo.steps) {
    if (step.edge == tree.root) continue;
    const auto parent = step.witness == npos ? tree.root : step.witness;
    tree.parent[step.edge] = parent;
    tree.children[parent].push_back(step.edge);
  }
  return tree;
}

bool is_join_tree(const JoinTree& tree) {
  const auto n = tree.nodes.size();
  std::map<std::string, std::vector<std::size_t>> holders;
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& v : ordinary_variables(tree.nodes[i])) holders[v].push_back(i);
  for (const auto& [v, nodes] : holders) {
    // Connected iff exactly one holder has a parent outside the holder set.
    std::size_t tops = 0;
    for (auto i : nodes) {
      const auto p = tree.parent[i];
      if (p == npos || std::find(nodes.begin(), nodes.end(), p) == nodes.end()) ++tops;
    }
    if (tops != 1) return false;
  }
  return true;
}

std::vector<std::size_t> bottom_up_visit(const std::vector<std::vector<std::size_t>>& children, std::size_t root) {
  std::vector<std::size_t> order;
  std::deque<std::size_t> queue{root};
  while (!queue.empty()) {
    const auto node = queue.front();
    queue.pop_front();
    order.push_back(node);
    for (auto c : children[node]) queue.push_back(c);
  }
  std::reverse(order.begin(), order.end());
  return order;
}

std::vector<SemijoinStep> full_reducer(const JoinTree& tree) {
  const auto order = bottom_up_visit(tree.children, tree.root);
  std::vector<std::size_t> position(tree.nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
  std::vector<SemijoinStep> first;
  for (auto node : order) {
    auto kids = tree.children[node];
    std::sort(kids.begin(), kids.end(), [&](auto a, auto b) { return position[a] < position[b]; });
    for (auto c : kids) first.push_back({node, c});
  }
  std::vector<SemijoinStep> program = first;
  for (auto it = first.rbegin(); it != first.rend(); ++it) program.push_back({it->source, it->target});
  return program;
}

std::vector<Table> run_semijoin_program(const std::vector<SemijoinStep>& program, std::vector<Table> tables) {
  for (const auto& step : program) tables[step.target] = semijoin(tables[step.target], tables[step.source]);
  return tables;
}

std::size_t HypertreeDecomposition::width() const {
  std::size_t w = 0;
  for (const auto& n : nodes) w = std::max(w, n.lambda.size());
  return w;
}

DecompositionCheck check_decomposition(const HypertreeDecomposition& hd) {
  DecompositionCheck out;
  const auto n = hd.nodes.size();
  const auto all_vars = ordinary_variables(hd.atoms);

  // Tree shape and label domains.
  bool tree_ok = n > 0 && hd.root < n && hd.nodes[hd.root].parent == npos;
  std::vector<std::size_t> reach;
  if (tree_ok) {
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{hd.root};
    seen[hd.root] = true;
    while (!queue.empty() && tree_ok) {
      const auto p = queue.front();
      queue.pop_front();
      reach.push_back(p);
      for (auto c : hd.nodes[p].children) {
        if (c >= n || seen[c] || hd.nodes[c].parent != p) {
          tree_ok = false;
          break;
        }
        seen[c] = true;
        queue.push_back(c);
      }
    }
    tree_ok = tree_ok && reach.size() == n;
  }
  for (const auto& node : hd.nodes) {
    for (auto l : node.lambda) tree_ok = tree_ok && l < hd.atoms.size();
    tree_ok = tree_ok && subset(node.chi, all_vars) && std::is_sorted(node.chi.begin(), node.chi.end());
  }
  if (!tree_ok) {
    out.violations.push_back("tree");
    return out;
  }

  // 1. Coverage.
  for (const auto& atom : hd.atoms) {
    const auto vars = ordinary_variables(atom);
    if (std::none_of(hd.nodes.begin(), hd.nodes.end(), [&](const auto& p) { return subset(vars, p.chi); })) {
      out.violations.push_back("coverage");
      break;
    }
  }
  // 2. Connectedness.
  for (const auto& v : all_vars) {
    std::size_t tops = 0;
    for (const auto& node : hd.nodes) {
      if (!std::binary_search(node.chi.begin(), node.chi.end(), v)) continue;
      if (node.parent == npos ||
          !std::binary_search(hd.nodes[node.parent].chi.begin(), hd.nodes[node.parent].chi.end(), v))
        ++tops;
    }
    if (tops > 1) {
      out.violations.push_back("connectedness");
      break;
    }
  }
  // 3. chi(p) within var(lambda(p)).
  for (const auto& node : hd.nodes) {
    if (!subset(node.chi, lambda_vars(hd, node))) {
      out.violations.push_back("chi-subset");
      break;
    }
  }
  // 4. var(lambda(p)) meets chi(T_p) only inside chi(p).
  for (std::size_t p = 0; p < n; ++p) {
    std::set<std::string> below;
    std::vector<std::size_t> stack{p};
    while (!stack.empty()) {
      const auto q = stack.back();
      stack.pop_back();
      below.insert(hd.nodes[q].chi.begin(), hd.nodes[q].chi.end());
      for (auto c : hd.nodes[q].children) stack.push_back(c);
    }
    bool ok = true;
    for (const auto& v : lambda_vars(hd, hd.nodes[p]))
      if (below.count(v) && !std::binary_search(hd.nodes[p].chi.begin(), hd.nodes[p].chi.end(), v)) ok = false;
    if (!ok) {
      out.violations.push_back("descendant");
      break;
    }
  }
  // Completeness.
  for (std::size_t a = 0; a < hd.atoms.size(); ++a) {
    const auto vars = ordinary_variables(hd.atoms[a]);
    bool found = false;
    for (const auto& node : hd.nodes)
      found = found || (subset(vars, node.chi) &&
                        std::find(node.lambda.begin(), node.lambda.end(), a) != node.lambda.end());
    if (!found) {
      out.violations.push_back("completeness");
      break;
    }
  }
  return out;
}

std::size_t default_search_budget() {
  if (const char* env = std::getenv("METAMINE_BUDGET")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 100000;
}

HypertreeDecomposition trivial_decomposition(const std::vector<LiteralScheme>& atoms) {
  HypertreeDecomposition hd;
  hd.atoms = distinct(atoms);
  HypertreeNode node;
  node.chi = ordinary_variables(hd.atoms);
  for (std::size_t i = 0; i < hd.atoms.size(); ++i) node.lambda.push_back(i);
  hd.nodes.push_back(std::move(node));
  return hd;
}

HypertreeDecomposition hypertree_decompose(const std::vector<LiteralScheme>& atoms, std::size_t budget,
                                           DecomposeStats* stats) {
  DecomposeStats local;
  DecomposeStats& st = stats ? *stats : local;
  st = {};
  HypertreeDecomposition hd;
  hd.atoms = distinct(atoms);
  if (hd.atoms.empty()) return trivial_decomposition(hd.atoms);

  if (auto tree = build_join_tree(hd.atoms)) {
    hd.root = tree->root;
    for (std::size_t i = 0; i < tree->nodes.size(); ++i) {
      auto children = tree->children[i];
      std::sort(children.begin(), children.end(),
                [&](auto a, auto b) { return tree->nodes[a] < tree->nodes[b]; });
      hd.nodes.push_back({ordinary_variables(tree->nodes[i]), {i}, tree->parent[i], std::move(children)});
    }
    return hd;
  }

  for (std::size_t k = 2; k < hd.atoms.size(); ++k) {
    KDecomp search(hd.atoms, k, budget, st.expansions);
    const VarSet all = *search.all();
    const bool found = search.solve(all);
    if (search.exhausted()) {
      st.budget_exhausted = true;
      break;
    }
    if (!found) continue;
    // Materialize the recipe tree breadth first.
    const auto& names = search.names();
    auto names_of = [&](const VarSet& s) {
      std::vector<std::string> out;
      for (std::size_t i = 0; i < names.size(); ++i)
        if (s.test(i)) out.push_back(names[i]);
      return out;
    };
    std::deque<std::pair<VarSet, std::size_t>> queue{{all, npos}};
    while (!queue.empty()) {
      auto [component, parent] = queue.front();
      queue.pop_front();
      const auto& r = search.recipe(component);
      const auto id = hd.nodes.size();
      auto lambda = r.lambda;
      std::sort(lambda.begin(), lambda.end());
      hd.nodes.push_back({names_of(r.chi), std::move(lambda), parent, {}});
      if (parent != npos) hd.nodes[parent].children.push_back(id);
      for (const auto& c : r.components) queue.emplace_back(c, id);
    }
    hd.root = 0;
    complete(hd);
    return hd;
  }
  return trivial_decomposition(hd.atoms);
}

HypertreeDecomposition instantiate_decomposition(const HypertreeDecomposition& hd, const Instantiation& sigma,
                                                 const std::vector<LiteralScheme>& pattern_order) {
  HypertreeDecomposition out = hd;
  for (auto& atom : out.atoms) {
    if (!atom.predicate_variable) continue;
    auto it = std::find(pattern_order.begin(), pattern_order.end(), atom);
    if (it == pattern_order.end()) throw InstantiationError("pattern " + atom.to_string() + " is not in the order");
    const auto prefix = internal_padding_prefix(static_cast<std::size_t>(it - pattern_order.begin()));
    atom = scheme_of(instantiate_scheme(atom, sigma, prefix));
  }
  return out;
}

AcyclicTransform acy_transform(const HypertreeDecomposition& hd, const Database& db) {
  AcyclicTransform out;
  const auto n = hd.nodes.size();
  out.tree.parent.assign(n, npos);
  out.tree.children.assign(n, {});
  out.tree.root = hd.root;
  for (std::size_t p = 0; p < n; ++p) {
    const auto& node = hd.nodes[p];
    if (node.chi.empty()) throw ValidationError("decomposition node without variables");
    std::vector<Atom> lambda;
    for (auto i : node.lambda) lambda.push_back(atom_of(hd.atoms[i]));
    const Table t = project(natural_join(lambda, db), node.chi);
    std::vector<Value> cells;
    for (std::size_t r = 0; r < t.size(); ++r) cells.insert(cells.end(), t.row(r).begin(), t.row(r).end());
    const std::string name = "node" + std::to_string(p + 1);
    out.db.add(Relation(name, node.chi.size(), std::move(cells)));
    out.atoms.push_back({name, node.chi});
    out.tree.nodes.push_back(scheme_of(out.atoms.back()));
    out.tree.parent[p] = node.parent;
    out.tree.children[p] = node.children;
  }
  return out;
}

std::string render_decomposition(const HypertreeDecomposition& hd) {
  std::string out;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{hd.root, 0}};
  while (!stack.empty()) {
    auto [p, depth] = stack.back();
    stack.pop_back();
    std::vector<std::string> lambda;
    for (auto i : hd.nodes[p].lambda) lambda.push_back(hd.atoms[i].to_string());
    out += std::string(2 * depth, ' ') + "chi=" + braces(hd.nodes[p].chi) + " lambda=" + braces(lambda) + "\n";
    const auto& kids = hd.nodes[p].children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.emplace_back(*it, depth + 1);
  }
  return out;
}

std::string render_program(const JoinTree& tree, const std::vector<SemijoinStep>& program) {
  std::string out;
  for (const auto& s : program) {
    const auto t = tree.nodes[s.target].to_string();
    out += t + " := " + t + " semijoin " + tree.nodes[s.source].to_string() + "\n";
  }
  return out;
}

}  // namespace metamine
