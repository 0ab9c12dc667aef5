#include "metamine/engine.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <stdexcept>
#include <thread>

#include "metamine/error.hpp"

namespace metamine {

namespace {

std::vector<Atom> distinct_atoms(const std::vector<Atom>& atoms) {
  std::vector<Atom> out;
  for (const auto& a : atoms)
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  return out;
}

bool contains(const std::vector<std::string>& sorted, const std::string& v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

// A node with the atom in lambda whose chi holds every variable of the atom
// that any chi mentions. Padding variables of instantiated patterns appear
// in no chi and are ignored.
std::size_t host_node(const HypertreeDecomposition& hd, std::size_t atom) {
  std::set<std::string> labelled;
  for (const auto& n : hd.nodes) labelled.insert(n.chi.begin(), n.chi.end());
  const auto vars = ordinary_variables(hd.atoms[atom]);
  for (std::size_t p = 0; p < hd.nodes.size(); ++p) {
    const auto& node = hd.nodes[p];
    if (std::find(node.lambda.begin(), node.lambda.end(), atom) == node.lambda.end()) continue;
    if (std::all_of(vars.begin(), vars.end(), [&](const auto& v) { return !labelled.count(v) || contains(node.chi, v); }))
      return p;
  }
  throw std::logic_error("decomposition is not complete for " + hd.atoms[atom].to_string());
}

void add_stats(EngineStats& into, const EngineStats& from) {
  into.partial_bodies += from.partial_bodies;
  into.pruned += from.pruned;
  into.bodies += from.bodies;
  into.support_rejected += from.support_rejected;
  into.heads_tested += from.heads_tested;
  into.rules += from.rules;
}

void check_concrete(const LiteralScheme& s, const Database& db) {
  if (s.predicate_variable) return;
  const auto& r = db.at(s.symbol);
  if (r.arity() != s.arity())
    throw BindingError("atom " + s.to_string() + " has arity " + std::to_string(s.arity()) + " but relation " +
                       s.symbol + " has arity " + std::to_string(r.arity()));
}

void sort_rules(std::vector<MinedRule>& rules) {
  std::sort(rules.begin(), rules.end(), [](const auto& x, const auto& y) { return x.sigma < y.sigma; });
}

class Miner {
 public:
  Miner(const Database& db, const Metaquery& mq, const Thresholds& th, InstantiationType type,
        const HypertreeDecomposition& hd)
      : db_(db), mq_(mq), th_(th), type_(type), hd_(hd) {
    const auto n = hd_.nodes.size();
    for (std::size_t i = 0; i < mq_.patterns().size(); ++i)
      prefix_.emplace(mq_.patterns()[i], internal_padding_prefix(i));

    // Bottom-up visit with children in lambda-lexicographic order.
    std::vector<std::vector<std::size_t>> children(n);
    for (std::size_t p = 0; p < n; ++p) {
      children[p] = hd_.nodes[p].children;
      std::sort(children[p].begin(), children[p].end(), [&](auto x, auto y) { return lambda_key(x) < lambda_key(y); });
    }
    visit_ = bottom_up_visit(children, hd_.root);
    position_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) position_[visit_[i]] = i;
    for (std::size_t p = 0; p < n; ++p) {
      std::vector<LiteralScheme> pv;
      for (auto l : hd_.nodes[p].lambda)
        if (hd_.atoms[l].predicate_variable) pv.push_back(hd_.atoms[l]);
      node_patterns_.push_back(std::move(pv));
    }
    for (std::size_t a = 0; a < hd_.atoms.size(); ++a) host_.push_back(host_node(hd_, a));
  }

  std::vector<Instantiation> first_options() const { return options(0, {}); }

  // One top-level branch; owns its r/s arrays.
  void run_branch(const Instantiation& sigma0, std::vector<MinedRule>& out, EngineStats& stats) const {
    std::vector<Table> r(hd_.nodes.size());
    step(0, sigma0, r, out, stats);
  }

 private:
  std::vector<LiteralScheme> lambda_key(std::size_t p) const {
    std::vector<LiteralScheme> key;
    for (auto l : hd_.nodes[p].lambda) key.push_back(hd_.atoms[l]);
    std::sort(key.begin(), key.end());
    return key;
  }

  Atom instantiate(const LiteralScheme& s, const Instantiation& sigma) const {
    if (!s.predicate_variable) return atom_of(s);
    return instantiate_scheme(s, sigma, prefix_.at(s));
  }

  std::vector<Instantiation> options(std::size_t i, const Instantiation& base) const {
    std::vector<Instantiation> out;
    InstantiationEnumerator e(node_patterns_[visit_[i]], db_, type_, base);
    while (auto next = e.next()) out.push_back(std::move(*next));
    return out;
  }

  void step(std::size_t i, const Instantiation& sigma, std::vector<Table>& r, std::vector<MinedRule>& out,
            EngineStats& stats) const {
    const auto p = visit_[i];
    const auto& node = hd_.nodes[p];
    ++stats.partial_bodies;
    std::vector<Atom> atoms;
    for (auto l : node.lambda) atoms.push_back(instantiate(hd_.atoms[l], sigma));
    Table t = project(natural_join(atoms, db_), node.chi);
    for (auto c : node.children) t = semijoin(t, r[position_[c]]);
    if (t.empty()) {
      ++stats.pruned;
      return;
    }
    r[i] = std::move(t);
    if (i + 1 < visit_.size()) {
      for (const auto& next : options(i + 1, sigma)) step(i + 1, next, r, out, stats);
      return;
    }
    // Second half, top-down.
    const auto n = visit_.size();
    std::vector<Table> s(n);
    s[n - 1] = r[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) s[j] = semijoin(r[j], s[position_[hd_.nodes[visit_[j]].parent]]);
    find_heads(sigma, s, out, stats);
  }

  void find_heads(const Instantiation& sigma_b, const std::vector<Table>& s, std::vector<MinedRule>& out,
                  EngineStats& stats) const {
    ++stats.bodies;
    ReducedBody reduced;
    reduced.s.resize(hd_.nodes.size());
    for (std::size_t j = 0; j < s.size(); ++j) reduced.s[visit_[j]] = s[j];
    for (std::size_t a = 0; a < hd_.atoms.size(); ++a) {
      reduced.atoms.push_back(instantiate(hd_.atoms[a], sigma_b));
      reduced.host.push_back(host_[a]);
    }
    const Ratio sup = reduced_support(reduced, db_);
    if (!(sup > th_.sup)) {
      ++stats.support_rejected;
      return;
    }

    // b = J(body): the reduced node relations carry every non-padding
    // variable; padded atoms restore their padding columns.
    Table b = natural_join(s);
    const auto covered = b.schema();
    for (const auto& atom : reduced.atoms) {
      const auto vars = variables_of(atom);
      if (!std::includes(covered.begin(), covered.end(), vars.begin(), vars.end())) b = join(b, bind(atom, db_));
    }

    std::vector<Instantiation> heads;
    if (mq_.head().predicate_variable) {
      InstantiationEnumerator e({mq_.head()}, db_, type_, sigma_b);
      while (auto h = e.next()) heads.push_back(std::move(*h));
    } else {
      heads.push_back(sigma_b);
    }
    for (const auto& sigma : heads) {
      ++stats.heads_tested;
      const Table h = bind(instantiate(mq_.head(), sigma), db_);
      const Ratio cvr = fraction(h, b);
      const Ratio cnf = fraction(b, h);
      if (cvr > th_.cvr && cnf > th_.cnf) {
        ++stats.rules;
        out.push_back({sigma, apply(sigma, mq_), {sup, cvr, cnf}});
      }
    }
  }

  const Database& db_;
  const Metaquery& mq_;
  const Thresholds& th_;
  InstantiationType type_;
  const HypertreeDecomposition& hd_;
  std::map<LiteralScheme, std::string> prefix_;
  std::vector<std::size_t> visit_;
  std::vector<std::size_t> position_;
  std::vector<std::vector<LiteralScheme>> node_patterns_;
  std::vector<std::size_t> host_;
};

}  // namespace

void check_thresholds(const Thresholds& th) {
  for (const auto& [name, v] : {std::pair{"sup", th.sup}, std::pair{"cvr", th.cvr}, std::pair{"cnf", th.cnf}})
    if (!(v < Ratio::one())) throw ValidationError(std::string(name) + " threshold must be below 1");
}

MiningResult find_rules(const Database& db, const Metaquery& mq, const Thresholds& th, InstantiationType type,
                        const EngineOptions& options) {
  if (auto v = validate(mq, type); !v.empty()) throw ValidationError(v.front().message);
  check_thresholds(th);
  for (const auto& s : mq.literal_schemes()) check_concrete(s, db);

  MiningResult result;
  auto& st = result.stats;
  st.n = db.size();
  st.m = mq.patterns().size();
  for (const auto& p : mq.patterns()) st.a = std::max(st.a, p.arity());
  st.b = db.max_arity();
  st.d = db.max_relation_size();

  if (options.zero_threshold_fast_path && th.sup == Ratio::zero() && th.cvr == Ratio::zero() &&
      th.cnf == Ratio::zero()) {
    st.c = 0;
    for (const auto& sigma : enumerate_instantiations(mq, db, type)) {
      ++st.bodies;
      ++st.heads_tested;
      Rule rule = apply(sigma, mq);
      if (!positive_index_check(rule, db, IndexKind::cnf)) continue;
      const Indices ix = indices(rule, db);
      ++st.rules;
      result.rules.push_back({sigma, std::move(rule), ix});
    }
    sort_rules(result.rules);
    return result;
  }

  DecomposeStats ds;
  const auto body = mq.body_set();
  const HypertreeDecomposition hd =
      options.trivial_decomposition ? trivial_decomposition(body) : hypertree_decompose(body, options.budget, &ds);
  st.c = hd.width();
  st.decomposition_nodes = hd.nodes.size();
  st.decomposition_expansions = ds.expansions;
  st.budget_exhausted = ds.budget_exhausted;

  const Miner miner(db, mq, th, type, hd);
  const auto first = miner.first_options();
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(first.size())));
  if (threads <= 1) {
    for (const auto& sigma : first) miner.run_branch(sigma, result.rules, st);
  } else {
    std::vector<std::vector<MinedRule>> outs(threads);
    std::vector<EngineStats> stats(threads);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (auto i = next++; i < first.size(); i = next++) miner.run_branch(first[i], outs[w], stats[w]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (unsigned w = 0; w < threads; ++w) {
      add_stats(st, stats[w]);
      std::move(outs[w].begin(), outs[w].end(), std::back_inserter(result.rules));
    }
  }
  sort_rules(result.rules);
  return result;
}

ReducedBody reduce_body(const std::vector<Atom>& body, const Database& db, const HypertreeDecomposition& hd) {
  ReducedBody out;
  const auto acy = acy_transform(hd, db);
  std::vector<Table> tables;
  for (const auto& a : acy.atoms) tables.push_back(bind(a, acy.db));
  out.s = run_semijoin_program(full_reducer(acy.tree), std::move(tables));
  for (const auto& atom : distinct_atoms(body)) {
    const auto scheme = scheme_of(atom);
    const auto it = std::find(hd.atoms.begin(), hd.atoms.end(), scheme);
    if (it == hd.atoms.end()) throw std::logic_error("atom " + atom.to_string() + " is not in the decomposition");
    out.atoms.push_back(atom);
    out.host.push_back(host_node(hd, static_cast<std::size_t>(it - hd.atoms.begin())));
  }
  return out;
}

Ratio reduced_support(const ReducedBody& reduced, const Database& db) {
  Ratio best = Ratio::zero();
  for (std::size_t i = 0; i < reduced.atoms.size(); ++i) {
    const Table ja = bind(reduced.atoms[i], db);
    const Ratio v = fraction(ja, reduced.s[reduced.host[i]]);
    if (v > best) best = v;
  }
  return best;
}

bool enough_support(const ReducedBody& reduced, const Database& db, const Ratio& k_sup) {
  for (std::size_t i = 0; i < reduced.atoms.size(); ++i) {
    const Table ja = bind(reduced.atoms[i], db);
    if (fraction(ja, reduced.s[reduced.host[i]]) > k_sup) return true;
  }
  return false;
}

Ratio support_via_decomposition(const Rule& rule, const Database& db) {
  const auto body = distinct_atoms(rule.body);
  std::vector<LiteralScheme> schemes;
  for (const auto& a : body) schemes.push_back(scheme_of(a));
  return reduced_support(reduce_body(body, db, hypertree_decompose(schemes)), db);
}

bool satisfiable(const std::vector<Atom>& atoms, const Database& db) {
  const auto unique = distinct_atoms(atoms);
  std::vector<LiteralScheme> schemes;
  for (const auto& a : unique) schemes.push_back(scheme_of(a));
  std::vector<Table> tables;
  std::vector<SemijoinStep> program;
  if (auto tree = build_join_tree(schemes)) {
    for (const auto& n : tree->nodes) tables.push_back(bind(atom_of(n), db));
    program = full_reducer(*tree);
  } else {
    const auto acy = acy_transform(hypertree_decompose(schemes), db);
    for (const auto& a : acy.atoms) tables.push_back(bind(a, acy.db));
    program = full_reducer(acy.tree);
  }
  const auto reduced = run_semijoin_program(program, std::move(tables));
  return std::none_of(reduced.begin(), reduced.end(), [](const Table& t) { return t.empty(); });
}

bool positive_index_check(const Rule& rule, const Database& db, IndexKind index) {
  std::vector<Atom> atoms = rule.body;
  if (index != IndexKind::sup) atoms.push_back(rule.head);
  return satisfiable(atoms, db);
}

}  // namespace metamine
