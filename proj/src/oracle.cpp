#include "metamine/oracle.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "metamine/error.hpp"

namespace metamine {

namespace {

using Assignment = std::vector<std::string>;

struct Goal {
  const Relation* relation;
  std::vector<int> slot;                // variable index, or -1 for a constant
  std::vector<std::string> constant;
};

class Search {
 public:
  Search(std::vector<Goal> goals, std::size_t variables, std::uint64_t guard)
      : goals_(std::move(goals)), values_(variables), bound_(variables, false), guard_(guard) {}

  template <typename F>
  void run(F&& on_solution) {
    descend(0, on_solution);
  }

 private:
  template <typename F>
  void descend(std::size_t g, F& on_solution) {
    if (g == goals_.size()) {
      on_solution(values_);
      return;
    }
    const Goal& goal = goals_[g];
    const auto& rel = *goal.relation;
    for (std::size_t t = 0; t < rel.size(); ++t) {
      if (++steps_ > guard_) throw OracleRefused("oracle search exceeded its step guard");
      const auto row = rel.row(t);
      std::vector<int> newly;
      bool ok = true;
      for (std::size_t c = 0; c < row.size() && ok; ++c) {
        const std::string_view cell = row[c].text();
        const int v = goal.slot[c];
        if (v < 0) {
          ok = cell == goal.constant[c];
        } else if (bound_[v]) {
          ok = values_[v] == cell;
        } else {
          values_[v] = std::string(cell);
          bound_[v] = true;
          newly.push_back(v);
        }
      }
      if (ok) descend(g + 1, on_solution);
      for (int v : newly) bound_[v] = false;
    }
  }

  std::vector<Goal> goals_;
  Assignment values_;
  std::vector<bool> bound_;
  std::uint64_t guard_;
  std::uint64_t steps_ = 0;
};

const Relation& lookup(const Database& db, const std::string& name, std::size_t arity) {
  const auto* r = db.find(name);
  if (!r) throw BindingError("unknown relation " + name);
  if (r->arity() != arity)
    throw BindingError("relation " + name + " has arity " + std::to_string(r->arity()) + ", used with " +
                       std::to_string(arity));
  return *r;
}

std::vector<std::string> sorted_vars(const std::vector<Atom>& atoms) {
  std::set<std::string> vars;
  for (const auto& a : atoms) vars.insert(a.args.begin(), a.args.end());
  return {vars.begin(), vars.end()};
}

// All satisfying assignments of the atoms, as tuples over sorted_vars(atoms).
std::set<Assignment> solutions(const std::vector<Atom>& atoms, const Database& db, std::uint64_t guard) {
  const auto vars = sorted_vars(atoms);
  auto index = [&](const std::string& v) {
    return static_cast<int>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
  };
  std::vector<Goal> goals;
  for (const auto& a : atoms) {
    Goal g{&lookup(db, a.relation, a.args.size()), {}, std::vector<std::string>(a.args.size())};
    for (const auto& v : a.args) g.slot.push_back(index(v));
    goals.push_back(std::move(g));
  }
  std::set<Assignment> out;
  Search(std::move(goals), vars.size(), guard).run([&](const Assignment& a) { out.insert(a); });
  return out;
}

std::size_t projected_size(const std::set<Assignment>& rows, const std::vector<std::string>& from,
                           const std::vector<std::string>& onto) {
  std::vector<std::size_t> cols;
  for (const auto& v : onto) cols.push_back(static_cast<std::size_t>(std::find(from.begin(), from.end(), v) - from.begin()));
  std::set<Assignment> out;
  for (const auto& r : rows) {
    Assignment p;
    for (auto c : cols) p.push_back(r[c]);
    out.insert(std::move(p));
  }
  return out.size();
}

Ratio ratio(std::size_t num, std::size_t den) { return num == 0 ? Ratio::zero() : Ratio(num, den); }

std::string term_text(const CqTerm& t) { return t.constant ? "'" + t.text + "'" : t.text; }

}  // namespace

Indices brute_force_indices(const Rule& rule, const Database& db, std::uint64_t step_guard) {
  std::vector<Atom> body;
  for (const auto& a : rule.body)
    if (std::find(body.begin(), body.end(), a) == body.end()) body.push_back(a);
  std::vector<Atom> all = body;
  if (std::find(all.begin(), all.end(), rule.head) == all.end()) all.push_back(rule.head);

  const auto body_vars = sorted_vars(body);
  const auto all_vars = sorted_vars(all);
  const auto head_vars = sorted_vars({rule.head});
  const auto jb = solutions(body, db, step_guard);
  const auto jall = solutions(all, db, step_guard);
  const auto jh = solutions({rule.head}, db, step_guard);

  Indices out{Ratio::zero(), Ratio::zero(), Ratio::zero()};
  for (const auto& a : body) {
    const auto vars = sorted_vars({a});
    const auto v = ratio(projected_size(jb, body_vars, vars), solutions({a}, db, step_guard).size());
    if (v > out.sup) out.sup = v;
  }
  out.cvr = ratio(projected_size(jall, all_vars, head_vars), jh.size());
  out.cnf = ratio(projected_size(jall, all_vars, body_vars), jb.size());
  return out;
}

std::vector<MinedRule> brute_force_mine(const Database& db, const Metaquery& mq, const Thresholds& th,
                                        InstantiationType type) {
  if (auto v = validate(mq, type); !v.empty()) throw ValidationError(v.front().message);
  check_thresholds(th);
  std::vector<MinedRule> out;
  InstantiationEnumerator e(mq.patterns(), db, type);
  std::uint64_t seen = 0;
  while (auto sigma = e.next()) {
    if (++seen > oracle_instantiation_guard) throw OracleRefused("too many instantiations for the oracle");
    Rule rule = apply(*sigma, mq);
    const Indices ix = brute_force_indices(rule, db);
    if (ix.sup > th.sup && ix.cvr > th.cvr && ix.cnf > th.cnf) out.push_back({*sigma, std::move(rule), ix});
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.sigma < y.sigma; });
  return out;
}

std::string CqAtom::to_string() const {
  std::string out = relation + "(";
  for (std::size_t i = 0; i < terms.size(); ++i) out += (i ? "," : "") + term_text(terms[i]);
  return out + ")";
}

std::string ConjunctiveQuery::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) out += (i ? ", " : "") + atoms[i].to_string();
  return out;
}

std::uint64_t count_substitutions(const ConjunctiveQuery& cq, const Database& db, std::uint64_t step_guard) {
  std::map<std::string, int> vars;
  std::vector<Goal> goals;
  for (const auto& a : cq.atoms) {
    Goal g{&lookup(db, a.relation, a.terms.size()), {}, {}};
    for (const auto& t : a.terms) {
      if (t.constant) {
        g.slot.push_back(-1);
        g.constant.push_back(t.text);
      } else {
        g.slot.push_back(vars.emplace(t.text, static_cast<int>(vars.size())).first->second);
        g.constant.emplace_back();
      }
    }
    goals.push_back(std::move(g));
  }
  std::uint64_t count = 0;
  Search(std::move(goals), vars.size(), step_guard).run([&](const Assignment&) { ++count; });
  return count;
}

CqReduction reduce_to_cq(const Metaquery& mq, const Database& db, IndexKind index) {
  if (!mq.is_pure()) throw ValidationError("the reduction requires a pure metaquery");
  std::set<std::size_t> arities;
  for (const auto* r : db.relations()) arities.insert(r->arity());
  for (const auto& s : mq.literal_schemes()) arities.insert(s.arity());

  CqReduction out;
  for (auto a : arities) {
    std::vector<std::vector<std::string>> rows;
    for (const auto* r : db.relations()) {
      if (r->arity() != a) continue;
      for (std::size_t t = 0; t < r->size(); ++t) {
        std::vector<std::string> row{r->name()};
        for (const auto& v : r->row(t)) row.emplace_back(v.text());
        rows.push_back(std::move(row));
      }
    }
    out.db.add(Relation::from_rows("u" + std::to_string(a), a + 1, rows));
  }
  auto atom_for = [](const LiteralScheme& s) {
    CqAtom atom{"u" + std::to_string(s.arity()), {}};
    atom.terms.push_back(s.predicate_variable ? CqTerm{false, "P:" + s.symbol} : CqTerm{true, s.symbol});
    for (const auto& v : s.args) atom.terms.push_back({false, "V:" + v});
    return atom;
  };
  if (index != IndexKind::sup) out.query.atoms.push_back(atom_for(mq.head()));
  for (const auto& s : mq.body()) out.query.atoms.push_back(atom_for(s));
  return out;
}

}  // namespace metamine
