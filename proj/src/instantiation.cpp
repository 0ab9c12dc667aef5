#include "metamine/instantiation.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "metamine/error.hpp"

namespace metamine {

namespace {

// All injective maps from k slots into n columns, lexicographic.
void injective_maps(std::size_t k, std::size_t n, std::vector<std::size_t>& cur, std::vector<bool>& used,
                    std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (used[c]) continue;
    used[c] = true;
    cur.push_back(c);
    injective_maps(k, n, cur, used, out);
    cur.pop_back();
    used[c] = false;
  }
}

Atom build_atom(const LiteralScheme& scheme, const PatternBinding& b, const std::vector<std::string>& pads) {
  Atom atom{b.relation, std::vector<std::string>(b.target_arity)};
  std::vector<bool> filled(b.target_arity, false);
  for (std::size_t i = 0; i < b.positions.size(); ++i) {
    atom.args[b.positions[i]] = scheme.args[i];
    filled[b.positions[i]] = true;
  }
  std::size_t next = 0;
  for (std::size_t c = 0; c < b.target_arity; ++c)
    if (!filled[c]) atom.args[c] = pads[next++];
  return atom;
}

}  // namespace

std::vector<std::size_t> PatternBinding::padding_columns() const {
  std::vector<bool> filled(target_arity, false);
  for (auto p : positions) filled[p] = true;
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < target_arity; ++c)
    if (!filled[c]) out.push_back(c);
  return out;
}

void Instantiation::bind(const LiteralScheme& pattern, PatternBinding binding) {
  if (!pattern.predicate_variable) throw InstantiationError(pattern.to_string() + " is not a relation pattern");
  if (auto it = bindings_.find(pattern); it != bindings_.end()) {
    if (it->second != binding) throw InstantiationError("pattern " + pattern.to_string() + " bound twice");
    return;
  }
  if (auto it = relations_.find(pattern.symbol); it != relations_.end() && it->second != binding.relation)
    throw InstantiationError("predicate variable " + pattern.symbol + " bound to both " + it->second + " and " +
                             binding.relation);
  relations_.emplace(pattern.symbol, binding.relation);
  bindings_.emplace(pattern, std::move(binding));
}

const PatternBinding* Instantiation::find(const LiteralScheme& pattern) const {
  auto it = bindings_.find(pattern);
  return it == bindings_.end() ? nullptr : &it->second;
}

const std::string* Instantiation::relation_of(const std::string& predicate_variable) const {
  auto it = relations_.find(predicate_variable);
  return it == relations_.end() ? nullptr : &it->second;
}

std::string Instantiation::to_string() const {
  std::string out;
  for (const auto& [pattern, b] : bindings_) {
    if (!out.empty()) out += "; ";
    out += pattern.to_string() + " -> " + b.relation + "[";
    for (std::size_t i = 0; i < b.positions.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(b.positions[i]);
    }
    out += "]/" + std::to_string(b.target_arity);
  }
  return out;
}

bool agree(const Instantiation& a, const Instantiation& b) {
  for (const auto& [pattern, binding] : a.bindings()) {
    if (const auto* other = b.find(pattern); other && *other != binding) return false;
    if (const auto* rel = b.relation_of(pattern.symbol); rel && *rel != binding.relation) return false;
  }
  return true;
}

Instantiation compose(const Instantiation& a, const Instantiation& b) {
  if (!agree(a, b)) throw InstantiationError("instantiations do not agree");
  Instantiation out = a;
  for (const auto& [pattern, binding] : b.bindings()) out.bind(pattern, binding);
  return out;
}

Atom instantiate_scheme(const LiteralScheme& scheme, const Instantiation& sigma, const std::string& pad_prefix) {
  if (!scheme.predicate_variable) return atom_of(scheme);
  const auto* b = sigma.find(scheme);
  if (!b) throw InstantiationError("pattern " + scheme.to_string() + " is not instantiated");
  std::vector<std::string> pads;
  for (auto c : b->padding_columns()) pads.push_back(pad_prefix + std::to_string(c));
  return build_atom(scheme, *b, pads);
}

std::string internal_padding_prefix(std::size_t pattern_index) { return "#" + std::to_string(pattern_index) + "."; }

Rule apply(const Instantiation& sigma, const Metaquery& mq) {
  std::map<LiteralScheme, Atom> atoms;
  std::size_t counter = 0;
  for (const auto& p : mq.patterns()) {
    const auto* b = sigma.find(p);
    if (!b) throw InstantiationError("pattern " + p.to_string() + " is not instantiated");
    std::vector<std::string> pads;
    for (std::size_t i = 0, n = b->padding_columns().size(); i < n; ++i) pads.push_back("#" + std::to_string(++counter));
    atoms.emplace(p, build_atom(p, *b, pads));
  }
  auto atom_for = [&](const LiteralScheme& s) { return s.predicate_variable ? atoms.at(s) : atom_of(s); };
  Rule rule{atom_for(mq.head()), {}};
  for (const auto& s : mq.body()) rule.body.push_back(atom_for(s));
  return rule;
}

std::vector<PatternBinding> candidate_bindings(const LiteralScheme& pattern, const Relation& relation,
                                               InstantiationType type) {
  const auto k = pattern.arity();
  const auto n = relation.arity();
  std::vector<std::vector<std::size_t>> maps;
  switch (type) {
    case InstantiationType::type0:
      if (n == k) {
        maps.emplace_back(k);
        std::iota(maps.back().begin(), maps.back().end(), 0);
      }
      break;
    case InstantiationType::type1:
    case InstantiationType::type2:
      if (n == k || (type == InstantiationType::type2 && n > k)) {
        std::vector<std::size_t> cur;
        std::vector<bool> used(n, false);
        injective_maps(k, n, cur, used, maps);
      }
      break;
  }
  // Maps placing equal arguments identically produce the same atom.
  std::vector<std::size_t> first_index(k);
  for (std::size_t i = 0; i < k; ++i)
    first_index[i] = static_cast<std::size_t>(std::find(pattern.args.begin(), pattern.args.end(), pattern.args[i]) -
                                              pattern.args.begin());
  std::set<std::vector<long>> seen;
  std::vector<PatternBinding> out;
  for (auto& m : maps) {
    std::vector<long> signature(n, -1);
    for (std::size_t i = 0; i < k; ++i) signature[m[i]] = static_cast<long>(first_index[i]);
    if (!seen.insert(signature).second) continue;
    out.push_back({relation.name(), std::move(m), n});
  }
  return out;
}

struct InstantiationEnumerator::State {
  struct Level {
    std::vector<PatternBinding> options;
    std::size_t index = 0;
  };

  std::vector<LiteralScheme> patterns;
  const Database* db;
  InstantiationType type;
  std::vector<Level> levels;
  std::vector<Instantiation> partial;  // partial[d]: after levels [0, d)
  bool started = false;
  bool done = false;

  std::vector<PatternBinding> options(std::size_t depth, const Instantiation& cur) const {
    const auto& p = patterns[depth];
    if (const auto* fixed = cur.find(p)) return {*fixed};
    std::vector<PatternBinding> out;
    auto add = [&](const Relation& r) {
      auto c = candidate_bindings(p, r, type);
      out.insert(out.end(), std::make_move_iterator(c.begin()), std::make_move_iterator(c.end()));
    };
    if (const auto* rel = cur.relation_of(p.symbol)) {
      if (const auto* r = db->find(*rel)) add(*r);
    } else {
      for (const auto* r : db->relations()) add(*r);
    }
    return out;
  }

  Instantiation extend(const Instantiation& cur, std::size_t depth, const PatternBinding& b) const {
    Instantiation next = cur;
    next.bind(patterns[depth], b);
    return next;
  }

  bool bump() {
    while (!levels.empty()) {
      partial.pop_back();
      auto& level = levels.back();
      if (++level.index < level.options.size()) {
        partial.push_back(extend(partial.back(), levels.size() - 1, level.options[level.index]));
        return true;
      }
      levels.pop_back();
    }
    return false;
  }

  bool settle() {
    while (levels.size() < patterns.size()) {
      auto opts = options(levels.size(), partial.back());
      if (opts.empty()) {
        if (!bump()) return false;
        continue;
      }
      levels.push_back({std::move(opts), 0});
      partial.push_back(extend(partial.back(), levels.size() - 1, levels.back().options[0]));
    }
    return true;
  }
};

InstantiationEnumerator::InstantiationEnumerator(std::vector<LiteralScheme> patterns, const Database& db,
                                                 InstantiationType type, Instantiation base)
    : state_(std::make_unique<State>()) {
  for (const auto& p : patterns)
    if (!p.predicate_variable) throw InstantiationError(p.to_string() + " is not a relation pattern");
  state_->patterns = std::move(patterns);
  state_->db = &db;
  state_->type = type;
  state_->partial.push_back(std::move(base));
}

InstantiationEnumerator::~InstantiationEnumerator() = default;
InstantiationEnumerator::InstantiationEnumerator(InstantiationEnumerator&&) noexcept = default;
InstantiationEnumerator& InstantiationEnumerator::operator=(InstantiationEnumerator&&) noexcept = default;

std::optional<Instantiation> InstantiationEnumerator::next() {
  auto& s = *state_;
  if (s.done) return std::nullopt;
  bool ok;
  if (!s.started) {
    s.started = true;
    ok = s.settle();
  } else {
    ok = s.bump() && s.settle();
  }
  if (!ok) {
    s.done = true;
    return std::nullopt;
  }
  return s.partial.back();
}

std::vector<Instantiation> enumerate_instantiations(const Metaquery& mq, const Database& db, InstantiationType type) {
  if (auto v = validate(mq, type); !v.empty()) throw ValidationError(v.front().message);
  InstantiationEnumerator e(mq.patterns(), db, type);
  std::vector<Instantiation> out;
  while (auto next = e.next()) out.push_back(std::move(*next));
  return out;
}

}  // namespace metamine
