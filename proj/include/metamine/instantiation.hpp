#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "metamine/metaquery.hpp"
#include "metamine/relcore.hpp"

namespace metamine {

// Assignment of one relation pattern: the target relation and, for every
// argument of the pattern, the target column it lands in. Target columns
// that receive no argument are padding.
struct PatternBinding {
  std::string relation;
  std::vector<std::size_t> positions;
  std::size_t target_arity = 0;

  std::vector<std::size_t> padding_columns() const;
  friend auto operator<=>(const PatternBinding&, const PatternBinding&) = default;
};

// A partial instantiation: bindings for a set of relation patterns whose
// restriction to predicate variables is functional.
class Instantiation {
 public:
  Instantiation() = default;

  // Throws InstantiationError when the pattern is already bound differently
  // or its predicate variable is bound to another relation.
  void bind(const LiteralScheme& pattern, PatternBinding binding);

  const PatternBinding* find(const LiteralScheme& pattern) const;
  // Relation assigned to a predicate variable, or nullptr.
  const std::string* relation_of(const std::string& predicate_variable) const;

  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }
  const std::map<LiteralScheme, PatternBinding>& bindings() const { return bindings_; }

  // "P(X,Y)->r[0,1]; ..." in pattern order.
  std::string to_string() const;

  friend auto operator<=>(const Instantiation& a, const Instantiation& b) { return a.bindings_ <=> b.bindings_; }
  friend bool operator==(const Instantiation& a, const Instantiation& b) { return a.bindings_ == b.bindings_; }

 private:
  std::map<LiteralScheme, PatternBinding> bindings_;
  std::map<std::string, std::string> relations_;
};

// Both conditions: identical bindings on shared patterns and identical
// relations on shared predicate variables.
bool agree(const Instantiation& a, const Instantiation& b);
// Throws InstantiationError when the two do not agree.
Instantiation compose(const Instantiation& a, const Instantiation& b);

// The atom a scheme becomes under an instantiation. Concrete schemes map to
// themselves. Padding columns receive pad_prefix + column number. Throws
// InstantiationError when the scheme is an unbound pattern.
Atom instantiate_scheme(const LiteralScheme& scheme, const Instantiation& sigma, const std::string& pad_prefix);

// Padding prefix used for the pattern at index i of rep(MQ) during
// evaluation; padding names never collide with parsed variables.
std::string internal_padding_prefix(std::size_t pattern_index);

// sigma(MQ). Padding variables are numbered "#1", "#2", ... per pattern in
// rep(MQ) order, so identical schemes yield identical atoms.
Rule apply(const Instantiation& sigma, const Metaquery& mq);

// Lazily enumerates every type-T instantiation of the given patterns that
// agrees with base. Patterns already bound in base keep their binding.
// Order: patterns in the given order, relations by name, then position maps
// lexicographically. Maps yielding the same atom are emitted once.
class InstantiationEnumerator {
 public:
  InstantiationEnumerator(std::vector<LiteralScheme> patterns, const Database& db, InstantiationType type,
                          Instantiation base = {});
  ~InstantiationEnumerator();
  InstantiationEnumerator(InstantiationEnumerator&&) noexcept;
  InstantiationEnumerator& operator=(InstantiationEnumerator&&) noexcept;

  std::optional<Instantiation> next();

 private:
  struct State;
  std::unique_ptr<State> state_;
};

std::vector<Instantiation> enumerate_instantiations(const Metaquery& mq, const Database& db, InstantiationType type);

// Candidate bindings of one pattern against one relation, deduplicated.
std::vector<PatternBinding> candidate_bindings(const LiteralScheme& pattern, const Relation& relation,
                                               InstantiationType type);

}  // namespace metamine
