#pragma once
// Brute-force reference implementations. Nothing here uses the relational
// operators of relcore; evaluation is nested-loop search over variable
// assignments.

#include <cstdint>
#include <string>
#include <vector>

#include "metamine/engine.hpp"
#include "metamine/metaquery.hpp"
#include "metamine/relcore.hpp"

namespace metamine {

inline constexpr std::uint64_t oracle_instantiation_guard = 1'000'000;
inline constexpr std::uint64_t oracle_step_guard = 50'000'000;

// Throws OracleRefused past step_guard search steps in any one join.
Indices brute_force_indices(const Rule& rule, const Database& db, std::uint64_t step_guard = oracle_step_guard);

// Throws OracleRefused past oracle_instantiation_guard instantiations.
std::vector<MinedRule> brute_force_mine(const Database& db, const Metaquery& mq, const Thresholds& th,
                                        InstantiationType type);

struct CqTerm {
  bool constant = false;
  std::string text;
  friend bool operator==(const CqTerm&, const CqTerm&) = default;
};

struct CqAtom {
  std::string relation;
  std::vector<CqTerm> terms;
  std::string to_string() const;
};

struct ConjunctiveQuery {
  std::vector<CqAtom> atoms;
  std::string to_string() const;
};

// Number of substitutions of the query's variables satisfying every atom.
// Throws BindingError on an unknown relation or arity mismatch and
// OracleRefused past step_guard search steps.
std::uint64_t count_substitutions(const ConjunctiveQuery& cq, const Database& db,
                                  std::uint64_t step_guard = oracle_step_guard);

struct CqReduction {
  ConjunctiveQuery query;
  Database db;
};

// Relation u<a> of arity a+1 holds (name, t) for every tuple t of every
// relation of arity a. Each literal scheme L(X1..Xa) becomes
// u<a>(L, X1..Xa), where L is a variable for a predicate variable and the
// relation name as a constant otherwise. The head is dropped for sup.
// Variables are renamed "P:<name>" and "V:<name>". Throws ValidationError
// for a metaquery that is not pure.
CqReduction reduce_to_cq(const Metaquery& mq, const Database& db, IndexKind index);

}  // namespace metamine
