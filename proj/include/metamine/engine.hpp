#pragma once
// Decomposition-guided rule mining.

#include <cstddef>
#include <vector>

#include "metamine/instantiation.hpp"
#include "metamine/metaquery.hpp"
#include "metamine/ratio.hpp"
#include "metamine/relcore.hpp"
#include "metamine/structure.hpp"

namespace metamine {

// Each threshold must lie in [0, 1); comparisons are strict.
struct Thresholds {
  Ratio sup;
  Ratio cvr;
  Ratio cnf;
};

// Throws ValidationError when a threshold is outside [0, 1).
void check_thresholds(const Thresholds& th);

struct MinedRule {
  Instantiation sigma;
  Rule rule;
  Indices indices;
};

struct EngineStats {
  std::size_t n = 0;  // relations in the database
  std::size_t m = 0;  // distinct relation patterns
  std::size_t a = 0;  // largest pattern arity
  std::size_t b = 0;  // largest relation arity
  std::size_t c = 0;  // width of the decomposition used
  std::size_t d = 0;  // largest relation size
  std::size_t decomposition_nodes = 0;
  std::size_t decomposition_expansions = 0;
  bool budget_exhausted = false;
  std::size_t partial_bodies = 0;     // node-level instantiations tried
  std::size_t pruned = 0;             // of which the reduced node relation was empty
  std::size_t bodies = 0;             // complete body instantiations reached
  std::size_t support_rejected = 0;
  std::size_t heads_tested = 0;
  std::size_t rules = 0;
};

struct EngineOptions {
  // Use the single-node decomposition instead of searching.
  bool trivial_decomposition = false;
  // With all thresholds 0, decide each instantiation by satisfiability of
  // head and body instead of running the decomposition pipeline.
  bool zero_threshold_fast_path = false;
  // Worker threads over the first visited node's instantiations.
  unsigned threads = 1;
  std::size_t budget = default_search_budget();
};

struct MiningResult {
  std::vector<MinedRule> rules;  // sorted by instantiation
  EngineStats stats;
};

// Every type-T instantiation whose rule has sup, cvr and cnf strictly above
// the thresholds. Throws ValidationError for an invalid metaquery or
// thresholds, BindingError when a concrete atom names a missing relation or
// has the wrong arity.
MiningResult find_rules(const Database& db, const Metaquery& mq, const Thresholds& th, InstantiationType type,
                        const EngineOptions& options = {});

// Node relations of a decomposition after a full reducer has run, plus the
// node hosting each body atom (atom in lambda, variables in chi).
struct ReducedBody {
  std::vector<Atom> atoms;
  std::vector<std::size_t> host;
  std::vector<Table> s;  // indexed by decomposition node
};

// hd must be a complete decomposition of the distinct atoms of body.
ReducedBody reduce_body(const std::vector<Atom>& body, const Database& db, const HypertreeDecomposition& hd);

// max over atoms a of |bind(a) semijoin s[host(a)]| / |bind(a)|.
Ratio reduced_support(const ReducedBody& reduced, const Database& db);
bool enough_support(const ReducedBody& reduced, const Database& db, const Ratio& k_sup);

// sup of the rule through decomposition, acyclic transform and full reducer.
Ratio support_via_decomposition(const Rule& rule, const Database& db);

enum class IndexKind { sup, cvr, cnf };

// index(rule) > 0, decided by satisfiability of the certifying set: the body
// for sup, head and body for cvr and cnf.
bool positive_index_check(const Rule& rule, const Database& db, IndexKind index);

// True when the atoms have at least one common satisfying assignment.
bool satisfiable(const std::vector<Atom>& atoms, const Database& db);

}  // namespace metamine
