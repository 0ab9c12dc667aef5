#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metamine/instantiation.hpp"
#include "metamine/metaquery.hpp"
#include "metamine/relcore.hpp"

namespace metamine {

// One edge per distinct literal scheme; edges[i] is sorted and labels[i] is
// the scheme it came from. Predicate variables appear as "@" + name so they
// never collide with ordinary variables.
struct Hypergraph {
  std::vector<std::string> vertices;
  std::vector<std::vector<std::string>> edges;
  std::vector<std::string> labels;
};

Hypergraph hypergraph_of(const Metaquery& mq);
Hypergraph semi_hypergraph_of(const Metaquery& mq);
// Over ordinary variables only, one edge per distinct scheme.
Hypergraph semi_hypergraph_of(const std::vector<LiteralScheme>& schemes);

struct GyoStep {
  std::size_t edge;
  // npos when the edge was removed as isolated.
  std::size_t witness;
};

struct GyoResult {
  Hypergraph residual;
  std::vector<GyoStep> steps;
  bool acyclic() const { return residual.edges.empty(); }
};

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

// Each round removes isolated edges, collects the current ears and removes
// them one at a time (re-checking each). A seed shuffles the order in which
// ears and witnesses are tried.
GyoResult gyo_reduce(const Hypergraph& h, std::optional<std::uint64_t> shuffle_seed = std::nullopt);

bool is_acyclic(const Metaquery& mq);
bool is_semi_acyclic(const Metaquery& mq);

struct JoinTree {
  std::vector<LiteralScheme> nodes;
  std::vector<std::size_t> parent;  // npos at the root
  std::vector<std::vector<std::size_t>> children;
  std::size_t root = 0;
};

// Distinct schemes become nodes. Returns nullopt unless the set is
// semi-acyclic. The edge removed last by the reduction is the root.
std::optional<JoinTree> build_join_tree(const std::vector<LiteralScheme>& schemes);

// Every variable's nodes form a connected subtree.
bool is_join_tree(const JoinTree& tree);

struct SemijoinStep {
  std::size_t target;
  std::size_t source;
  friend bool operator==(const SemijoinStep&, const SemijoinStep&) = default;
};

// Nodes of a rooted tree in reverse breadth-first order, children visited
// in the order given. parent[i] == npos marks the root.
std::vector<std::size_t> bottom_up_visit(const std::vector<std::vector<std::size_t>>& children, std::size_t root);

// First half: for each node of the bottom-up visit, one step per child
// (children in visit order). Second half: the first half reversed with
// target and source exchanged.
std::vector<SemijoinStep> full_reducer(const JoinTree& tree);

std::vector<Table> run_semijoin_program(const std::vector<SemijoinStep>& program, std::vector<Table> tables);

struct HypertreeNode {
  std::vector<std::string> chi;      // sorted
  std::vector<std::size_t> lambda;   // indices into atoms, sorted
  std::size_t parent = npos;
  std::vector<std::size_t> children;
};

struct HypertreeDecomposition {
  std::vector<LiteralScheme> atoms;
  std::vector<HypertreeNode> nodes;
  std::size_t root = 0;
  std::size_t width() const;
};

struct DecompositionCheck {
  // Violated condition names in check order: "tree", "coverage",
  // "connectedness", "chi-subset", "descendant", "completeness".
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

DecompositionCheck check_decomposition(const HypertreeDecomposition& hd);

// Expansion budget: METAMINE_BUDGET when set to a positive integer, else 1e5.
std::size_t default_search_budget();

struct DecomposeStats {
  std::size_t expansions = 0;
  bool budget_exhausted = false;
};

// Complete decomposition of minimum width found within the budget. Width 1
// comes from the join tree; larger widths from a k-bounded search; the
// single-node decomposition is the fallback.
HypertreeDecomposition hypertree_decompose(const std::vector<LiteralScheme>& atoms,
                                           std::size_t budget = default_search_budget(),
                                           DecomposeStats* stats = nullptr);

HypertreeDecomposition trivial_decomposition(const std::vector<LiteralScheme>& atoms);

// lambda'(p) = sigma(lambda(p)); chi and the tree are unchanged. Padding
// columns are named with internal_padding_prefix(pattern_index) where the
// index is taken from pattern_order.
HypertreeDecomposition instantiate_decomposition(const HypertreeDecomposition& hd, const Instantiation& sigma,
                                                 const std::vector<LiteralScheme>& pattern_order);

struct AcyclicTransform {
  std::vector<Atom> atoms;  // one per decomposition node, arguments chi(p)
  Database db;              // relation per node: pi_chi(J(lambda(p)))
  JoinTree tree;            // same shape as the decomposition
};

// Atoms of hd must be concrete.
AcyclicTransform acy_transform(const HypertreeDecomposition& hd, const Database& db);

// Text rendering used by the analyzer: one line per node, indented by depth.
std::string render_decomposition(const HypertreeDecomposition& hd);
std::string render_program(const JoinTree& tree, const std::vector<SemijoinStep>& program);

}  // namespace metamine
