#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metamine/metaquery.hpp"
#include "metamine/ratio.hpp"
#include "metamine/relcore.hpp"

namespace metamine {

// Simple undirected graph. Labels are alphanumeric.
struct Graph {
  std::vector<std::string> vertices;
  std::vector<std::pair<std::string, std::string>> edges;
};

struct CnfLiteral {
  std::string variable;
  bool negated = false;
  friend bool operator==(const CnfLiteral&, const CnfLiteral&) = default;
};

// Clauses over variables split into the existential part (pi) and the
// counted part (chi); k_prime is the required number of chi assignments.
struct CnfFormula {
  std::vector<std::string> pi;
  std::vector<std::string> chi;
  std::vector<std::vector<CnfLiteral>> clauses;
  std::uint64_t k_prime = 1;
};

struct Gadget {
  Database db;
  Metaquery mq;
  // Threshold on the index the construction targets (0 unless stated).
  Ratio threshold;
};

// The running example: UsCa, CaTe and binary UsPT.
Database gen_fig1();
// Same, with the ternary UsPT.
Database gen_fig2();

// Throws ValidationError on malformed graphs (self-loops, unknown vertices,
// bad labels) and on the generator preconditions below.
void check_graph(const Graph& g);

// Needs at least one edge.
Gadget gen_3col(const Graph& g);
Gadget gen_semiacyclic_3col(const Graph& g);
// Needs more than two vertices.
Gadget gen_hamiltonian(const Graph& g);
// Clauses are padded to three literals by repeating their last literal.
// Needs 1 <= k_prime <= 2^|chi|.
Gadget gen_csat(const CnfFormula& f, InstantiationType type);

// Brute-force reference verdicts.
bool is_three_colorable(const Graph& g);
bool has_hamiltonian_path(const Graph& g);
// Some assignment of pi admits at least k_prime satisfying chi assignments.
bool csat_holds(const CnfFormula& f);

// Text formats: "v A B C" then "e A B" lines; "pi a b", "chi d e", clause
// lines such as "a ~b e", and "k 3". "#" starts a comment. Throw ParseError.
Graph parse_graph(std::string_view text);
CnfFormula parse_formula(std::string_view text);

}  // namespace metamine
