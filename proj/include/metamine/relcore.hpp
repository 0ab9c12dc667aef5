#pragma once

// Set-semantics relational algebra over in-memory relations.
//
// Stored relations (Relation) are positional. Everything computed from them
// is a Table: a relation whose columns are named by variables, so joins are
// keyed by variable name rather than by position. Tables keep their schema
// sorted and their rows sorted and duplicate-free, which makes equality a
// plain member-wise comparison and every operator order-insensitive.

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metamine/ratio.hpp"
#include "metamine/value.hpp"

namespace metamine {

using Row = std::span<const Value>;

class Relation {
 public:
  // cells is row-major; duplicates are dropped.
  Relation(std::string name, std::size_t arity, std::vector<Value> cells);

  static Relation from_rows(std::string name, std::size_t arity,
                            const std::vector<std::vector<std::string>>& rows);

  const std::string& name() const { return name_; }
  std::size_t arity() const { return arity_; }
  std::size_t size() const { return cells_.size() / arity_; }
  bool empty() const { return cells_.empty(); }

  Row row(std::size_t i) const { return {cells_.data() + i * arity_, arity_}; }
  bool contains(Row row) const;
  const std::vector<Value>& cells() const { return cells_; }

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  std::string name_;
  std::size_t arity_;
  std::vector<Value> cells_;
};

class Database {
 public:
  Database() = default;

  // Throws ValidationError on a duplicate relation name.
  void add(Relation relation);

  const Relation* find(std::string_view name) const;
  // Throws BindingError when the relation does not exist.
  const Relation& at(std::string_view name) const;

  std::size_t size() const { return relations_.size(); }
  std::size_t max_arity() const;
  std::size_t max_relation_size() const;
  // Sorted by name.
  std::vector<const Relation*> relations() const;

  friend bool operator==(const Database&, const Database&) = default;

 private:
  std::map<std::string, Relation, std::less<>> relations_;
};

// A concrete atom name(X1,...,Xk). Arguments are variables; a repeated
// variable selects rows whose corresponding columns are equal.
struct Atom {
  std::string relation;
  std::vector<std::string> args;

  std::string to_string() const;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

// A Horn rule head <- body over concrete atoms.
struct Rule {
  Atom head;
  std::vector<Atom> body;

  std::string to_string() const;
  friend bool operator==(const Rule&, const Rule&) = default;
};

// Distinct variables of the atoms, sorted.
std::vector<std::string> variables_of(std::span<const Atom> atoms);
std::vector<std::string> variables_of(const Atom& atom);

class Table {
 public:
  // Empty schema, no rows.
  Table() = default;
  // schema must be duplicate-free; it is reordered into sorted order together
  // with the columns, and rows are deduplicated.
  Table(std::vector<std::string> schema, std::vector<Value> cells);

  // Empty schema with the single empty tuple.
  static Table unit();

  const std::vector<std::string>& schema() const { return schema_; }
  std::size_t width() const { return schema_.size(); }
  std::size_t size() const { return rows_; }
  bool empty() const { return rows_ == 0; }
  Row row(std::size_t i) const { return {cells_.data() + i * width(), width()}; }
  // Column index of a variable, or npos.
  std::size_t column(std::string_view var) const;
  bool has(std::string_view var) const { return column(var) != npos; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  friend bool operator==(const Table&, const Table&) = default;

 private:
  friend class TableBuilder;
  std::vector<std::string> schema_;
  std::vector<Value> cells_;
  std::size_t rows_ = 0;
};

// Binds an atom to its relation. Throws BindingError on an unknown relation
// or an arity mismatch.
Table bind(const Atom& atom, const Database& db);

Table join(const Table& left, const Table& right);
// Join of all tables; the unit table for an empty list.
Table natural_join(std::span<const Table> tables);
Table natural_join(std::span<const Atom> atoms, const Database& db);

// Throws SchemaError when a variable is not in the schema.
Table project(const Table& table, std::span<const std::string> vars);

// Rows of target that join with at least one row of source. With no shared
// variables this keeps target whole when source is non-empty and empties it
// otherwise.
Table semijoin(const Table& target, const Table& source);

// |pi_att(R)(J(R) join J(S))| / |J(R)|, and 0 when the numerator is 0.
Ratio fraction(std::span<const Atom> r, std::span<const Atom> s, const Database& db);
Ratio fraction(const Table& joined_r, const Table& joined_s);

struct Indices {
  Ratio sup;
  Ratio cvr;
  Ratio cnf;
  friend bool operator==(const Indices&, const Indices&) = default;
};

// sup = max over body atoms a of {a} fraction body; cvr = head fraction body;
// cnf = body fraction head. Body and head are treated as sets of atoms.
Indices indices(const Rule& rule, const Database& db);

}  // namespace metamine
