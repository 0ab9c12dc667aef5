#include "metamine/relcore.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <utility>

#include "metamine/error.hpp"

namespace metamine {

namespace {

bool row_less(Row a, Row b) { return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()); }

bool row_equal(Row a, Row b) { return std::equal(a.begin(), a.end(), b.begin(), b.end()); }

// Sorts rows lexicographically and drops duplicates. Returns the new count.
std::size_t canonicalize_rows(std::vector<Value>& cells, std::size_t width, std::size_t rows) {
  if (width == 0) return std::min<std::size_t>(rows, 1);
  if (rows < 2) return rows;
  std::vector<std::uint32_t> order(rows);
  std::iota(order.begin(), order.end(), 0);
  auto at = [&](std::uint32_t i) { return Row(cells.data() + std::size_t{i} * width, width); };
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return row_less(at(a), at(b)); });
  std::vector<Value> out;
  out.reserve(cells.size());
  std::size_t kept = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && row_equal(at(order[k]), at(order[k - 1]))) continue;
    auto r = at(order[k]);
    out.insert(out.end(), r.begin(), r.end());
    ++kept;
  }
  cells = std::move(out);
  return kept;
}

std::uint64_t mix(std::uint64_t h) {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

std::uint64_t key_hash(Row row, const std::vector<std::size_t>& cols) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (auto c : cols) h = mix(h ^ (row[c].id() + 0x9e3779b97f4a7c15ULL + (h << 6)));
  return h;
}

bool keys_equal(Row a, const std::vector<std::size_t>& acols, Row b, const std::vector<std::size_t>& bcols) {
  for (std::size_t i = 0; i < acols.size(); ++i)
    if (a[acols[i]] != b[bcols[i]]) return false;
  return true;
}

// Hash index over the key columns of a table: (hash, row) pairs sorted by hash.
class KeyIndex {
 public:
  KeyIndex(const Table& table, std::vector<std::size_t> cols) : table_(table), cols_(std::move(cols)) {
    entries_.reserve(table.size());
    for (std::size_t i = 0; i < table.size(); ++i)
      entries_.emplace_back(key_hash(table.row(i), cols_), static_cast<std::uint32_t>(i));
    std::sort(entries_.begin(), entries_.end());
  }

  template <typename F>
  void for_each_match(Row probe, const std::vector<std::size_t>& probe_cols, F&& f) const {
    const auto h = key_hash(probe, probe_cols);
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(h, std::uint32_t{0}));
    for (; it != entries_.end() && it->first == h; ++it) {
      Row candidate = table_.row(it->second);
      if (keys_equal(probe, probe_cols, candidate, cols_)) {
        if (!f(candidate)) return;
      }
    }
  }

  bool contains(Row probe, const std::vector<std::size_t>& probe_cols) const {
    bool found = false;
    for_each_match(probe, probe_cols, [&](Row) {
      found = true;
      return false;
    });
    return found;
  }

 private:
  const Table& table_;
  std::vector<std::size_t> cols_;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> entries_;
};

std::string join_args(const std::vector<std::string>& args) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += args[i];
  }
  return out;
}

}  // namespace

// Constructs tables whose schema is already sorted.
class TableBuilder {
 public:
  static Table make(std::vector<std::string> sorted_schema, std::vector<Value> cells, std::size_t rows) {
    Table t;
    t.rows_ = canonicalize_rows(cells, sorted_schema.size(), rows);
    t.schema_ = std::move(sorted_schema);
    t.cells_ = std::move(cells);
    return t;
  }

  // Rows are known to be sorted and unique already.
  static Table make_canonical(std::vector<std::string> sorted_schema, std::vector<Value> cells, std::size_t rows) {
    Table t;
    t.schema_ = std::move(sorted_schema);
    t.cells_ = std::move(cells);
    t.rows_ = rows;
    return t;
  }
};

// ---------------------------------------------------------------------------
// Relation / Database

Relation::Relation(std::string name, std::size_t arity, std::vector<Value> cells)
    : name_(std::move(name)), arity_(arity), cells_(std::move(cells)) {
  if (arity_ == 0) throw ValidationError("relation '" + name_ + "' must have positive arity");
  if (cells_.size() % arity_ != 0) throw ValidationError("relation '" + name_ + "': ragged tuple data");
  canonicalize_rows(cells_, arity_, cells_.size() / arity_);
}

Relation Relation::from_rows(std::string name, std::size_t arity, const std::vector<std::vector<std::string>>& rows) {
  std::vector<Value> cells;
  cells.reserve(rows.size() * arity);
  for (const auto& r : rows) {
    if (r.size() != arity)
      throw ValidationError("relation '" + name + "': tuple of length " + std::to_string(r.size()) +
                            " for arity " + std::to_string(arity));
    for (const auto& v : r) cells.push_back(Value::of(v));
  }
  return {std::move(name), arity, std::move(cells)};
}

bool Relation::contains(Row row) const {
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    const auto mid = (lo + hi) / 2;
    if (row_less(this->row(mid), row))
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo < size() && row_equal(this->row(lo), row);
}

void Database::add(Relation relation) {
  auto name = relation.name();
  if (!relations_.emplace(name, std::move(relation)).second)
    throw ValidationError("duplicate relation '" + name + "'");
}

const Relation* Database::find(std::string_view name) const {
  auto it = relations_.find(name);
  return it == relations_.end() ? nullptr : &it->second;
}

const Relation& Database::at(std::string_view name) const {
  if (const auto* r = find(name)) return *r;
  throw BindingError("unknown relation '" + std::string(name) + "'");
}

std::size_t Database::max_arity() const {
  std::size_t out = 0;
  for (const auto& [_, r] : relations_) out = std::max(out, r.arity());
  return out;
}

std::size_t Database::max_relation_size() const {
  std::size_t out = 0;
  for (const auto& [_, r] : relations_) out = std::max(out, r.size());
  return out;
}

std::vector<const Relation*> Database::relations() const {
  std::vector<const Relation*> out;
  out.reserve(relations_.size());
  for (const auto& [_, r] : relations_) out.push_back(&r);
  return out;
}

// ---------------------------------------------------------------------------
// Atoms and rules

std::string Atom::to_string() const { return relation + "(" + join_args(args) + ")"; }

std::string Rule::to_string() const {
  std::string out = head.to_string() + " <- ";
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) out += ", ";
    out += body[i].to_string();
  }
  return out + ".";
}

std::vector<std::string> variables_of(std::span<const Atom> atoms) {
  std::set<std::string> vars;
  for (const auto& a : atoms) vars.insert(a.args.begin(), a.args.end());
  return {vars.begin(), vars.end()};
}

std::vector<std::string> variables_of(const Atom& atom) { return variables_of(std::span<const Atom>(&atom, 1)); }

// ---------------------------------------------------------------------------
// Table

Table::Table(std::vector<std::string> schema, std::vector<Value> cells) {
  const auto width = schema.size();
  std::vector<std::size_t> order(width);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return schema[a] < schema[b]; });
  for (std::size_t i = 1; i < width; ++i)
    if (schema[order[i]] == schema[order[i - 1]]) throw SchemaError("duplicate variable '" + schema[order[i]] + "'");
  if (width == 0) {
    if (!cells.empty()) throw SchemaError("cells given for an empty schema");
    return;
  }
  if (cells.size() % width != 0) throw SchemaError("ragged table data");
  const auto rows = cells.size() / width;
  std::vector<std::string> sorted_schema;
  sorted_schema.reserve(width);
  for (auto i : order) sorted_schema.push_back(schema[i]);
  std::vector<Value> permuted(cells.size());
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < width; ++c) permuted[r * width + c] = cells[r * width + order[c]];
  *this = TableBuilder::make(std::move(sorted_schema), std::move(permuted), rows);
}

Table Table::unit() { return TableBuilder::make_canonical({}, {}, 1); }

std::size_t Table::column(std::string_view var) const {
  auto it = std::lower_bound(schema_.begin(), schema_.end(), var);
  if (it == schema_.end() || *it != var) return npos;
  return static_cast<std::size_t>(it - schema_.begin());
}

Table bind(const Atom& atom, const Database& db) {
  const Relation& rel = db.at(atom.relation);
  if (rel.arity() != atom.args.size())
    throw BindingError("atom " + atom.to_string() + " has arity " + std::to_string(atom.args.size()) +
                       " but relation '" + rel.name() + "' has arity " + std::to_string(rel.arity()));

  // first_pos[i]: first argument position carrying the same variable as i.
  std::vector<std::size_t> first_pos(atom.args.size());
  std::vector<std::string> schema;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    auto it = std::find(atom.args.begin(), atom.args.begin() + static_cast<std::ptrdiff_t>(i), atom.args[i]);
    first_pos[i] = static_cast<std::size_t>(it - atom.args.begin());
    if (first_pos[i] == i) {
      schema.push_back(atom.args[i]);
      keep.push_back(i);
    }
  }
  std::vector<Value> cells;
  cells.reserve(rel.size() * keep.size());
  for (std::size_t r = 0; r < rel.size(); ++r) {
    Row row = rel.row(r);
    bool ok = true;
    for (std::size_t i = 0; i < row.size() && ok; ++i) ok = row[i] == row[first_pos[i]];
    if (!ok) continue;
    for (auto i : keep) cells.push_back(row[i]);
  }
  return {std::move(schema), std::move(cells)};
}

Table join(const Table& left, const Table& right) {
  std::vector<std::string> schema;
  std::set_union(left.schema().begin(), left.schema().end(), right.schema().begin(), right.schema().end(),
                 std::back_inserter(schema));
  // For every output column: which side and which column feeds it.
  struct Source {
    bool from_left;
    std::size_t col;
  };
  std::vector<Source> sources;
  sources.reserve(schema.size());
  std::vector<std::size_t> lkey, rkey;
  for (const auto& v : schema) {
    const auto lc = left.column(v), rc = right.column(v);
    if (lc != Table::npos && rc != Table::npos) {
      lkey.push_back(lc);
      rkey.push_back(rc);
    }
    sources.push_back(lc != Table::npos ? Source{true, lc} : Source{false, rc});
  }

  std::vector<Value> cells;
  std::size_t rows = 0;
  auto emit = [&](Row l, Row r) {
    for (const auto& s : sources) cells.push_back(s.from_left ? l[s.col] : r[s.col]);
    ++rows;
  };

  if (lkey.empty()) {
    for (std::size_t i = 0; i < left.size(); ++i)
      for (std::size_t j = 0; j < right.size(); ++j) emit(left.row(i), right.row(j));
  } else {
    const bool build_right = right.size() <= left.size();
    const Table& build = build_right ? right : left;
    const Table& probe = build_right ? left : right;
    const auto& build_key = build_right ? rkey : lkey;
    const auto& probe_key = build_right ? lkey : rkey;
    KeyIndex index(build, build_key);
    for (std::size_t i = 0; i < probe.size(); ++i) {
      Row p = probe.row(i);
      index.for_each_match(p, probe_key, [&](Row b) {
        if (build_right)
          emit(p, b);
        else
          emit(b, p);
        return true;
      });
    }
  }
  return TableBuilder::make(std::move(schema), std::move(cells), rows);
}

Table natural_join(std::span<const Table> tables) {
  if (tables.empty()) return Table::unit();
  std::set<std::string> all_vars;
  for (const auto& t : tables) all_vars.insert(t.schema().begin(), t.schema().end());

  std::vector<bool> used(tables.size(), false);
  auto smallest = [&](bool require_shared, const Table* current) -> std::size_t {
    std::size_t best = Table::npos;
    for (std::size_t i = 0; i < tables.size(); ++i) {
      if (used[i]) continue;
      if (require_shared) {
        bool shares = false;
        for (const auto& v : tables[i].schema()) shares = shares || current->has(v);
        if (!shares) continue;
      }
      if (best == Table::npos || tables[i].size() < tables[best].size()) best = i;
    }
    return best;
  };

  auto first = smallest(false, nullptr);
  used[first] = true;
  Table acc = tables[first];
  for (std::size_t done = 1; done < tables.size(); ++done) {
    if (acc.empty()) break;
    auto next = smallest(true, &acc);
    if (next == Table::npos) next = smallest(false, nullptr);
    used[next] = true;
    acc = join(acc, tables[next]);
  }
  if (acc.empty() && acc.width() != all_vars.size())
    return TableBuilder::make_canonical({all_vars.begin(), all_vars.end()}, {}, 0);
  return acc;
}

Table natural_join(std::span<const Atom> atoms, const Database& db) {
  std::vector<Table> tables;
  tables.reserve(atoms.size());
  for (const auto& a : atoms) tables.push_back(bind(a, db));
  return natural_join(tables);
}

Table project(const Table& table, std::span<const std::string> vars) {
  std::vector<std::string> schema(vars.begin(), vars.end());
  std::sort(schema.begin(), schema.end());
  schema.erase(std::unique(schema.begin(), schema.end()), schema.end());
  std::vector<std::size_t> cols;
  cols.reserve(schema.size());
  for (const auto& v : schema) {
    const auto c = table.column(v);
    if (c == Table::npos) throw SchemaError("projection on unknown variable '" + v + "'");
    cols.push_back(c);
  }
  if (cols.size() == table.width()) return table;
  std::vector<Value> cells;
  cells.reserve(table.size() * cols.size());
  for (std::size_t r = 0; r < table.size(); ++r) {
    Row row = table.row(r);
    for (auto c : cols) cells.push_back(row[c]);
  }
  return TableBuilder::make(std::move(schema), std::move(cells), table.size());
}

Table semijoin(const Table& target, const Table& source) {
  std::vector<std::size_t> tkey, skey;
  for (std::size_t i = 0; i < target.width(); ++i) {
    const auto sc = source.column(target.schema()[i]);
    if (sc != Table::npos) {
      tkey.push_back(i);
      skey.push_back(sc);
    }
  }
  if (tkey.empty()) {
    if (!source.empty()) return target;
    return TableBuilder::make_canonical(target.schema(), {}, 0);
  }
  KeyIndex index(source, skey);
  std::vector<Value> cells;
  std::size_t rows = 0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    Row row = target.row(i);
    if (!index.contains(row, tkey)) continue;
    cells.insert(cells.end(), row.begin(), row.end());
    ++rows;
  }
  return TableBuilder::make_canonical(target.schema(), std::move(cells), rows);
}

// ---------------------------------------------------------------------------
// Indices

Ratio fraction(const Table& joined_r, const Table& joined_s) {
  return {semijoin(joined_r, joined_s).size(), joined_r.size()};
}

Ratio fraction(std::span<const Atom> r, std::span<const Atom> s, const Database& db) {
  return fraction(natural_join(r, db), natural_join(s, db));
}

Indices indices(const Rule& rule, const Database& db) {
  std::vector<Atom> body(rule.body.begin(), rule.body.end());
  std::sort(body.begin(), body.end());
  body.erase(std::unique(body.begin(), body.end()), body.end());

  std::vector<Table> body_tables;
  body_tables.reserve(body.size());
  for (const auto& a : body) body_tables.push_back(bind(a, db));
  const Table jb = natural_join(body_tables);
  const Table jh = bind(rule.head, db);

  Indices out;
  out.cnf = fraction(jb, jh);
  out.cvr = fraction(jh, jb);
  for (const auto& t : body_tables) out.sup = std::max(out.sup, fraction(t, jb));
  return out;
}

}  // namespace metamine
