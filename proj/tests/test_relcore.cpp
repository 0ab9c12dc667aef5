#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "metamine/error.hpp"
#include "metamine/gadgets.hpp"
#include "metamine/relcore.hpp"

using namespace metamine;

namespace {

Table table(std::vector<std::string> schema, const std::vector<std::vector<std::string>>& rows) {
  std::vector<Value> cells;
  for (const auto& r : rows)
    for (const auto& v : r) cells.push_back(Value::of(v));
  return {std::move(schema), std::move(cells)};
}

Atom atom(std::string rel, std::vector<std::string> args) { return {std::move(rel), std::move(args)}; }

Database random_db(std::mt19937& rng, int relations, int max_tuples, int domain) {
  Database db;
  for (int r = 0; r < relations; ++r) {
    const std::size_t arity = 1 + rng() % 3;
    std::vector<std::vector<std::string>> rows;
    const int n = static_cast<int>(rng() % (max_tuples + 1));
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> row;
      for (std::size_t c = 0; c < arity; ++c) row.push_back(std::to_string(rng() % domain));
      rows.push_back(row);
    }
    db.add(Relation::from_rows("r" + std::to_string(r), arity, rows));
  }
  return db;
}

std::vector<Atom> random_atoms(std::mt19937& rng, const Database& db, int count) {
  const std::vector<std::string> vars{"A", "B", "C", "D"};
  auto rels = db.relations();
  std::vector<Atom> out;
  for (int i = 0; i < count; ++i) {
    const auto* r = rels[rng() % rels.size()];
    Atom a{r->name(), {}};
    for (std::size_t c = 0; c < r->arity(); ++c) a.args.push_back(vars[rng() % vars.size()]);
    out.push_back(a);
  }
  return out;
}

}  // namespace

TEST(Value, EqualityIsTokenEquality) {
  EXPECT_EQ(Value::of("1"), Value::of("1"));
  EXPECT_NE(Value::of("1"), Value::of("01"));
  EXPECT_NE(Value::of("1.0"), Value::of("1"));
  EXPECT_EQ(Value::of("John K.").text(), "John K.");
}

TEST(Ratio, LowestTermsAndConventions) {
  EXPECT_EQ(Ratio(10, 14).to_string(), "5/7");
  EXPECT_EQ(Ratio(0, 0), Ratio::zero());
  EXPECT_EQ(Ratio(0, 5).to_string(), "0/1");
  EXPECT_THROW(Ratio(1, 0), ValidationError);
  EXPECT_EQ(Ratio::parse("0.75"), Ratio(3, 4));
  EXPECT_EQ(Ratio::parse("3/4"), Ratio(3, 4));
  EXPECT_EQ(Ratio::parse(".5"), Ratio(1, 2));
  EXPECT_EQ(Ratio::parse("1"), Ratio::one());
  EXPECT_THROW(Ratio::parse("abc"), ValidationError);
  EXPECT_THROW(Ratio::parse("1/0"), ValidationError);
  EXPECT_THROW(Ratio::parse("-1"), ValidationError);
  EXPECT_LT(Ratio(1, 3), Ratio(1, 2));
  EXPECT_GT(Ratio(5, 7), Ratio(1, 2));
  EXPECT_FALSE(Ratio(1, 2) > Ratio::parse("0.5"));
}

TEST(Relation, SetSemantics) {
  auto r = Relation::from_rows("r", 2, {{"a", "b"}, {"a", "b"}, {"b", "c"}});
  EXPECT_EQ(r.size(), 2u);
  std::vector<Value> probe{Value::of("b"), Value::of("c")};
  EXPECT_TRUE(r.contains(probe));
  EXPECT_THROW(Relation::from_rows("r", 2, {{"a"}}), ValidationError);
  EXPECT_THROW(Relation("z", 0, {}), ValidationError);
}

TEST(Database, UniqueNamesAndLookup) {
  Database db = gen_fig1();
  EXPECT_EQ(db.size(), 3u);
  EXPECT_THROW(db.add(Relation::from_rows("UsCa", 1, {})), ValidationError);
  EXPECT_THROW(db.at("nope"), BindingError);
  EXPECT_EQ(db.max_relation_size(), 6u);
  EXPECT_EQ(db.max_arity(), 2u);
}

TEST(NaturalJoin, ChainWithoutMatchIsEmpty) {
  Database db;
  db.add(Relation::from_rows("e", 2, {{"1", "2"}}));
  std::vector<Atom> atoms{atom("e", {"X", "Y"}), atom("e", {"Y", "Z"})};
  auto j = natural_join(atoms, db);
  EXPECT_TRUE(j.empty());
  EXPECT_EQ(j.schema(), (std::vector<std::string>{"X", "Y", "Z"}));
}

TEST(NaturalJoin, CarrierBody) {
  Database db = gen_fig1();
  std::vector<Atom> atoms{atom("UsCa", {"X", "Y"}), atom("CaTe", {"Y", "Z"})};
  auto j = natural_join(atoms, db);
  EXPECT_EQ(j.size(), 7u);
  EXPECT_EQ(j.schema(), (std::vector<std::string>{"X", "Y", "Z"}));
}

TEST(Bind, RepeatedVariableSelects) {
  Database db;
  db.add(Relation::from_rows("p", 2, {{"a", "a"}, {"a", "b"}}));
  auto t = bind(atom("p", {"X", "X"}), db);
  EXPECT_EQ(t, table({"X"}, {{"a"}}));
  EXPECT_THROW(bind(atom("p", {"X"}), db), BindingError);
  EXPECT_THROW(bind(atom("q", {"X"}), db), BindingError);
}

TEST(Project, DuplicateEliminationAndIdentity) {
  auto r = table({"X", "Y"}, {{"a", "b"}, {"a", "c"}});
  std::vector<std::string> x{"X"};
  EXPECT_EQ(project(r, x), table({"X"}, {{"a"}}));
  EXPECT_EQ(project(r, r.schema()), r);
  std::vector<std::string> bad{"Q"};
  EXPECT_THROW(project(r, bad), SchemaError);
}

TEST(Project, CarrierBodyOntoXZ) {
  Database db = gen_fig1();
  std::vector<Atom> atoms{atom("UsCa", {"X", "Y"}), atom("CaTe", {"Y", "Z"})};
  std::vector<std::string> xz{"X", "Z"};
  // John K. reaches ETACS, GSM 900, GSM 1800; Anastasia A. reaches GSM 900, GSM 1800.
  EXPECT_EQ(project(natural_join(atoms, db), xz).size(), 5u);
}

TEST(Semijoin, Basics) {
  auto q = table({"B", "C"}, {{"1", "0"}, {"0", "1"}});
  auto r = table({"C", "D"}, {{"0", "5"}});
  EXPECT_EQ(semijoin(q, r), table({"B", "C"}, {{"1", "0"}}));
  EXPECT_EQ(semijoin(q, q), q);
  // Disjoint schemas: kept whole against a non-empty source, emptied otherwise.
  auto other = table({"Z"}, {{"z"}});
  EXPECT_EQ(semijoin(q, other), q);
  EXPECT_TRUE(semijoin(q, table({"Z"}, {})).empty());
}

TEST(Fraction, Conventions) {
  Database db = gen_fig1();
  std::vector<Atom> body{atom("UsCa", {"X", "Y"}), atom("CaTe", {"Y", "Z"})};
  std::vector<Atom> head{atom("UsPT", {"X", "Z"})};
  EXPECT_EQ(fraction(body, body, db), Ratio::one());
  EXPECT_EQ(fraction(body, head, db), Ratio(5, 7));
  db.add(Relation::from_rows("empty", 2, {}));
  std::vector<Atom> empty{atom("empty", {"X", "Y"})};
  EXPECT_EQ(fraction(empty, body, db), Ratio::zero());
  EXPECT_EQ(fraction(body, empty, db), Ratio::zero());
}

TEST(Indices, CarrierDbCanonicalRule) {
  Database db = gen_fig1();
  Rule r{atom("UsPT", {"X", "Z"}), {atom("UsCa", {"X", "Y"}), atom("CaTe", {"Y", "Z"})}};
  auto ix = indices(r, db);
  EXPECT_EQ(ix.sup, Ratio::one());
  EXPECT_EQ(ix.cvr, Ratio::one());
  EXPECT_EQ(ix.cnf, Ratio(5, 7));
}

TEST(Indices, CoverExample) {
  Database db = gen_fig1();
  Rule r{atom("UsCa", {"X", "Z"}), {atom("UsPT", {"X", "H"})}};
  EXPECT_EQ(indices(r, db).cvr, Ratio::one());
}

TEST(Indices, EmptyBodyRelationGivesZeros) {
  Database db = gen_fig1();
  db.add(Relation::from_rows("none", 2, {}));
  Rule r{atom("UsPT", {"X", "Z"}), {atom("none", {"X", "Z"}), atom("UsCa", {"X", "Y"})}};
  EXPECT_EQ(indices(r, db), (Indices{Ratio::zero(), Ratio::zero(), Ratio::zero()}));
  Rule missing{atom("UsPT", {"X", "Z"}), {atom("nope", {"X"})}};
  EXPECT_THROW(indices(missing, db), BindingError);
}

TEST(RelcoreProperties, RandomizedInvariants) {
  std::mt19937 rng(20240611);
  for (int iter = 0; iter < 300; ++iter) {
    Database db = random_db(rng, 3, 12, 4);
    auto atoms = random_atoms(rng, db, 1 + static_cast<int>(rng() % 3));
    Table j = natural_join(atoms, db);

    // Order insensitivity.
    auto shuffled = atoms;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(natural_join(shuffled, db), j);

    // Indices lie in [0,1]; support route through projection agrees.
    Rule rule{atoms.front(), std::vector<Atom>(atoms.begin() + (atoms.size() > 1 ? 1 : 0), atoms.end())};
    auto ix = indices(rule, db);
    for (auto v : {ix.sup, ix.cvr, ix.cnf}) EXPECT_LE(v, Ratio::one());
    Table jb = natural_join(rule.body, db);
    for (const auto& a : rule.body) {
      std::vector<Atom> single{a};
      Table ja = bind(a, db);
      auto vars = variables_of(a);
      EXPECT_EQ(fraction(single, rule.body, db), Ratio(project(jb, vars).size(), ja.size()));
    }

    // Semijoin containment and idempotence.
    Table t = bind(atoms.front(), db);
    Table s = bind(atoms.back(), db);
    Table ts = semijoin(t, s);
    EXPECT_LE(ts.size(), t.size());
    EXPECT_EQ(semijoin(ts, s), ts);
    EXPECT_EQ(join(ts, t), ts);

    // Projection collapse.
    if (j.width() >= 2) {
      std::vector<std::string> v(j.schema().begin(), j.schema().begin() + 2);
      std::vector<std::string> w(j.schema().begin(), j.schema().begin() + 1);
      EXPECT_EQ(project(project(j, v), w), project(j, w));
    }

    // fraction is 0 when the combined join is empty.
    std::vector<Atom> r1{atoms.front()}, s1{atoms.back()};
    if (natural_join(atoms, db).empty() && atoms.size() == 2) EXPECT_EQ(fraction(r1, s1, db), Ratio::zero());
  }
}
