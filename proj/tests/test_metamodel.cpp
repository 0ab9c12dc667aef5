#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "metamine/error.hpp"
#include "metamine/gadgets.hpp"
#include "metamine/instantiation.hpp"
#include "metamine/metaquery.hpp"

using namespace metamine;

namespace {

LiteralScheme ls(const std::string& symbol, std::vector<std::string> args) {
  return {symbol, std::isupper(static_cast<unsigned char>(symbol[0])) != 0, std::move(args)};
}

// An instantiation is identified by the atoms it assigns to its patterns;
// position maps that produce the same atom are the same instantiation.
std::string atom_key(const LiteralScheme& p, const PatternBinding& b) {
  std::vector<std::string> cols(b.target_arity, "_");
  for (std::size_t i = 0; i < p.arity(); ++i) cols[b.positions[i]] = p.args[i];
  std::string out = p.to_string() + "=" + b.relation + "(";
  for (const auto& c : cols) out += c + ",";
  return out + ")";
}

std::string key_of(const Instantiation& s) {
  std::string out;
  for (const auto& [p, b] : s.bindings()) out += atom_key(p, b) + ";";
  return out;
}

// All maps from k slots into n columns, filtered by instantiation type.
std::vector<std::vector<std::size_t>> maps(std::size_t k, std::size_t n, InstantiationType type) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(k, 0);
  while (true) {
    std::set<std::size_t> distinct(cur.begin(), cur.end());
    bool ok = distinct.size() == k;
    if (type != InstantiationType::type2) ok = ok && k == n;
    if (type == InstantiationType::type0)
      for (std::size_t i = 0; i < k && ok; ++i) ok = cur[i] == i;
    if (ok) out.push_back(cur);
    std::size_t i = 0;
    while (i < k && ++cur[i] == n) cur[i++] = 0;
    if (i == k) break;
  }
  return out;
}

std::set<std::string> brute_instantiations(const Metaquery& mq, const Database& db, InstantiationType type) {
  std::vector<LiteralScheme> patterns;
  for (const auto& p : mq.patterns())
    if (p.predicate_variable) patterns.push_back(p);
  std::vector<std::vector<PatternBinding>> options;
  for (const auto& p : patterns) {
    std::vector<PatternBinding> opts;
    for (const auto* r : db.relations())
      for (auto& m : maps(p.arity(), r->arity(), type)) opts.push_back({r->name(), m, r->arity()});
    options.push_back(opts);
  }
  std::set<std::string> out;
  std::vector<std::size_t> pick(patterns.size(), 0);
  for (const auto& o : options)
    if (o.empty()) return out;
  while (true) {
    std::map<std::string, std::string> pv;
    bool ok = true;
    for (std::size_t i = 0; i < patterns.size() && ok; ++i) {
      auto [it, fresh] = pv.emplace(patterns[i].symbol, options[i][pick[i]].relation);
      ok = fresh || it->second == options[i][pick[i]].relation;
    }
    if (ok) {
      Instantiation s;
      for (std::size_t i = 0; i < patterns.size(); ++i) s.bind(patterns[i], options[i][pick[i]]);
      out.insert(key_of(s));
    }
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == options[i].size()) pick[i++] = 0;
    if (i == pick.size()) break;
  }
  return out;
}

Database random_db(std::mt19937& rng) {
  Database db;
  const int n = 1 + static_cast<int>(rng() % 3);
  for (int r = 0; r < n; ++r) {
    const std::size_t arity = 1 + rng() % 3;
    std::vector<std::vector<std::string>> rows;
    for (int i = 0, m = static_cast<int>(rng() % 4); i < m; ++i) {
      std::vector<std::string> row;
      for (std::size_t c = 0; c < arity; ++c) row.push_back(std::to_string(rng() % 3));
      rows.push_back(row);
    }
    db.add(Relation::from_rows("r" + std::to_string(r), arity, rows));
  }
  return db;
}

Metaquery random_mq(std::mt19937& rng, const Database& db, bool pure) {
  const std::vector<std::string> pvs{"P", "Q"};
  std::map<std::string, std::size_t> arity_of;
  std::vector<LiteralScheme> schemes;
  const int n = 2 + static_cast<int>(rng() % 2);
  for (int i = 0; i < n; ++i) {
    LiteralScheme s;
    if (rng() % 4 == 0) {
      const auto rels = db.relations();
      const auto* r = rels[rng() % rels.size()];
      s = ls(r->name(), {});
      for (std::size_t c = 0; c < r->arity(); ++c) s.args.push_back(std::string(1, static_cast<char>('A' + rng() % 3)));
    } else {
      s = ls(pvs[rng() % pvs.size()], {});
      std::size_t arity = 1 + rng() % 3;
      if (pure) arity = arity_of.emplace(s.symbol, arity).first->second;
      for (std::size_t c = 0; c < arity; ++c) s.args.push_back(std::string(1, static_cast<char>('A' + rng() % 3)));
    }
    schemes.push_back(s);
  }
  return Metaquery(schemes.front(), std::vector<LiteralScheme>(schemes.begin() + 1, schemes.end()));
}

std::set<std::string> rule_set(const Metaquery& mq, const Database& db, InstantiationType type) {
  std::set<std::string> out;
  for (const auto& s : enumerate_instantiations(mq, db, type)) out.insert(apply(s, mq).to_string());
  return out;
}

}  // namespace

TEST(Parse, ChainQuery) {
  auto mq = parse_metaquery("R(X,Z) <- P(X,Y), Q(Y,Z).");
  EXPECT_EQ(mq.head(), ls("R", {"X", "Z"}));
  ASSERT_EQ(mq.body().size(), 2u);
  EXPECT_EQ(mq.body()[1], ls("Q", {"Y", "Z"}));
  EXPECT_EQ(mq.to_string(), "R(X,Z) <- P(X,Y), Q(Y,Z).");
  EXPECT_EQ(mq.predicate_variables(), (std::vector<std::string>{"P", "Q", "R"}));
}

TEST(Parse, RepIsASet) {
  auto mq1 = parse_metaquery("P(X,Y) <- P(Y,Z), Q(Z,W).");
  EXPECT_EQ(mq1.patterns().size(), 3u);
  auto dup = parse_metaquery("E(A,B) <- E(A,B), E(B,C).");
  EXPECT_EQ(dup.patterns().size(), 2u);
}

TEST(Parse, MixedAndAnonymous) {
  auto mq = parse_metaquery("# comment\nN(X) <- N(Y), e(X,Y).");
  EXPECT_EQ(mq.patterns().size(), 2u);
  EXPECT_EQ(mq.literal_schemes().size(), 3u);
  EXPECT_FALSE(mq.body()[1].predicate_variable);
  auto anon = parse_metaquery("X1'(X2,_) <- X1'(X2,_), r'(_,X3).");
  EXPECT_EQ(anon.head().args[1], "_1");
  EXPECT_EQ(anon.body()[0].args[1], "_2");
  EXPECT_EQ(anon.body()[1].args[0], "_3");
  EXPECT_EQ(anon.body()[1].symbol, "r'");
  // Printed names parse back unchanged; fresh names skip explicit ones.
  EXPECT_EQ(parse_metaquery(anon.to_string()), anon);
  auto mixed = parse_metaquery("P(_2,_) <- P(_,X).");
  EXPECT_EQ(mixed.head().args, (std::vector<std::string>{"_2", "_3"}));
  EXPECT_EQ(mixed.body()[0].args[0], "_4");
  EXPECT_THROW(parse_metaquery("P(_2a) <- P(X)."), ParseError);
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_metaquery("R(X) <- ."), ParseError);
  EXPECT_THROW(parse_metaquery("R(X) <- P(X)"), ParseError);
  EXPECT_THROW(parse_metaquery("R() <- P(X)."), ParseError);
  try {
    parse_metaquery("R(X) <-\n  P(X,,Y).");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 7u);
  }
  EXPECT_THROW(parse_rule("P(X) <- q(X)."), ValidationError);
  EXPECT_EQ(parse_rule("usca(X,Z) <- uspt(X,H).").to_string(), "usca(X,Z) <- uspt(X,H).");
}

TEST(Validate, Purity) {
  auto pure = parse_metaquery("R(X,Z) <- P(X,Y), Q(Y,Z).");
  EXPECT_TRUE(validate(pure, InstantiationType::type0).empty());
  auto impure = parse_metaquery("R(X,Z) <- P(X,Y), P(X,Y,Z).");
  EXPECT_FALSE(impure.is_pure());
  auto v = validate(impure, InstantiationType::type1);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].code, "impure");
  EXPECT_TRUE(validate(impure, InstantiationType::type2).empty());
  EXPECT_THROW(enumerate_instantiations(impure, gen_fig1(), InstantiationType::type0), ValidationError);
  EXPECT_THROW(instantiation_type(3), ValidationError);
}

TEST(Enumerate, CarrierDbTypeZeroCount) {
  auto mq = parse_metaquery("R(X,Z) <- P(X,Y), Q(Y,Z).");
  EXPECT_EQ(enumerate_instantiations(mq, gen_fig1(), InstantiationType::type0).size(), 27u);
  Database unary;
  unary.add(Relation::from_rows("u", 1, {{"a"}}));
  EXPECT_TRUE(enumerate_instantiations(mq, unary, InstantiationType::type0).empty());
}

TEST(Enumerate, InjectiveMapsIntoTernary) {
  Relation r = Relation::from_rows("t", 3, {});
  auto c = candidate_bindings(ls("P", {"X", "Y"}), r, InstantiationType::type2);
  EXPECT_EQ(c.size(), 6u);
  EXPECT_EQ(candidate_bindings(ls("P", {"X", "Y", "Z"}), r, InstantiationType::type1).size(), 6u);
  EXPECT_EQ(candidate_bindings(ls("P", {"X", "Y", "Z"}), r, InstantiationType::type0).size(), 1u);
  EXPECT_TRUE(candidate_bindings(ls("P", {"X", "Y"}), r, InstantiationType::type1).empty());
  // Repeated variables collapse maps that yield the same atom.
  EXPECT_EQ(candidate_bindings(ls("P", {"X", "X"}), Relation::from_rows("b", 2, {}), InstantiationType::type1).size(),
            1u);
}

TEST(Apply, KnownInstantiations) {
  auto mq = parse_metaquery("R(X,Z) <- P(X,Y), Q(Y,Z).");
  Instantiation s;
  s.bind(ls("R", {"X", "Z"}), {"UsPT", {0, 1}, 2});
  s.bind(ls("P", {"X", "Y"}), {"UsCa", {0, 1}, 2});
  s.bind(ls("Q", {"Y", "Z"}), {"CaTe", {0, 1}, 2});
  EXPECT_EQ(apply(s, mq).to_string(), "UsPT(X,Z) <- UsCa(X,Y), CaTe(Y,Z).");

  Instantiation swapped;
  swapped.bind(ls("R", {"X", "Z"}), {"UsPT", {0, 1}, 2});
  swapped.bind(ls("P", {"X", "Y"}), {"UsCa", {1, 0}, 2});
  swapped.bind(ls("Q", {"Y", "Z"}), {"CaTe", {0, 1}, 2});
  EXPECT_EQ(apply(swapped, mq).to_string(), "UsPT(X,Z) <- UsCa(Y,X), CaTe(Y,Z).");

  Instantiation padded;
  padded.bind(ls("R", {"X", "Z"}), {"UsPT", {0, 1}, 3});
  padded.bind(ls("P", {"X", "Y"}), {"UsCa", {1, 0}, 2});
  padded.bind(ls("Q", {"Y", "Z"}), {"CaTe", {0, 1}, 2});
  EXPECT_EQ(apply(padded, mq).to_string(), "UsPT(X,Z,#1) <- UsCa(Y,X), CaTe(Y,Z).");

  Instantiation partial;
  partial.bind(ls("P", {"X", "Y"}), {"UsCa", {0, 1}, 2});
  EXPECT_THROW(apply(partial, mq), InstantiationError);
}

TEST(Instantiation, FunctionalRestriction) {
  Instantiation s;
  s.bind(ls("P", {"X", "Y"}), {"p", {0, 1}, 2});
  EXPECT_THROW(s.bind(ls("P", {"Y", "Z"}), {"q", {0, 1}, 2}), InstantiationError);
  EXPECT_EQ(*s.relation_of("P"), "p");
}

TEST(Agree, Conditions) {
  Instantiation a, b, c, d;
  a.bind(ls("P", {"X", "Y"}), {"p", {0, 1}, 2});
  b.bind(ls("P", {"Y", "Z"}), {"p", {0, 1}, 2});
  c.bind(ls("P", {"Y", "Z"}), {"q", {0, 1}, 2});
  d.bind(ls("Q", {"U"}), {"u", {0}, 1});
  EXPECT_TRUE(agree(a, b));
  EXPECT_FALSE(agree(a, c));
  EXPECT_TRUE(agree(a, d));
  EXPECT_EQ(compose(a, d).size(), 2u);
  EXPECT_THROW(compose(a, c), InstantiationError);
  Instantiation e;
  e.bind(ls("P", {"X", "Y"}), {"p", {1, 0}, 2});
  EXPECT_FALSE(agree(a, e));
}

TEST(MetamodelProperties, EnumerationMatchesBruteForce) {
  std::mt19937 rng(31337);
  for (int iter = 0; iter < 300; ++iter) {
    Database db = random_db(rng);
    const auto type = instantiation_type(static_cast<int>(rng() % 3));
    auto mq = random_mq(rng, db, type != InstantiationType::type2);
    std::set<std::string> got;
    std::vector<std::string> order;
    for (const auto& s : enumerate_instantiations(mq, db, type)) {
      EXPECT_TRUE(got.insert(key_of(s)).second) << "duplicate " << s.to_string();
      order.push_back(s.to_string());
      for (const auto& [p, b] : s.bindings()) EXPECT_EQ(*s.relation_of(p.symbol), b.relation);
    }
    EXPECT_EQ(got, brute_instantiations(mq, db, type)) << mq.to_string();
    // Determinism.
    std::vector<std::string> again;
    for (const auto& s : enumerate_instantiations(mq, db, type)) again.push_back(s.to_string());
    EXPECT_EQ(order, again);
  }
}

TEST(MetamodelProperties, TypeNestingAndFreshness) {
  std::mt19937 rng(99);
  for (int iter = 0; iter < 200; ++iter) {
    Database db = random_db(rng);
    auto mq = random_mq(rng, db, true);
    auto r0 = rule_set(mq, db, InstantiationType::type0);
    auto r1 = rule_set(mq, db, InstantiationType::type1);
    auto r2 = rule_set(mq, db, InstantiationType::type2);
    for (const auto& r : r0) EXPECT_TRUE(r1.count(r)) << r;
    for (const auto& r : r1) EXPECT_TRUE(r2.count(r)) << r;
    for (const auto& s : enumerate_instantiations(mq, db, InstantiationType::type2)) {
      const Rule rule = apply(s, mq);
      std::set<Atom> atoms(rule.body.begin(), rule.body.end());
      atoms.insert(rule.head);
      std::map<std::string, int> uses;
      for (const auto& a : atoms)
        for (const auto& v : a.args) ++uses[v];
      for (const auto& [v, n] : uses)
        if (v[0] == '#') EXPECT_EQ(n, 1) << rule.to_string();
    }
  }
}
