#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "metamine/relcore.hpp"

namespace metamine {

// A literal scheme S(X1,...,Xk). The symbol is a predicate variable when it
// starts with an uppercase letter, a relation name otherwise.
struct LiteralScheme {
  std::string symbol;
  bool predicate_variable = false;
  std::vector<std::string> args;

  std::size_t arity() const { return args.size(); }
  std::string to_string() const;
  friend auto operator<=>(const LiteralScheme&, const LiteralScheme&) = default;
};

LiteralScheme scheme_of(const Atom& atom);
// Only valid for concrete schemes.
Atom atom_of(const LiteralScheme& scheme);

// Distinct ordinary variables of the schemes, sorted.
std::vector<std::string> ordinary_variables(const std::vector<LiteralScheme>& schemes);
std::vector<std::string> ordinary_variables(const LiteralScheme& scheme);

enum class InstantiationType : int { type0 = 0, type1 = 1, type2 = 2 };

// Throws ValidationError for anything but 0, 1, 2.
InstantiationType instantiation_type(int value);

class Metaquery {
 public:
  // Throws ValidationError on an empty body.
  Metaquery(LiteralScheme head, std::vector<LiteralScheme> body);

  const LiteralScheme& head() const { return head_; }
  const std::vector<LiteralScheme>& body() const { return body_; }

  // rep(MQ): distinct relation patterns, head first, then body order.
  const std::vector<LiteralScheme>& patterns() const { return patterns_; }
  // ls(MQ): distinct literal schemes, same order convention.
  std::vector<LiteralScheme> literal_schemes() const;
  // Distinct body schemes in order of first occurrence.
  std::vector<LiteralScheme> body_set() const;
  // Sorted.
  std::vector<std::string> predicate_variables() const;

  bool is_pure() const;
  std::string to_string() const;

  friend bool operator==(const Metaquery&, const Metaquery&) = default;

 private:
  LiteralScheme head_;
  std::vector<LiteralScheme> body_;
  std::vector<LiteralScheme> patterns_;
};

// Grammar:
//   metaquery := atom "<-" atom ("," atom)* "."
//   atom      := IDENT "(" term ("," term)* ")"
//   term      := IDENT | "_"
//   IDENT     := [A-Za-z][A-Za-z0-9']*
// "#" starts a comment running to the end of the line. Each "_" becomes a
// fresh variable "_1", "_2", ... Throws ParseError.
Metaquery parse_metaquery(std::string_view text);

// Same grammar, but every symbol must be a relation name.
Rule parse_rule(std::string_view text);

struct Violation {
  std::string code;
  std::string message;
  friend bool operator==(const Violation&, const Violation&) = default;
};

// Empty when the metaquery may be instantiated with the given type.
std::vector<Violation> validate(const Metaquery& mq, InstantiationType type);

}  // namespace metamine
