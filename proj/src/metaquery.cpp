#include "metamine/metaquery.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "metamine/error.hpp"

namespace metamine {

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

void push_unique(std::vector<LiteralScheme>& out, const LiteralScheme& s) {
  if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
}

class Parser {
 public:
  // Fresh names for '_' continue after the largest explicit _<n>.
  explicit Parser(std::string_view text) : text_(text) {
    for (std::size_t i = 0; i + 1 < text.size(); ++i) {
      if (text[i] != '_' || (i > 0 && ident_char(text[i - 1]))) continue;
      std::size_t j = i + 1, n = 0;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) n = n * 10 + (text[j++] - '0');
      if (j > i + 1) fresh_ = std::max(fresh_, n);
    }
  }

  std::pair<LiteralScheme, std::vector<LiteralScheme>> parse() {
    LiteralScheme head = atom();
    expect("<-");
    std::vector<LiteralScheme> body;
    body.push_back(atom());
    while (peek() == ',') {
      advance();
      body.push_back(atom());
    }
    expect(".");
    skip();
    if (pos_ < text_.size()) fail("unexpected trailing input");
    return {std::move(head), std::move(body)};
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    // Report the position of the offending character.
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(what, line, column);
  }

  void skip() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  char peek() {
    skip();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void advance() { ++pos_; }

  void expect(std::string_view token) {
    skip();
    if (text_.substr(pos_, token.size()) != token) {
      if (pos_ >= text_.size()) fail("expected '" + std::string(token) + "' but reached end of input");
      fail("expected '" + std::string(token) + "'");
    }
    pos_ += token.size();
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '\''; }

  std::string ident(const char* what) {
    skip();
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) fail(std::string("expected ") + what);
    const auto start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string term() {
    if (peek() == '_') {
      advance();
      const auto start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ < text_.size() && ident_char(text_[pos_])) fail("'_' must stand alone or be followed by digits only");
      if (pos_ > start) return "_" + std::string(text_.substr(start, pos_ - start));
      return "_" + std::to_string(++fresh_);
    }
    return ident("a variable or '_'");
  }

  LiteralScheme atom() {
    LiteralScheme s;
    s.symbol = ident("a predicate symbol");
    s.predicate_variable = std::isupper(static_cast<unsigned char>(s.symbol[0])) != 0;
    expect("(");
    s.args.push_back(term());
    while (peek() == ',') {
      advance();
      s.args.push_back(term());
    }
    expect(")");
    return s;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t fresh_ = 0;
};

}  // namespace

std::string LiteralScheme::to_string() const { return symbol + "(" + join(args, ",") + ")"; }

LiteralScheme scheme_of(const Atom& atom) { return {atom.relation, false, atom.args}; }

Atom atom_of(const LiteralScheme& scheme) {
  if (scheme.predicate_variable) throw InstantiationError("pattern " + scheme.to_string() + " is not concrete");
  return {scheme.symbol, scheme.args};
}

std::vector<std::string> ordinary_variables(const std::vector<LiteralScheme>& schemes) {
  std::set<std::string> vars;
  for (const auto& s : schemes) vars.insert(s.args.begin(), s.args.end());
  return {vars.begin(), vars.end()};
}

std::vector<std::string> ordinary_variables(const LiteralScheme& scheme) {
  std::set<std::string> vars(scheme.args.begin(), scheme.args.end());
  return {vars.begin(), vars.end()};
}

InstantiationType instantiation_type(int value) {
  if (value < 0 || value > 2) throw ValidationError("instantiation type must be 0, 1 or 2, got " + std::to_string(value));
  return static_cast<InstantiationType>(value);
}

Metaquery::Metaquery(LiteralScheme head, std::vector<LiteralScheme> body)
    : head_(std::move(head)), body_(std::move(body)) {
  if (body_.empty()) throw ValidationError("metaquery body must not be empty");
  if (head_.args.empty()) throw ValidationError("literal scheme " + head_.symbol + " has no arguments");
  for (const auto& s : body_)
    if (s.args.empty()) throw ValidationError("literal scheme " + s.symbol + " has no arguments");
  if (head_.predicate_variable) patterns_.push_back(head_);
  for (const auto& s : body_)
    if (s.predicate_variable) push_unique(patterns_, s);
}

std::vector<LiteralScheme> Metaquery::literal_schemes() const {
  std::vector<LiteralScheme> out{head_};
  for (const auto& s : body_) push_unique(out, s);
  return out;
}

std::vector<LiteralScheme> Metaquery::body_set() const {
  std::vector<LiteralScheme> out;
  for (const auto& s : body_) push_unique(out, s);
  return out;
}

std::vector<std::string> Metaquery::predicate_variables() const {
  std::set<std::string> out;
  for (const auto& p : patterns_) out.insert(p.symbol);
  return {out.begin(), out.end()};
}

bool Metaquery::is_pure() const {
  std::map<std::string, std::size_t> arity;
  for (const auto& p : patterns_) {
    auto [it, inserted] = arity.emplace(p.symbol, p.arity());
    if (!inserted && it->second != p.arity()) return false;
  }
  return true;
}

std::string Metaquery::to_string() const {
  std::string out = head_.to_string() + " <- ";
  for (std::size_t i = 0; i < body_.size(); ++i) {
    if (i) out += ", ";
    out += body_[i].to_string();
  }
  return out + ".";
}

Metaquery parse_metaquery(std::string_view text) {
  auto [head, body] = Parser(text).parse();
  return {std::move(head), std::move(body)};
}

Rule parse_rule(std::string_view text) {
  auto [head, body] = Parser(text).parse();
  auto concrete = [](const LiteralScheme& s) {
    if (s.predicate_variable)
      throw ValidationError("rule uses predicate variable '" + s.symbol + "'; relation names start in lowercase");
    return atom_of(s);
  };
  Rule rule{concrete(head), {}};
  for (const auto& s : body) rule.body.push_back(concrete(s));
  return rule;
}

std::vector<Violation> validate(const Metaquery& mq, InstantiationType type) {
  std::vector<Violation> out;
  if (type == InstantiationType::type2) return out;
  std::map<std::string, const LiteralScheme*> first;
  std::set<std::string> reported;
  for (const auto& p : mq.patterns()) {
    auto [it, inserted] = first.emplace(p.symbol, &p);
    if (inserted || it->second->arity() == p.arity() || reported.count(p.symbol)) continue;
    reported.insert(p.symbol);
    out.push_back({"impure",
                   "predicate variable " + p.symbol + " is used with arities " + std::to_string(it->second->arity()) +
                       " and " + std::to_string(p.arity()) + "; type " +
                       std::to_string(static_cast<int>(type)) + " needs a pure metaquery"});
  }
  return out;
}

}  // namespace metamine
