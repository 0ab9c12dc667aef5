// metamine: command-line front end over the C API.
//
// Exit codes: 0 success (mine: at least one rule), 1 mine found no rules,
// 2 usage, input or evaluation error, 3 engine/oracle disagreement.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "metamine/metamine.h"

namespace {

constexpr int exit_found = 0;
constexpr int exit_empty = 1;
constexpr int exit_error = 2;
constexpr int exit_mismatch = 3;

struct Failure {
  int code;
};

struct DbDeleter {
  void operator()(mm_database* p) const { mm_database_free(p); }
};
struct MqDeleter {
  void operator()(mm_metaquery* p) const { mm_metaquery_free(p); }
};
struct ResultDeleter {
  void operator()(mm_result* p) const { mm_result_free(p); }
};
struct StringDeleter {
  void operator()(char* p) const { mm_string_free(p); }
};
using Text = std::unique_ptr<char, StringDeleter>;

int code_for(mm_status s) { return s == MM_ORACLE_MISMATCH ? exit_mismatch : exit_error; }

[[noreturn]] void die(mm_status s) {
  std::cerr << "metamine: " << mm_status_name(s) << ": " << mm_last_error() << "\n";
  throw Failure{code_for(s)};
}

void ok(mm_status s) {
  if (s != MM_OK) die(s);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "metamine: cannot read " << path << "\n";
    throw Failure{exit_error};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

mm_format format_of(const std::string& f) { return f == "json" ? MM_FORMAT_JSON : MM_FORMAT_TEXT; }

std::unique_ptr<mm_database, DbDeleter> load(const std::string& dir) {
  mm_database* db = nullptr;
  ok(mm_database_load(dir.c_str(), &db));
  return std::unique_ptr<mm_database, DbDeleter>(db);
}

struct MineArgs {
  std::string db, query, format = "text", sup = "0", cvr = "0", cnf = "0";
  int type = 0;
  long limit = -1;
  unsigned threads = 1;
  bool oracle = false, fast_path = false, trivial = false;
};

int run_mine(const MineArgs& a) {
  auto db = load(a.db);
  mm_metaquery* raw = nullptr;
  ok(mm_metaquery_parse(slurp(a.query).c_str(), &raw));
  std::unique_ptr<mm_metaquery, MqDeleter> mq(raw);

  mm_mine_options o;
  mm_mine_options_init(&o);
  o.type = a.type;
  o.sup = a.sup.c_str();
  o.cvr = a.cvr.c_str();
  o.cnf = a.cnf.c_str();
  o.threads = a.threads;
  o.zero_threshold_fast_path = a.fast_path;
  o.trivial_decomposition = a.trivial;
  o.oracle = a.oracle;
  mm_result* rr = nullptr;
  const mm_status s = mm_mine(db.get(), mq.get(), &o, &rr);
  if (s != MM_OK && s != MM_ORACLE_MISMATCH) die(s);
  std::unique_ptr<mm_result, ResultDeleter> result(rr);

  const auto fmt = format_of(a.format);
  const std::size_t n = mm_result_count(result.get());
  const std::size_t shown = a.limit < 0 ? n : std::min<std::size_t>(n, static_cast<std::size_t>(a.limit));
  for (std::size_t i = 0; i < shown; ++i) {
    char* line = nullptr;
    ok(mm_result_rule(result.get(), i, fmt, &line));
    std::cout << Text(line).get();
  }
  if (fmt == MM_FORMAT_TEXT) {
    char* stats = nullptr;
    ok(mm_result_stats(result.get(), fmt, &stats));
    std::cout << n << " rule(s)";
    if (shown < n) std::cout << ", " << shown << " shown";
    std::cout << "\n" << Text(stats).get();
  }
  if (s == MM_ORACLE_MISMATCH) die(s);
  return n > 0 ? exit_found : exit_empty;
}

int run_check(const std::string& dir, const std::string& rule_file, bool oracle, const std::string& format) {
  auto db = load(dir);
  char* report = nullptr;
  const mm_status s = mm_check(db.get(), slurp(rule_file).c_str(), oracle, format_of(format), &report);
  if (report) std::cout << Text(report).get();
  if (s != MM_OK) die(s);
  if (oracle && format_of(format) == MM_FORMAT_TEXT) std::cout << "oracle: agrees\n";
  return exit_found;
}

int run_analyze(const std::string& query_file, const std::string& format) {
  char* report = nullptr;
  ok(mm_analyze(slurp(query_file).c_str(), format_of(format), &report));
  std::cout << Text(report).get();
  return exit_found;
}

int run_gadget(const std::string& kind, const std::string& input, const std::string& out, int type) {
  char* hint = nullptr;
  ok(mm_gadget(kind.c_str(), slurp(input).c_str(), type, out.c_str(), &hint));
  std::cout << "wrote " << out << "\n" << Text(hint).get();
  return exit_found;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metaquery mining over relational databases"};
  app.set_version_flag("--version", std::string(mm_version()));
  app.require_subcommand(1);

  MineArgs mine;
  auto* m = app.add_subcommand("mine", "Find every instantiated rule above the thresholds");
  m->add_option("--db", mine.db, "Database directory of <relation>.csv files")->required();
  m->add_option("--query", mine.query, "Metaquery file")->required();
  m->add_option("--type", mine.type, "Instantiation type")->check(CLI::Range(0, 2));
  m->add_option("--sup", mine.sup, "Support threshold, e.g. 0.25 or 1/4");
  m->add_option("--cvr", mine.cvr, "Cover threshold");
  m->add_option("--cnf", mine.cnf, "Confidence threshold");
  m->add_option("--format", mine.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  m->add_option("--limit", mine.limit, "Print at most N rules (the search is not truncated)")
      ->check(CLI::NonNegativeNumber);
  m->add_option("--threads", mine.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  m->add_flag("--oracle", mine.oracle, "Cross-check against the brute-force miner");
  m->add_flag("--fast-path", mine.fast_path, "Decide zero thresholds by satisfiability");
  m->add_flag("--trivial-decomposition", mine.trivial, "Use the single-node decomposition");

  std::string check_db, check_rule, check_format = "text";
  bool check_oracle = false;
  auto* c = app.add_subcommand("check", "Compute the indices of one concrete rule");
  c->add_option("--db", check_db, "Database directory")->required();
  c->add_option("--rule", check_rule, "File holding one rule")->required();
  c->add_flag("--oracle", check_oracle, "Also evaluate by brute force and compare");
  c->add_option("--format", check_format, "Output format")->check(CLI::IsMember({"text", "json"}));

  std::string analyze_query, analyze_format = "text";
  auto* a = app.add_subcommand("analyze", "Acyclicity, hypertree width and full reducer of a metaquery");
  a->add_option("--query", analyze_query, "Metaquery file")->required();
  a->add_option("--format", analyze_format, "Output format")->check(CLI::IsMember({"text", "json"}));

  std::string kind, input, out;
  int gadget_type = 0;
  auto* g = app.add_subcommand("gadget", "Write a reduction instance as a database directory and query");
  g->add_option("kind", kind, "3col, semi3col, ham or csat")
      ->required()
      ->check(CLI::IsMember({"3col", "semi3col", "ham", "csat"}));
  g->add_option("input", input, "Graph or formula file")->required();
  g->add_option("out", out, "Output directory")->required();
  g->add_option("--type", gadget_type, "csat variant: 0, or 1/2")->check(CLI::Range(0, 2));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_error;
  }

  try {
    if (*m) return run_mine(mine);
    if (*c) return run_check(check_db, check_rule, check_oracle, check_format);
    if (*a) return run_analyze(analyze_query, analyze_format);
    return run_gadget(kind, input, out, gadget_type);
  } catch (const Failure& f) {
    return f.code;
  }
}
