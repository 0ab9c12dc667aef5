#include "metamine/metamine.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <optional>
#include <stdexcept>
#include <string>

#include "metamine/engine.hpp"
#include "metamine/error.hpp"
#include "metamine/gadgets.hpp"
#include "metamine/io.hpp"
#include "metamine/oracle.hpp"
#include "metamine/report.hpp"

struct mm_database {
  metamine::Database db;
};

struct mm_metaquery {
  metamine::Metaquery mq;
};

struct mm_result {
  metamine::Metaquery mq;
  metamine::MiningResult result;
};

namespace {

using namespace metamine;

thread_local std::string last_error;

mm_status fail(mm_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs body, translating exceptions into status codes.
template <typename F>
mm_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const ParseError& e) {
    return fail(MM_PARSE_ERROR, e.what());
  } catch (const ValidationError& e) {
    return fail(MM_VALIDATION_ERROR, e.what());
  } catch (const BindingError& e) {
    return fail(MM_BINDING_ERROR, e.what());
  } catch (const IoError& e) {
    return fail(MM_IO_ERROR, e.what());
  } catch (const OracleRefused& e) {
    return fail(MM_ORACLE_REFUSED, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(MM_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MM_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(MM_INTERNAL_ERROR, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Format format_of(mm_format f) {
  if (f == MM_FORMAT_TEXT) return Format::text;
  if (f == MM_FORMAT_JSON) return Format::json;
  throw std::invalid_argument("unknown format");
}

InstantiationType type_of(int t) {
  if (t < 0 || t > 2) throw ValidationError("instantiation type must be 0, 1 or 2");
  return instantiation_type(t);
}

Ratio threshold_of(const char* text, const char* which) {
  if (!text) return Ratio::zero();
  try {
    return Ratio::parse(text);
  } catch (const Error& e) {
    throw ValidationError(std::string("bad ") + which + " threshold '" + text + "': " + e.what());
  }
}

bool same_rules(const std::vector<MinedRule>& a, const std::vector<MinedRule>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].sigma != b[i].sigma || a[i].indices != b[i].indices) return false;
  return true;
}

std::string expected_line(bool nonempty) { return std::string("expected: ") + (nonempty ? "NON-EMPTY" : "EMPTY") + "\n"; }

// Inputs up to these sizes get a brute-force verdict in the gadget hint.
constexpr std::size_t hint_max_vertices = 9;
constexpr std::size_t hint_max_variables = 16;

}  // namespace

extern "C" {

const char* mm_version(void) { return "1.0.0"; }

const char* mm_last_error(void) { return last_error.c_str(); }

const char* mm_status_name(mm_status status) {
  switch (status) {
    case MM_OK: return "ok";
    case MM_INVALID_ARGUMENT: return "invalid argument";
    case MM_PARSE_ERROR: return "parse error";
    case MM_VALIDATION_ERROR: return "validation error";
    case MM_BINDING_ERROR: return "binding error";
    case MM_IO_ERROR: return "i/o error";
    case MM_ORACLE_REFUSED: return "oracle refused";
    case MM_ORACLE_MISMATCH: return "oracle mismatch";
    case MM_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

void mm_string_free(char* s) { std::free(s); }

mm_status mm_database_load(const char* dir, mm_database** out) {
  if (!dir || !out) return fail(MM_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new mm_database{load_database(dir)};
    return MM_OK;
  });
}

mm_status mm_database_save(const mm_database* db, const char* dir) {
  if (!db || !dir) return fail(MM_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    save_database(db->db, dir);
    return MM_OK;
  });
}

mm_status mm_database_example(int which, mm_database** out) {
  if (!out) return fail(MM_INVALID_ARGUMENT, "null argument");
  if (which != 1 && which != 2) return fail(MM_INVALID_ARGUMENT, "which must be 1 or 2");
  return guarded([&] {
    *out = new mm_database{which == 1 ? gen_fig1() : gen_fig2()};
    return MM_OK;
  });
}

size_t mm_database_relation_count(const mm_database* db) { return db ? db->db.size() : 0; }

mm_status mm_database_relation_shape(const mm_database* db, const char* name, size_t* arity, size_t* rows) {
  if (!db || !name) return fail(MM_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto& r = db->db.at(name);
    if (arity) *arity = r.arity();
    if (rows) *rows = r.size();
    return MM_OK;
  });
}

void mm_database_free(mm_database* db) { delete db; }

mm_status mm_metaquery_parse(const char* text, mm_metaquery** out) {
  if (!text || !out) return fail(MM_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new mm_metaquery{parse_metaquery(text)};
    return MM_OK;
  });
}

mm_status mm_metaquery_text(const mm_metaquery* mq, char** out) {
  if (!mq || !out) return fail(MM_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_string(mq->mq.to_string());
    return MM_OK;
  });
}

void mm_metaquery_free(mm_metaquery* mq) { delete mq; }

void mm_mine_options_init(mm_mine_options* options) {
  if (options) *options = mm_mine_options{0, nullptr, nullptr, nullptr, 1, 0, 0, 0};
}

mm_status mm_mine(const mm_database* db, const mm_metaquery* mq, const mm_mine_options* options, mm_result** out) {
  if (!db || !mq || !out) return fail(MM_INVALID_ARGUMENT, "null argument");
  mm_mine_options defaults;
  mm_mine_options_init(&defaults);
  const mm_mine_options& o = options ? *options : defaults;
  return guarded([&] {
    const auto type = type_of(o.type);
    const Thresholds th{threshold_of(o.sup, "sup"), threshold_of(o.cvr, "cvr"), threshold_of(o.cnf, "cnf")};
    EngineOptions eo;
    eo.threads = o.threads == 0 ? 1 : o.threads;
    eo.zero_threshold_fast_path = o.zero_threshold_fast_path != 0;
    eo.trivial_decomposition = o.trivial_decomposition != 0;
    auto result = std::make_unique<mm_result>(mm_result{mq->mq, find_rules(db->db, mq->mq, th, type, eo)});
    if (o.oracle && !same_rules(result->result.rules, brute_force_mine(db->db, mq->mq, th, type))) {
      *out = result.release();
      return fail(MM_ORACLE_MISMATCH, "engine and brute-force oracle disagree");
    }
    *out = result.release();
    return MM_OK;
  });
}

size_t mm_result_count(const mm_result* result) { return result ? result->result.rules.size() : 0; }

mm_status mm_result_rule(const mm_result* result, size_t i, mm_format format, char** out) {
  if (!result || !out) return fail(MM_INVALID_ARGUMENT, "null argument");
  if (i >= result->result.rules.size()) return fail(MM_INVALID_ARGUMENT, "rule index out of range");
  return guarded([&] {
    *out = copy_string(render_rule(result->result.rules[i], result->mq, result->result.stats, format_of(format)));
    return MM_OK;
  });
}

mm_status mm_result_index(const mm_result* result, size_t i, mm_index which, uint64_t* numerator,
                          uint64_t* denominator) {
  if (!result || !numerator || !denominator) return fail(MM_INVALID_ARGUMENT, "null argument");
  if (i >= result->result.rules.size()) return fail(MM_INVALID_ARGUMENT, "rule index out of range");
  const auto& ix = result->result.rules[i].indices;
  const Ratio* r = nullptr;
  switch (which) {
    case MM_INDEX_SUP: r = &ix.sup; break;
    case MM_INDEX_CVR: r = &ix.cvr; break;
    case MM_INDEX_CNF: r = &ix.cnf; break;
  }
  if (!r) return fail(MM_INVALID_ARGUMENT, "unknown index");
  *numerator = r->numerator();
  *denominator = r->denominator();
  return MM_OK;
}

mm_status mm_result_stats(const mm_result* result, mm_format format, char** out) {
  if (!result || !out) return fail(MM_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_string(render_stats(result->result.stats, format_of(format)));
    return MM_OK;
  });
}

void mm_result_free(mm_result* result) { delete result; }

mm_status mm_check(const mm_database* db, const char* rule_text, int oracle, mm_format format, char** out) {
  if (!db || !rule_text || !out) return fail(MM_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const Rule rule = parse_rule(rule_text);
    const Indices ix = indices(rule, db->db);
    std::string report = render_indices(rule, ix, format_of(format));
    if (oracle) {
      const Indices ref = brute_force_indices(rule, db->db);
      if (ref != ix) {
        *out = copy_string(report);
        return fail(MM_ORACLE_MISMATCH, "oracle computed sup " + ref.sup.to_string() + ", cvr " + ref.cvr.to_string() +
                                            ", cnf " + ref.cnf.to_string());
      }
    }
    *out = copy_string(report);
    return MM_OK;
  });
}

mm_status mm_analyze(const char* metaquery, mm_format format, char** out) {
  if (!metaquery || !out) return fail(MM_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_string(render_analysis(parse_metaquery(metaquery), format_of(format)));
    return MM_OK;
  });
}

mm_status mm_gadget(const char* kind, const char* input, int type, const char* out_dir, char** hint) {
  if (!kind || !input || !out_dir || !hint) return fail(MM_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const std::string k = kind;
    std::optional<Gadget> gadget;
    int run_type = 0;
    std::string expected;
    if (k == "3col" || k == "semi3col" || k == "ham") {
      const Graph g = parse_graph(input);
      const bool small = g.vertices.size() <= hint_max_vertices;
      if (k == "ham") {
        gadget = gen_hamiltonian(g);
        run_type = 1;
        if (small) expected = expected_line(has_hamiltonian_path(g));
      } else {
        gadget = k == "3col" ? gen_3col(g) : gen_semiacyclic_3col(g);
        if (small) expected = expected_line(is_three_colorable(g));
      }
    } else if (k == "csat") {
      const CnfFormula f = parse_formula(input);
      run_type = static_cast<int>(type_of(type));
      gadget = gen_csat(f, type_of(type));
      if (f.pi.size() + f.chi.size() <= hint_max_variables) expected = expected_line(csat_holds(f));
    } else {
      return fail(MM_INVALID_ARGUMENT, "unknown gadget kind '" + k + "' (expected 3col, semi3col, ham or csat)");
    }
    const std::filesystem::path dir(out_dir);
    save_database(gadget->db, dir);
    write_file(dir / "query.mq", gadget->mq.to_string() + "\n");
    std::string text = "metaquery: " + gadget->mq.to_string() + "\n";
    text += "type: " + std::to_string(run_type) + "\n";
    text += "thresholds: sup 0/1 cvr 0/1 cnf " + gadget->threshold.to_string() + "\n";
    text += expected;
    *hint = copy_string(text);
    return MM_OK;
  });
}

}  // extern "C"
