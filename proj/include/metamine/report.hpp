#pragma once
// Text and JSON renderings shared by the C API and the command line.

#include <string>

#include "metamine/engine.hpp"
#include "metamine/metaquery.hpp"

namespace metamine {

enum class Format { text, json };

// A mined rule with its per-pattern bindings and indices. In json form a
// single-line object with keys rule, bindings, sup, cvr, cnf, stats; each
// index is {"exact": "n/d", "approx": x}.
std::string render_rule(const MinedRule& rule, const Metaquery& mq, const EngineStats& stats, Format format);

std::string render_stats(const EngineStats& stats, Format format);

// Indices of one concrete rule.
std::string render_indices(const Rule& rule, const Indices& ix, Format format);

// Acyclicity verdicts, hypertree width of the body, the decomposition and,
// at width 1, the full-reducer program.
std::string render_analysis(const Metaquery& mq, Format format);

}  // namespace metamine
