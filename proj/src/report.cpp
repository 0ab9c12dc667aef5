#include "metamine/report.hpp"

#include <cstdio>

#include "json.hpp"
#include "metamine/structure.hpp"

namespace metamine {

namespace {

using json = nlohmann::ordered_json;

json ratio_json(const Ratio& r) { return {{"exact", r.to_string()}, {"approx", r.approx()}}; }

std::string ratio_text(const Ratio& r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", r.approx());
  return r.to_string() + " (" + buf + ")";
}

json stats_json(const EngineStats& s) {
  return {{"n", s.n},
          {"m", s.m},
          {"a", s.a},
          {"b", s.b},
          {"c", s.c},
          {"d", s.d},
          {"decomposition_nodes", s.decomposition_nodes},
          {"decomposition_expansions", s.decomposition_expansions},
          {"budget_exhausted", s.budget_exhausted},
          {"partial_bodies", s.partial_bodies},
          {"pruned", s.pruned},
          {"bodies", s.bodies},
          {"support_rejected", s.support_rejected},
          {"heads_tested", s.heads_tested},
          {"rules", s.rules}};
}

std::string indices_text(const Indices& ix) {
  return "sup " + ratio_text(ix.sup) + "  cvr " + ratio_text(ix.cvr) + "  cnf " + ratio_text(ix.cnf);
}

std::string indent(const std::string& block) {
  std::string out;
  for (std::size_t pos = 0; pos < block.size();) {
    auto nl = block.find('\n', pos);
    if (nl == std::string::npos) nl = block.size();
    out += "  " + block.substr(pos, nl - pos) + "\n";
    pos = nl + 1;
  }
  return out;
}

}  // namespace

std::string render_rule(const MinedRule& rule, const Metaquery& mq, const EngineStats& stats, Format format) {
  if (format == Format::text)
    return rule.rule.to_string() + "\n  " + indices_text(rule.indices) + "\n  " + rule.sigma.to_string() + "\n";

  json bindings = json::array();
  for (const auto& p : mq.patterns()) {
    const auto* b = rule.sigma.find(p);
    if (!b) continue;
    bindings.push_back({{"pattern", p.to_string()},
                        {"relation", b->relation},
                        {"columns", b->positions},
                        {"padding", b->padding_columns()}});
  }
  json out{{"rule", rule.rule.to_string()},
           {"bindings", bindings},
           {"sup", ratio_json(rule.indices.sup)},
           {"cvr", ratio_json(rule.indices.cvr)},
           {"cnf", ratio_json(rule.indices.cnf)},
           {"stats", stats_json(stats)}};
  return out.dump() + "\n";
}

std::string render_stats(const EngineStats& s, Format format) {
  if (format == Format::json) return stats_json(s).dump() + "\n";
  std::string out = "stats:";
  const json fields = stats_json(s);
  for (auto it = fields.begin(); it != fields.end(); ++it) out += " " + it.key() + "=" + it.value().dump();
  return out + "\n";
}

std::string render_indices(const Rule& rule, const Indices& ix, Format format) {
  if (format == Format::text) return rule.to_string() + "\n  " + indices_text(ix) + "\n";
  json out{{"rule", rule.to_string()}, {"sup", ratio_json(ix.sup)}, {"cvr", ratio_json(ix.cvr)}, {"cnf", ratio_json(ix.cnf)}};
  return out.dump() + "\n";
}

std::string render_analysis(const Metaquery& mq, Format format) {
  const bool acyclic = is_acyclic(mq);
  const bool semi = is_semi_acyclic(mq);
  const auto hd = hypertree_decompose(mq.body_set());
  const auto width = hd.width();
  std::string program;
  if (width == 1)
    if (auto tree = build_join_tree(mq.body_set())) program = render_program(*tree, full_reducer(*tree));

  if (format == Format::json) {
    json out{{"metaquery", mq.to_string()},
             {"acyclic", acyclic},
             {"semi_acyclic", semi},
             {"hypertree_width", width},
             {"decomposition", render_decomposition(hd)},
             {"full_reducer", width == 1 ? json(program) : json(nullptr)}};
    return out.dump() + "\n";
  }
  std::string out = "metaquery: " + mq.to_string() + "\n";
  out += std::string("acyclic: ") + (acyclic ? "yes" : "no") + "\n";
  out += std::string("semi-acyclic: ") + (semi ? "yes" : "no") + "\n";
  out += "hypertree width: " + std::to_string(width) + "\n";
  out += "decomposition:\n";
  out += indent(render_decomposition(hd));
  if (width == 1) out += "full reducer:\n" + indent(program);
  return out;
}

}  // namespace metamine
