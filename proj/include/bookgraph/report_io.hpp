#pragma once

// JSON / CSV / text renderings of reports. Field names are part of the tool's
// interface; see docs/FORMATS.md. Keys are emitted sorted, so identical
// inputs produce identical bytes.

#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bookgraph/analyze.hpp"
#include "bookgraph/verify.hpp"

namespace bookgraph {

using nlohmann::json;

inline json edge_to_json(const EdgeRef& e) {
  return json{{"pair", std::string(pair_name(e.pair))}, {"i", e.i}, {"j", e.j}};
}

inline json params_to_json(const ConstructionParams& p, bool symmetric) {
  return json{{"r", p.r},
              {"d", p.d},
              {"mu6", p.mu6},
              {"ab_window", {p.ab_lo, p.ab_hi}},
              {"c_window", {p.c_lo, p.c_hi}},
              {"coupled", p.coupled},
              {"symmetric", symmetric}};
}

inline json verdicts_to_json(const std::vector<Verdict>& vs) {
  json arr = json::array();
  for (const Verdict& v : vs)
    arr.push_back(json{{"name", v.name},
                       {"pass", v.pass},
                       {"actual", v.actual},
                       {"bound", v.bound},
                       {"log_space", v.log_space},
                       {"note", v.note}});
  return arr;
}

inline json report_to_json(const BookReport& rep) {
  json hist = json::object();
  for (const auto& [count, edges] : rep.histogram) hist[std::to_string(count)] = edges;
  json j{{"booksize", rep.booksize},
         {"min_count", rep.min_count},
         {"uncovered", rep.uncovered},
         {"density_ratio", rep.density_ratio},
         {"histogram", hist},
         {"n_vertices", rep.n_vertices},
         {"edge_counts",
          {{"AB", rep.per_pair_edges[0]},
           {"BC", rep.per_pair_edges[1]},
           {"AC", rep.per_pair_edges[2]},
           {"total", rep.total_edges}}}};
  if (rep.booksize_edge) j["booksize_edge"] = edge_to_json(*rep.booksize_edge);
  return j;
}

// The analyze subcommand's document.
inline json report_document(const BookReport& rep, const std::vector<Verdict>& verdicts,
                            const json& params_or_null, u64 seed,
                            const std::optional<std::string>& generated_at) {
  json doc{{"schema", "bookgraph.report.v1"},
           {"tool_version", std::string(kToolVersion)},
           {"seed", seed},
           {"params", params_or_null},
           {"report", report_to_json(rep)},
           {"verdicts", verdicts_to_json(verdicts)}};
  if (generated_at) doc["generated_at"] = *generated_at;
  return doc;
}

// The construct subcommand's metadata document. Thread counts are execution
// detail, not configuration; they stay out so identical configs give
// identical bytes.
inline json pipeline_document(const PipelineResult& res, const BookReport& rep,
                              const std::vector<Verdict>& verdicts, u64 seed,
                              const std::optional<std::string>& generated_at) {
  json doc{{"schema", "bookgraph.pipeline.v1"},
           {"tool_version", std::string(kToolVersion)},
           {"seed", seed},
           {"params", params_to_json(res.params, res.symmetric)},
           {"part_sizes",
            {res.graph.part_size(Part::A), res.graph.part_size(Part::B),
             res.graph.part_size(Part::C)}},
           {"n", res.n},
           {"N", res.N},
           {"ab_edges_pre", res.ab_edges_pre},
           {"pruned", res.pruned},
           {"pruned_edges",
            {{"AB", res.pruned_edges[0]}, {"BC", res.pruned_edges[1]}, {"AC", res.pruned_edges[2]}}},
           {"report", report_to_json(rep)},
           {"verdicts", verdicts_to_json(verdicts)}};
  if (res.sparsify) {
    doc["sparsify"] = json{
        {"mode", res.sparsify->mode == SparsifySpec::Mode::random ? "random" : "greedy"},
        {"target_size", res.sparsify->target_size},
        {"seed", res.sparsify->seed}};
  } else {
    doc["sparsify"] = nullptr;
  }
  doc["blowup"] = res.blowup ? json{{"multiplicity", res.blowup->multiplicity}} : json(nullptr);
  if (generated_at) doc["generated_at"] = *generated_at;
  return doc;
}

inline std::string histogram_csv(const BookReport& rep) {
  std::ostringstream os;
  os << "triangles,edges\n";
  for (const auto& [count, edges] : rep.histogram) os << count << "," << edges << "\n";
  return os.str();
}

inline std::string report_text(const BookReport& rep, const std::vector<Verdict>& verdicts) {
  std::ostringstream os;
  os << "vertices        " << rep.n_vertices << "\n"
     << "edges           AB " << rep.per_pair_edges[0] << ", BC " << rep.per_pair_edges[1]
     << ", AC " << rep.per_pair_edges[2] << ", total " << rep.total_edges << "\n"
     << "booksize        " << rep.booksize;
  if (rep.booksize_edge)
    os << "  (" << pair_name(rep.booksize_edge->pair) << " " << rep.booksize_edge->i << " "
       << rep.booksize_edge->j << ")";
  os << "\n"
     << "min count       " << rep.min_count << "\n"
     << "uncovered       " << rep.uncovered << "\n"
     << "density ratio   " << std::setprecision(6) << rep.density_ratio << "\n";
  for (const Verdict& v : verdicts) {
    os << "verdict " << (v.pass ? "[pass] " : "[fail] ") << v.name << ": actual "
       << std::setprecision(6) << v.actual << " vs bound " << v.bound
       << (v.log_space ? " (log space)" : "") << " -- " << v.note << "\n";
  }
  return os.str();
}

}  // namespace bookgraph
