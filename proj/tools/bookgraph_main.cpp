// Command-line surface: construct | analyze | verify | sweep | export.
// Exit codes: 0 success, 1 assertion/parse failure, 2 usage, 3 resource cap.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bookgraph/analyze.hpp"
#include "bookgraph/construct.hpp"
#include "bookgraph/report_io.hpp"
#include "bookgraph/serialize.hpp"
#include "bookgraph/verify.hpp"

namespace bg = bookgraph;
using bg::i64;
using bg::u64;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssert = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct CommonOpts {
  i64 r = 2, d = 2;
  bool symmetric = false;
  std::string sparsify;  // "", "none", "random[:SIZE]", "greedy:SIZE"
  u64 seed = 7;
  bool prune = false;
  i64 blowup = 1;
  int threads = 1;
  i64 max_part_size = 4'194'304;
  bool no_timestamp = false;
  std::string config_path;
};

bg::SparsifySpec parse_sparsify(const std::string& s, u64 seed) {
  bg::SparsifySpec spec;
  spec.seed = seed;
  std::string mode = s, size;
  if (auto colon = s.find(':'); colon != std::string::npos) {
    mode = s.substr(0, colon);
    size = s.substr(colon + 1);
  }
  if (mode == "random")
    spec.mode = bg::SparsifySpec::Mode::random;
  else if (mode == "greedy")
    spec.mode = bg::SparsifySpec::Mode::greedy;
  else
    throw CLI::ValidationError("--sparsify", "mode must be random or greedy, got '" + mode + "'");
  if (!size.empty()) {
    try {
      spec.target_size = std::stoll(size);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--sparsify", "bad size '" + size + "'");
    }
    if (spec.target_size < 1) throw CLI::ValidationError("--sparsify", "size must be >= 1");
  }
  return spec;
}

// Plain key=value overlay; command-line flags take precedence. Keys: r, d,
// symmetric, sparsify.mode, sparsify.size, sparsify.seed, blowup.m, caps,
// prune, threads, seed.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw CLI::ValidationError("--config", "cannot open '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  i64 lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw bg::parse_error("expected key=value in config", lineno);
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t");
      auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

void apply_config(const std::map<std::string, std::string>& kv, CLI::App* cmd, CommonOpts& o) {
  auto unset = [&](const std::string& flag) {
    const CLI::Option* opt = cmd->get_option_no_throw(flag);
    return opt == nullptr || opt->count() == 0;
  };
  auto get = [&](const char* key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  auto truthy = [](const std::string& v) { return v == "1" || v == "true" || v == "yes"; };
  if (auto v = get("r"); v && unset("--r")) o.r = std::stoll(*v);
  if (auto v = get("d"); v && unset("--d")) o.d = std::stoll(*v);
  if (auto v = get("symmetric"); v && unset("--symmetric")) o.symmetric = truthy(*v);
  if (auto v = get("prune"); v && unset("--prune")) o.prune = truthy(*v);
  if (auto v = get("seed"); v && unset("--seed")) o.seed = std::stoull(*v);
  if (auto v = get("threads"); v && unset("--threads")) o.threads = std::stoi(*v);
  if (auto v = get("caps"); v && unset("--max-part-size")) o.max_part_size = std::stoll(*v);
  if (auto v = get("blowup.m"); v && unset("--blowup")) o.blowup = std::stoll(*v);
  if (unset("--sparsify")) {
    auto mode = get("sparsify.mode");
    if (mode && *mode != "none") {
      std::string s = *mode;
      if (auto size = get("sparsify.size")) s += ":" + *size;
      o.sparsify = s;
    }
  }
  // sparsify.seed is consumed by pipeline_options directly
}

bg::PipelineOptions pipeline_options(const CommonOpts& o,
                                     const std::map<std::string, std::string>& cfg) {
  bg::PipelineOptions po;
  po.symmetric = o.symmetric;
  po.prune = o.prune;
  po.threads = o.threads;
  po.caps.max_part_size = o.max_part_size;
  if (!o.sparsify.empty() && o.sparsify != "none") {
    bg::SparsifySpec spec = parse_sparsify(o.sparsify, o.seed);
    if (auto it = cfg.find("sparsify.seed"); it != cfg.end())
      spec.seed = std::stoull(it->second);
    po.sparsify = spec;
  }
  if (o.blowup > 1) po.blowup = bg::BlowUpSpec{o.blowup};
  return po;
}

void add_common_flags(CLI::App* cmd, CommonOpts& o, bool with_pipeline) {
  if (with_pipeline) {
    cmd->add_option("--r", o.r, "side length of the lattice parts");
    cmd->add_option("--d", o.d, "dimension");
    cmd->add_flag("--symmetric", o.symmetric, "take C = [r]^d instead of {0..r+1}^d");
    cmd->add_option("--sparsify", o.sparsify,
                    "replace C by C': random[:SIZE] or greedy:SIZE (default size: round(2^{-d/2} |C|))");
    cmd->add_flag("--prune", o.prune, "delete every edge contained in zero triangles");
    cmd->add_option("--blowup", o.blowup, "replace each A/B vertex by this many copies");
    cmd->add_option("--max-part-size", o.max_part_size, "resource cap on part sizes");
  }
  cmd->add_option("--seed", o.seed, "seed recorded in reports and driving all randomness");
  cmd->add_option("--threads", o.threads, "worker threads (results are thread-count independent)");
  cmd->add_flag("--no-timestamp", o.no_timestamp, "omit the generated_at header field");
  cmd->add_option("--config", o.config_path, "key=value file overlaying unset flags");
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << content;
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

int cmd_construct(const CommonOpts& o, const std::map<std::string, std::string>& cfg,
                  const std::string& out, std::string meta, bool binary) {
  bg::ConstructionParams params = bg::make_params(o.r, o.d);
  bg::PipelineResult res = bg::run_pipeline(params, pipeline_options(o, cfg));
  bg::save_graph(res.graph, out, binary);
  bg::BookReport rep = bg::book_report(res.graph, o.threads);
  std::vector<bg::Verdict> verdicts = bg::construction_verdicts(res, rep);
  if (meta.empty()) meta = out + ".meta.json";
  std::optional<std::string> stamp;
  if (!o.no_timestamp) stamp = utc_timestamp();
  write_file(meta, bg::pipeline_document(res, rep, verdicts, o.seed, stamp).dump(2) + "\n");
  std::cout << "construct: " << res.graph.part_size(bg::Part::A) << "+"
            << res.graph.part_size(bg::Part::B) << "+" << res.graph.part_size(bg::Part::C)
            << " vertices, " << res.graph.edge_count() << " edges -> " << out << "\n";
  return kExitOk;
}

int cmd_analyze(const CommonOpts& o, const std::string& in, const std::string& out,
                const std::string& format) {
  bg::TripartiteGraph g = bg::load_graph(in);
  bg::BookReport rep = bg::book_report(g, o.threads);
  std::string rendered;
  if (format == "json") {
    std::optional<std::string> stamp;
    if (!o.no_timestamp) stamp = utc_timestamp();
    rendered = bg::report_document(rep, {}, nullptr, o.seed, stamp).dump(2) + "\n";
  } else if (format == "csv") {
    rendered = bg::histogram_csv(rep);
  } else if (format == "text") {
    rendered = bg::report_text(rep, {});
    if (!g.has_coords())
      rendered += "note: no coordinate tables; topology-only report, identity checks unavailable\n";
  } else {
    throw CLI::ValidationError("--format", "must be json, csv or text");
  }
  if (out.empty())
    std::cout << rendered;
  else
    write_file(out, rendered);
  return kExitOk;
}

int print_verification(const bg::VerificationReport& rep) {
  for (const bg::CheckResult& c : rep.checks) {
    const char* tag = c.skipped ? "[skip]" : (c.pass ? "[ok]  " : "[FAIL]");
    std::cout << tag << " " << c.name << ": " << c.detail << "\n";
  }
  for (const bg::Verdict& v : rep.verdicts)
    std::cout << "[verdict " << (v.pass ? "pass" : "fail") << "] " << v.name << ": actual "
              << v.actual << " vs bound " << v.bound << (v.log_space ? " (log space)" : "")
              << " -- " << v.note << "\n";
  if (!rep.all_passed()) {
    for (const bg::CheckResult& c : rep.checks)
      if (!c.skipped && !c.pass) {
        std::cout << "verification failed: " << c.name << "\n";
        return kExitAssert;
      }
  }
  std::cout << "verification passed\n";
  return kExitOk;
}

int cmd_verify(const CommonOpts& o, const std::map<std::string, std::string>& cfg,
               const std::string& in, bool r_given, i64 oracle_cap, i64 edge_sample) {
  bg::VerifyOptions vo;
  vo.oracle_cap = oracle_cap;
  vo.epsilon_edge_sample = edge_sample;
  vo.seed = o.seed;
  vo.threads = o.threads;
  if (in.empty()) {
    bg::ConstructionParams params = bg::make_params(o.r, o.d);
    bg::PipelineResult res = bg::run_pipeline(params, pipeline_options(o, cfg));
    return print_verification(bg::verify_pipeline(res, vo));
  }
  bg::TripartiteGraph g = bg::load_graph(in);
  std::optional<bg::ConstructionParams> params;
  if (g.has_coords() && r_given) {
    int d = g.coord_dim();
    params = bg::make_params(o.r, d > 0 ? d : o.d);
  }
  return print_verification(bg::verify_graph(g, params, vo));
}

int cmd_sweep(const CommonOpts& o, const std::vector<i64>& rs, const std::vector<i64>& ds,
              const std::vector<std::string>& sparsifies, const std::string& out) {
  std::ostringstream csv;
  csv << "r,d,symmetric,sparsify_mode,sparsify_size,blowup_m,prune,seed,nA,nB,nC,N,"
         "ab_edges_pre,pruned_ab,pruned_bc,pruned_ac,edges_ab,edges_bc,edges_ac,edges_total,"
         "booksize,min_count,uncovered,density_ratio";
  const char* verdict_names[] = {"every_edge_in_triangle", "booksize_bound", "ab_edge_density",
                                 "uncovered_ab_after_sparsify", "vertex_count_bound",
                                 "edge_density_target"};
  for (const char* v : verdict_names) csv << ",v_" << v;
  csv << "\n";
  for (i64 r : rs)
    for (i64 d : ds)
      for (const std::string& sp : sparsifies) {
        CommonOpts cell = o;
        cell.r = r;
        cell.d = d;
        cell.sparsify = sp == "none" ? "" : sp;
        bg::PipelineResult res = bg::run_pipeline(bg::make_params(r, d), pipeline_options(cell, {}));
        bg::BookReport rep = bg::book_report(res.graph, o.threads);
        std::vector<bg::Verdict> verdicts = bg::construction_verdicts(res, rep);
        csv << r << "," << d << "," << (cell.symmetric ? 1 : 0) << ",";
        if (res.sparsify) {
          csv << (res.sparsify->mode == bg::SparsifySpec::Mode::random ? "random" : "greedy") << ","
              << res.sparsify->target_size << ",";
        } else {
          csv << "none,0,";
        }
        csv << (res.blowup ? res.blowup->multiplicity : 1) << "," << (cell.prune ? 1 : 0) << ","
            << o.seed << "," << res.graph.part_size(bg::Part::A) << ","
            << res.graph.part_size(bg::Part::B) << "," << res.graph.part_size(bg::Part::C) << ","
            << res.N << "," << res.ab_edges_pre << "," << res.pruned_edges[0] << ","
            << res.pruned_edges[1] << "," << res.pruned_edges[2] << "," << rep.per_pair_edges[0]
            << "," << rep.per_pair_edges[1] << "," << rep.per_pair_edges[2] << ","
            << rep.total_edges << "," << rep.booksize << "," << rep.min_count << ","
            << rep.uncovered << "," << rep.density_ratio;
        for (const bg::Verdict& v : verdicts) csv << "," << (v.pass ? 1 : 0);
        csv << "\n";
      }
  if (out.empty())
    std::cout << csv.str();
  else
    write_file(out, csv.str());
  return kExitOk;
}

int cmd_export(const std::string& in, const std::string& out, std::string to, int threads) {
  bg::TripartiteGraph g = bg::load_graph(in);
  if (to.empty()) {
    auto ends_with = [&](const char* suf) {
      std::string s(suf);
      return out.size() >= s.size() && out.compare(out.size() - s.size(), s.size(), s) == 0;
    };
    to = ends_with(".trb") || ends_with(".bin") ? "binary"
         : ends_with(".csv")                    ? "histogram-csv"
                                                : "text";
  }
  if (to == "binary") {
    bg::save_graph(g, out, true);
  } else if (to == "text") {
    bg::save_graph(g, out, false);
  } else if (to == "histogram-csv") {
    write_file(out, bg::histogram_csv(bg::book_report(g, threads)));
  } else {
    throw CLI::ValidationError("--to", "must be text, binary or histogram-csv");
  }
  std::cout << "export: " << in << " -> " << out << " (" << to << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tripartite lattice graphs with small books: construct, analyze, verify"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string in, out, meta, format = "json", to;
  bool binary = false;
  i64 oracle_cap = 10'000'000'000LL, edge_sample = 100;
  std::vector<i64> sweep_r{2}, sweep_d{2, 4};
  std::vector<std::string> sweep_sparsify{"none"};

  CLI::App* construct = app.add_subcommand("construct", "build the graph and run the pipeline");
  add_common_flags(construct, o, true);
  construct->add_option("--out", out, "graph output path")->required();
  construct->add_option("--meta", meta, "metadata JSON path (default: <out>.meta.json)");
  construct->add_flag("--binary", binary, "write the binary format");

  CLI::App* analyze = app.add_subcommand("analyze", "per-edge triangle statistics of a graph file");
  add_common_flags(analyze, o, false);
  analyze->add_option("--in", in, "graph input path")->required();
  analyze->add_option("--out", out, "report output path (default: stdout)");
  analyze->add_option("--format", format, "json | csv | text");

  CLI::App* verify = app.add_subcommand(
      "verify", "oracle equivalence, geometry recheck, identity sweeps; exit 1 on any failure");
  add_common_flags(verify, o, true);
  verify->add_option("--in", in, "verify a stored graph instead of building one");
  verify->add_option("--oracle-cap", oracle_cap, "iteration cap for the brute-force oracle");
  verify->add_option("--edges", edge_sample, "A-B edge sample size for the witness check");

  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter grid, one CSV row per cell");
  add_common_flags(sweep, o, true);
  sweep->add_option("--r-list", sweep_r, "r values");
  sweep->add_option("--d-list", sweep_d, "d values");
  sweep->add_option("--sparsify-list", sweep_sparsify, "sparsify specs (none, random:N, greedy:N)");
  sweep->add_option("--out", out, "CSV output path (default: stdout)");

  CLI::App* exportc = app.add_subcommand("export", "convert graph files between formats");
  exportc->add_option("--in", in, "graph input path")->required();
  exportc->add_option("--out", out, "output path")->required();
  exportc->add_option("--to", to, "text | binary | histogram-csv (default: by extension)");
  exportc->add_option("--threads", o.threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    std::map<std::string, std::string> cfg;
    CLI::App* sub = app.get_subcommands().front();
    if (!o.config_path.empty()) {
      cfg = read_config(o.config_path);
      apply_config(cfg, sub, o);
    }
    if (o.threads < 1) throw CLI::ValidationError("--threads", "must be >= 1");
    if (construct->parsed()) return cmd_construct(o, cfg, out, meta, binary);
    if (analyze->parsed()) return cmd_analyze(o, in, out, format);
    if (verify->parsed()) {
      bool r_given = verify->get_option("--r")->count() > 0 || cfg.count("r") > 0;
      return cmd_verify(o, cfg, in, r_given, oracle_cap, edge_sample);
    }
    if (sweep->parsed()) return cmd_sweep(o, sweep_r, sweep_d, sweep_sparsify, out);
    if (exportc->parsed()) return cmd_export(in, out, to, o.threads);
    return kExitUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const bg::resource_error& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const bg::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitAssert;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAssert;
  }
}
