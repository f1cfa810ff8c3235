#pragma once

// The verification bundle behind the `verify` subcommand: oracle equivalence,
// geometry recheck, exhaustive w-identity sweeps, the epsilon-witness
// implication, and prune idempotence. These are hard checks; the asymptotic
// verdicts are attached for reporting and never fail a run.

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bookgraph/analyze.hpp"
#include "bookgraph/oracle.hpp"

namespace bookgraph {

struct VerifyOptions {
  i64 oracle_cap = 10'000'000'000LL;
  i64 epsilon_edge_sample = 100;
  u64 seed = 7;
  int threads = 1;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  bool skipped = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  std::vector<Verdict> verdicts;

  bool all_passed() const {
    for (const CheckResult& c : checks)
      if (!c.skipped && !c.pass) return false;
    return true;
  }
};

namespace detail {

inline CheckResult check_oracle_equivalence(const TripartiteGraph& g, const TriangleList& tl) {
  i64 edges_checked = 0, mismatches = 0;
  std::string first;
  for (Pair p : kAllPairs)
    for_each_edge(g, p, [&](EdgeRef e) {
      ++edges_checked;
      i64 fast = triangles_on_edge(g, e);
      i64 slow = tl.count_for(e);
      if (fast != slow && ++mismatches == 1) {
        std::ostringstream os;
        os << pair_name(e.pair) << " " << e.i << " " << e.j << ": engine " << fast << " vs oracle "
           << slow;
        first = os.str();
      }
    });
  // per-edge counts over the three pairs triple-count the list
  i64 sum = 0;
  for (const auto& m : tl.counts)
    for (const auto& [k, v] : m) sum += v;
  bool consistent = sum == 3 * static_cast<i64>(tl.triangles.size());
  CheckResult r;
  r.name = "oracle_equivalence";
  r.pass = mismatches == 0 && consistent;
  std::ostringstream os;
  os << edges_checked << " edges, " << tl.triangles.size() << " triangles";
  if (mismatches) os << ", " << mismatches << " mismatches (first: " << first << ")";
  if (!consistent) os << ", count-sum inconsistency";
  r.detail = os.str();
  return r;
}

// Maps an edge of the (possibly blown-up) final graph back to pre-blow-up
// vertex indices.
inline EdgeRef unblow(EdgeRef e, i64 m) {
  switch (e.pair) {
    case Pair::AB: return {e.pair, e.i / m, e.j / m};
    case Pair::BC: return {e.pair, e.i / m, e.j};
    default: return {e.pair, e.i / m, e.j};
  }
}

inline CheckResult check_geometry(const TripartiteGraph& g, const ConstructionParams& p,
                                  const std::vector<EdgeRef>* pruned, i64 blowup_m,
                                  bool allow_missing) {
  CheckResult r;
  r.name = "geometry_recheck";
  std::vector<GeometryDiff> diffs = recheck_geometry(g, p);
  i64 extra = 0, missing = 0;
  std::set<EdgeRef> pruned_set;
  if (pruned) pruned_set.insert(pruned->begin(), pruned->end());
  i64 unexplained = 0;
  std::string first;
  for (const GeometryDiff& d : diffs) {
    if (d.stored && !d.geometric) {
      ++extra;
      if (first.empty()) {
        std::ostringstream os;
        os << "stored non-geometric edge " << pair_name(d.edge.pair) << " " << d.edge.i << " "
           << d.edge.j;
        first = os.str();
      }
    } else {
      ++missing;
      if (pruned && !pruned_set.count(unblow(d.edge, blowup_m))) ++unexplained;
    }
  }
  bool pass = extra == 0;
  if (pruned) {
    // the missing set must be exactly the recorded pruned set: every pruned
    // A-B edge accounts for m^2 copies, the C pairs for m copies each
    i64 expected = 0;
    for (const EdgeRef& e : *pruned) expected += e.pair == Pair::AB ? blowup_m * blowup_m : blowup_m;
    pass = pass && unexplained == 0 && missing == expected;
  } else if (!allow_missing) {
    pass = pass && missing == 0;
  }
  std::ostringstream os;
  os << extra << " stored-but-not-geometric, " << missing << " geometric-but-missing";
  if (pruned) os << " (recorded pruned edges explain the missing set)";
  if (!first.empty()) os << "; first: " << first;
  r.pass = pass;
  r.detail = os.str();
  return r;
}

inline CheckResult check_w_identities(const TripartiteGraph& g, const TriangleList& tl,
                                      const ConstructionParams& p) {
  CheckResult r;
  r.name = "w_identities";
  i64 checked = 0, identity_failures = 0, norm_failures = 0;
  const auto& ca = g.coords(Part::A);
  const auto& cb = g.coords(Part::B);
  const auto& cc = g.coords(Part::C);
  for (const auto& t : tl.triangles) {
    const LatticePoint& a = ca[static_cast<size_t>(t[0])];
    const LatticePoint& b = cb[static_cast<size_t>(t[1])];
    const LatticePoint& c = cc[static_cast<size_t>(t[2])];
    IdentityCheck ab = verify_w_identity_ab(a, b, c);
    IdentityCheck ac = verify_w_identity_ac(a, c, b);
    if (!ab.holds || !ac.holds) ++identity_failures;
    bool windows = in_ab_window(squared_distance(a, b), p) &&
                   in_c_window(squared_distance(b, c), p) &&
                   in_c_window(squared_distance(c, a), p);
    if (windows && (ab.w_norm_sq > 9 * p.d || ac.w_norm_sq > 9 * p.d)) ++norm_failures;
    ++checked;
  }
  r.pass = identity_failures == 0 && norm_failures == 0;
  std::ostringstream os;
  os << checked << " triangles, " << identity_failures << " identity failures, " << norm_failures
     << " w-norm bound failures";
  r.detail = os.str();
  return r;
}

inline CheckResult check_epsilon_implication(const TripartiteGraph& g,
                                             const ConstructionParams& p, i64 sample, u64 seed) {
  CheckResult r;
  r.name = "epsilon_witness_implication";
  if (p.d > kMaxExactEpsilonDim) {
    r.skipped = true;
    r.detail = "d > " + std::to_string(kMaxExactEpsilonDim) + ", exact enumeration skipped";
    return r;
  }
  std::vector<EdgeRef> edges;
  for_each_edge(g, Pair::AB, [&](EdgeRef e) { edges.push_back(e); });
  if (edges.empty()) {
    r.pass = true;
    r.detail = "no A-B edges";
    return r;
  }
  SplitStream rng(seed, 1);
  std::vector<EdgeRef> chosen;
  if (static_cast<i64>(edges.size()) <= sample) {
    chosen = edges;
  } else {
    for (i64 k = 0; k < sample; ++k) {
      i64 pick = k + static_cast<i64>(rng.bounded(static_cast<u64>(edges.size()) - k));
      std::swap(edges[static_cast<size_t>(k)], edges[static_cast<size_t>(pick)]);
    }
    chosen.assign(edges.begin(), edges.begin() + sample);
  }
  i64 violations = 0, accepted_total = 0, below_lower_bound = 0;
  for (EdgeRef e : chosen) {
    const LatticePoint& a = g.coords(Part::A)[static_cast<size_t>(e.i)];
    const LatticePoint& b = g.coords(Part::B)[static_cast<size_t>(e.j)];
    if (!in_ab_window(squared_distance(a, b), p)) continue;  // implication is conditional
    EpsilonWitnessStats st = epsilon_witness_count_exact(a, b, p);
    violations += st.window_violations + st.domain_violations;
    accepted_total += st.accepted;
    if (!st.lower_bound_met) ++below_lower_bound;
  }
  r.pass = violations == 0;
  std::ostringstream os;
  os << chosen.size() << " edges, " << accepted_total << " accepted sign vectors, " << violations
     << " window/domain violations; " << below_lower_bound
     << " edges below the (1 - 2e^{-d/(15r^2)}) 2^d mark (reported only)";
  r.detail = os.str();
  return r;
}

inline CheckResult check_prune_idempotence(const TripartiteGraph& g, bool already_pruned,
                                           int threads) {
  CheckResult r;
  r.name = "prune_idempotence";
  PruneResult p1 = prune_uncovered(g, threads);
  i64 first_pass = p1.removed_counts[0] + p1.removed_counts[1] + p1.removed_counts[2];
  PruneResult p2 = prune_uncovered(p1.graph, threads);
  i64 second_pass = p2.removed_counts[0] + p2.removed_counts[1] + p2.removed_counts[2];
  r.pass = second_pass == 0 && (!already_pruned || first_pass == 0);
  std::ostringstream os;
  os << "first pass removed " << first_pass << ", second pass removed " << second_pass;
  if (already_pruned) os << " (graph was already pruned; first pass must be 0)";
  r.detail = os.str();
  return r;
}

}  // namespace detail

// Pipeline mode: the pruned-edge record is available, so the geometry diff is
// matched against it exactly.
inline VerificationReport verify_pipeline(const PipelineResult& res,
                                          const VerifyOptions& opt = {}) {
  VerificationReport rep;
  const TripartiteGraph& g = res.graph;

  bool oracle_ok = false;
  TriangleList tl;
  try {
    tl = brute_force_triangles(g, opt.oracle_cap);
    oracle_ok = true;
    rep.checks.push_back(detail::check_oracle_equivalence(g, tl));
  } catch (const resource_error& e) {
    rep.checks.push_back({"oracle_equivalence", false, true, e.what()});
  }

  i64 m = res.blowup ? res.blowup->multiplicity : 1;
  rep.checks.push_back(
      detail::check_geometry(g, res.params, res.pruned ? &res.pruned_list : nullptr, m, false));

  if (oracle_ok)
    rep.checks.push_back(detail::check_w_identities(g, tl, res.params));
  else
    rep.checks.push_back({"w_identities", false, true, "oracle list unavailable"});

  rep.checks.push_back(
      detail::check_epsilon_implication(g, res.params, opt.epsilon_edge_sample, opt.seed));
  rep.checks.push_back(detail::check_prune_idempotence(g, res.pruned, opt.threads));

  rep.verdicts = construction_verdicts(res, book_report(g, opt.threads));
  return rep;
}

// Imported-file mode. Geometry and identity checks need coordinates and
// params; without them they are skipped with a notice. A stored graph may be
// a legitimately pruned subgraph, so geometric-but-missing edges do not fail
// here; stored non-geometric edges always do.
inline VerificationReport verify_graph(const TripartiteGraph& g,
                                       std::optional<ConstructionParams> params,
                                       const VerifyOptions& opt = {}) {
  VerificationReport rep;

  bool oracle_ok = false;
  TriangleList tl;
  try {
    tl = brute_force_triangles(g, opt.oracle_cap);
    oracle_ok = true;
    rep.checks.push_back(detail::check_oracle_equivalence(g, tl));
  } catch (const resource_error& e) {
    rep.checks.push_back({"oracle_equivalence", false, true, e.what()});
  }

  if (g.has_coords() && params) {
    rep.checks.push_back(detail::check_geometry(g, *params, nullptr, 1, /*allow_missing=*/true));
    if (oracle_ok)
      rep.checks.push_back(detail::check_w_identities(g, tl, *params));
    else
      rep.checks.push_back({"w_identities", false, true, "oracle list unavailable"});
    rep.checks.push_back(
        detail::check_epsilon_implication(g, *params, opt.epsilon_edge_sample, opt.seed));
  } else {
    std::string why = g.has_coords() ? "params (r, d) not provided" : "graph has no coordinates";
    rep.checks.push_back({"geometry_recheck", false, true, why});
    rep.checks.push_back({"w_identities", false, true, why});
    rep.checks.push_back({"epsilon_witness_implication", false, true, why});
  }

  rep.checks.push_back(detail::check_prune_idempotence(g, false, opt.threads));
  return rep;
}

}  // namespace bookgraph
