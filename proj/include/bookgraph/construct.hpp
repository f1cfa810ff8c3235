#pragma once

// Builds the tripartite lattice graph from parameters and applies the three
// transformations: sparsifying C (random or greedy max-coverage), pruning
// edges that sit in no triangle, and blowing up A and B into independent
// copies.

#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "bookgraph/graph.hpp"
#include "bookgraph/lattice.hpp"
#include "bookgraph/rng.hpp"

namespace bookgraph {

struct BuildCaps {
  i64 max_part_size = 4'194'304;
};

struct BlowUpSpec {
  i64 multiplicity = 1;
};

// A and B are copies of {1..r}^d; C is {0..r+1}^d, or {1..r}^d in the
// symmetric variant. An A-B pair is an edge iff its squared distance lies in
// the mu +- d window, the two C pairs use the mu/4 +- 2d window.
inline TripartiteGraph build_preconstruction(const ConstructionParams& p, bool symmetric = false,
                                             const BuildCaps& caps = {}, int threads = 1) {
  std::vector<LatticePoint> inner =
      enumerate_box(1, p.r, static_cast<int>(p.d), caps.max_part_size);
  std::vector<LatticePoint> outer =
      symmetric ? inner : enumerate_box(0, p.r + 1, static_cast<int>(p.d), caps.max_part_size);
  const auto na = static_cast<i64>(inner.size());
  const auto nc = static_cast<i64>(outer.size());

  BitMatrix ab(na, na), bc(na, nc), ac(na, nc);
  parallel_for(na, threads, [&](i64 lo, i64 hi) {
    for (i64 i = lo; i < hi; ++i) {
      const LatticePoint& a = inner[static_cast<size_t>(i)];
      auto ab_row = ab.row(i);
      for (i64 j = 0; j < na; ++j)
        if (in_ab_window(squared_distance(a, inner[static_cast<size_t>(j)]), p))
          ab_row[static_cast<size_t>(j / 64)] |= u64{1} << (j % 64);
      // A and B are the same point set, so vertex i of B has the same C-row
      // as vertex i of A (both pairs use the C window)
      auto ac_row = ac.row(i);
      auto bc_row = bc.row(i);
      for (i64 j = 0; j < nc; ++j)
        if (in_c_window(squared_distance(a, outer[static_cast<size_t>(j)]), p)) {
          ac_row[static_cast<size_t>(j / 64)] |= u64{1} << (j % 64);
          bc_row[static_cast<size_t>(j / 64)] |= u64{1} << (j % 64);
        }
    }
  });

  PartCoords coords = {inner, inner, outer};
  return TripartiteGraph::from_adjacency(std::move(ab), std::move(bc), std::move(ac),
                                         std::move(coords));
}

struct CoupledParams {
  ConstructionParams params;
  double log_n = 0.0;        // ln(r^d) = d ln r
  double d_asymptotic = 0.0;  // 5 ln n / ln ln n, the regime the coupling targets
};

// The coupled preset d = r^5; part sizes are astronomically large here, so
// only log-space reporting is meaningful.
inline CoupledParams coupled_params(i64 r) {
  if (r < 2 || r % 2 != 0) throw std::invalid_argument("coupled_params: r must be even and >= 2");
  i64 d = r * r * r * r * r;
  CoupledParams cp;
  cp.params = make_params(r, d);
  cp.params.coupled = true;
  cp.log_n = static_cast<double>(d) * std::log(static_cast<double>(r));
  cp.d_asymptotic = 5.0 * cp.log_n / std::log(cp.log_n);
  return cp;
}

// max(1, round(2^{-d/2} nC)), the sparsification rate of the random variant.
inline i64 default_sparsify_size(i64 nc, i64 d) {
  if (nc < 1) throw std::invalid_argument("default_sparsify_size: empty C");
  double target = std::exp2(-static_cast<double>(d) / 2.0) * static_cast<double>(nc);
  return std::max<i64>(1, std::llround(target));
}

// Uniform sample of exactly target_size C-indices, ascending. Deterministic
// in the seed (partial Fisher-Yates on a single stream).
inline std::vector<i64> sparsify_random(const TripartiteGraph& g, const SparsifySpec& spec) {
  i64 nc = g.part_size(Part::C);
  i64 m = spec.target_size;
  if (m < 1 || m > nc)
    throw std::invalid_argument("sparsify_random: target size " + std::to_string(m) +
                                " out of range [1, " + std::to_string(nc) + "]");
  std::vector<i64> idx(static_cast<size_t>(nc));
  std::iota(idx.begin(), idx.end(), i64{0});
  SplitStream rng(spec.seed, 0);
  for (i64 k = 0; k < m; ++k) {
    i64 pick = k + static_cast<i64>(rng.bounded(static_cast<u64>(nc - k)));
    std::swap(idx[static_cast<size_t>(k)], idx[static_cast<size_t>(pick)]);
  }
  idx.resize(static_cast<size_t>(m));
  std::sort(idx.begin(), idx.end());
  return idx;
}

struct GreedyResult {
  std::vector<i64> selected;  // in pick order
  std::vector<i64> gains;     // newly covered A-B edges per pick; non-increasing
  i64 covered = 0;            // A-B edges covered by the selected set
};

// Iteratively picks the C-vertex covering the most yet-uncovered A-B edges
// (an edge ab is covered by c when both ac and bc are edges). Ties go to the
// lowest index; stops at the budget or when nothing new is coverable.
inline GreedyResult sparsify_greedy(const TripartiteGraph& g, i64 budget, int threads = 1) {
  if (budget < 1) throw std::invalid_argument("sparsify_greedy: budget must be >= 1");
  i64 na = g.part_size(Part::A), nc = g.part_size(Part::C);
  BitMatrix covered(na, g.part_size(Part::B));
  GreedyResult res;
  std::vector<i64> score(static_cast<size_t>(nc));
  std::vector<u64> picked(static_cast<size_t>(nc), 0);
  while (static_cast<i64>(res.selected.size()) < std::min(budget, nc)) {
    parallel_for(nc, threads, [&](i64 lo, i64 hi) {
      for (i64 c = lo; c < hi; ++c) {
        if (picked[static_cast<size_t>(c)]) {
          score[static_cast<size_t>(c)] = -1;
          continue;
        }
        i64 s = 0;
        auto b_row = g.reverse(Pair::BC).row(c);
        BitMatrix::for_each_set(g.reverse(Pair::AC).row(c), [&](i64 a) {
          s += BitMatrix::and_andnot_count(g.forward(Pair::AB).row(a), b_row, covered.row(a));
        });
        score[static_cast<size_t>(c)] = s;
      }
    });
    i64 best = -1, best_gain = 0;
    for (i64 c = 0; c < nc; ++c)
      if (score[static_cast<size_t>(c)] > best_gain) {
        best_gain = score[static_cast<size_t>(c)];
        best = c;
      }
    if (best < 0) break;  // everything coverable is covered
    picked[static_cast<size_t>(best)] = 1;
    auto b_row = g.reverse(Pair::BC).row(best);
    BitMatrix::for_each_set(g.reverse(Pair::AC).row(best), [&](i64 a) {
      BitMatrix::or_and_into(covered.row(a), g.forward(Pair::AB).row(a), b_row);
    });
    res.selected.push_back(best);
    res.gains.push_back(best_gain);
    res.covered += best_gain;
  }
  return res;
}

struct PruneResult {
  TripartiteGraph graph;
  std::array<i64, 3> removed_counts{0, 0, 0};  // per Pair
  std::vector<EdgeRef> removed_edges;          // pair-major, row-major
};

// Removes every edge contained in zero triangles, in one pass over all three
// pairs. Removing such an edge cannot orphan others: every edge of a
// surviving triangle still lies in that triangle (tested, not assumed).
inline PruneResult prune_uncovered(const TripartiteGraph& g, int threads = 1) {
  PruneResult res;
  for (Pair p : kAllPairs) {
    const BitMatrix& m = g.forward(p);
    std::vector<std::vector<EdgeRef>> dead(static_cast<size_t>(m.rows()));
    parallel_for(m.rows(), threads, [&](i64 lo, i64 hi) {
      for (i64 i = lo; i < hi; ++i)
        BitMatrix::for_each_set(m.row(i), [&](i64 j) {
          EdgeRef e{p, i, j};
          if (common_third_count(g, e) == 0) dead[static_cast<size_t>(i)].push_back(e);
        });
    });
    for (auto& row : dead)
      res.removed_edges.insert(res.removed_edges.end(), row.begin(), row.end());
  }
  res.graph = g;
  res.graph.remove_edges(res.removed_edges);
  for (const EdgeRef& e : res.removed_edges) ++res.removed_counts[static_cast<size_t>(e.pair)];
  return res;
}

// Replaces each A and B vertex by m independent copies (copy k of vertex v
// gets index v*m + k); C is untouched. Copies inherit adjacency and
// coordinates; copies of the same vertex are never adjacent (they live in
// the same part).
inline TripartiteGraph blow_up(const TripartiteGraph& g, const BlowUpSpec& spec) {
  i64 m = spec.multiplicity;
  if (m < 1) throw std::invalid_argument("blow_up: multiplicity must be >= 1");
  i64 na = g.part_size(Part::A), nb = g.part_size(Part::B), nc = g.part_size(Part::C);

  BitMatrix ab(na * m, nb * m), bc(nb * m, nc), ac(na * m, nc);
  for (i64 a = 0; a < na; ++a) {
    // expand the A-B row once, then copy it to all m copies of a
    BitMatrix expanded(1, nb * m);
    BitMatrix::for_each_set(g.forward(Pair::AB).row(a), [&](i64 b) {
      for (i64 k = 0; k < m; ++k) expanded.set(0, b * m + k);
    });
    for (i64 k = 0; k < m; ++k) {
      auto dst = ab.row(a * m + k);
      auto src = expanded.row(0);
      std::copy(src.begin(), src.end(), dst.begin());
      auto cdst = ac.row(a * m + k);
      auto csrc = g.forward(Pair::AC).row(a);
      std::copy(csrc.begin(), csrc.end(), cdst.begin());
    }
  }
  for (i64 b = 0; b < nb; ++b)
    for (i64 k = 0; k < m; ++k) {
      auto dst = bc.row(b * m + k);
      auto src = g.forward(Pair::BC).row(b);
      std::copy(src.begin(), src.end(), dst.begin());
    }

  std::optional<PartCoords> coords;
  if (g.has_coords()) {
    PartCoords pc;
    for (Part part : {Part::A, Part::B}) {
      auto& out = pc[static_cast<size_t>(part)];
      out.reserve(static_cast<size_t>(g.part_size(part) * m));
      for (const LatticePoint& pt : g.coords(part))
        for (i64 k = 0; k < m; ++k) out.push_back(pt);
    }
    pc[static_cast<size_t>(Part::C)] = g.coords(Part::C);
    coords = std::move(pc);
  }
  return TripartiteGraph::from_adjacency(std::move(ab), std::move(bc), std::move(ac),
                                         std::move(coords));
}

// Integer point near the midpoint of a and b: exact on even-difference
// coordinates, rounded on odd ones with signs chosen greedily to keep the
// running cross-sum sum x_i delta_i eps_i small (|sum| <= r/2). The result is
// clamped to the C domain.
inline LatticePoint rounded_midpoint_witness(const LatticePoint& a, const LatticePoint& b,
                                             const ConstructionParams& p, bool symmetric = false) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("rounded_midpoint_witness: dimension mismatch");
  Coord lo = symmetric ? 1 : 0;
  Coord hi = symmetric ? p.r : p.r + 1;
  LatticePoint c;
  c.coords.resize(a.coords.size());
  i64 run2 = 0;  // 2 * sum x_i delta_i eps_i over the odd coordinates so far
  for (int i = 0; i < a.dim(); ++i) {
    i64 x = b[i] - a[i];
    i64 twoc;
    if (x % 2 == 0) {
      twoc = a[i] + b[i];  // delta = 0: the midpoint itself is integral
    } else {
      i64 eps = std::llabs(run2 + x) <= std::llabs(run2 - x) ? 1 : -1;
      run2 += eps * x;
      twoc = a[i] + b[i] + eps;
    }
    c[i] = std::clamp<Coord>(twoc / 2, lo, hi);
  }
  return c;
}

struct PipelineOptions {
  bool symmetric = false;
  std::optional<SparsifySpec> sparsify;
  bool prune = false;
  std::optional<BlowUpSpec> blowup;
  BuildCaps caps;
  int threads = 1;
};

struct PipelineResult {
  TripartiteGraph graph;
  ConstructionParams params;
  bool symmetric = false;
  std::optional<SparsifySpec> sparsify;  // with the resolved target size
  std::optional<BlowUpSpec> blowup;
  std::vector<i64> kept_c;                     // C' (empty when no sparsification)
  std::array<i64, 3> pruned_edges{0, 0, 0};    // per Pair
  std::vector<EdgeRef> pruned_list;            // indices refer to the pre-blow-up graph
  bool pruned = false;
  i64 n = 0;             // |A| of the pre-construction
  i64 ab_edges_pre = 0;  // A-B edges before sparsification
  i64 N = 0;             // total vertices after all steps
};

inline PipelineResult run_pipeline(const ConstructionParams& params, const PipelineOptions& opt) {
  PipelineResult res;
  res.params = params;
  res.symmetric = opt.symmetric;
  res.graph = build_preconstruction(params, opt.symmetric, opt.caps, opt.threads);
  res.n = res.graph.part_size(Part::A);
  res.ab_edges_pre = res.graph.edge_count(Pair::AB);

  if (opt.sparsify) {
    SparsifySpec spec = *opt.sparsify;
    if (spec.target_size == 0)
      spec.target_size = default_sparsify_size(res.graph.part_size(Part::C), params.d);
    if (spec.mode == SparsifySpec::Mode::random) {
      res.kept_c = sparsify_random(res.graph, spec);
    } else {
      res.kept_c = sparsify_greedy(res.graph, spec.target_size, opt.threads).selected;
      std::sort(res.kept_c.begin(), res.kept_c.end());
    }
    res.graph = res.graph.restrict_C(res.kept_c);
    res.sparsify = spec;
  }

  if (opt.prune) {
    PruneResult pr = prune_uncovered(res.graph, opt.threads);
    res.graph = std::move(pr.graph);
    res.pruned_edges = pr.removed_counts;
    res.pruned_list = std::move(pr.removed_edges);
    res.pruned = true;
  }

  if (opt.blowup) {
    res.graph = blow_up(res.graph, *opt.blowup);
    res.blowup = opt.blowup;
  }

  res.N = res.graph.total_vertices();
  return res;
}

}  // namespace bookgraph
