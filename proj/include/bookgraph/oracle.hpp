#pragma once

// Deliberately naive ground truth for small instances: a triple loop over
// plain byte adjacency tables extracted up front, sharing nothing with the
// bitset AND + popcount path it is used to check.

#include <unordered_map>
#include <vector>

#include "bookgraph/graph.hpp"

namespace bookgraph {

struct TriangleList {
  std::vector<std::array<i64, 3>> triangles;  // (a, b, c), ascending loop order
  std::array<std::unordered_map<u64, i64>, 3> counts;  // per Pair, key (i << 32) | j

  static u64 key(i64 i, i64 j) { return (static_cast<u64>(i) << 32) | static_cast<u64>(j); }

  i64 count_for(EdgeRef e) const {
    const auto& m = counts[static_cast<size_t>(e.pair)];
    auto it = m.find(key(e.i, e.j));
    return it == m.end() ? 0 : it->second;
  }
};

inline TriangleList brute_force_triangles(const TripartiteGraph& g,
                                          i64 iteration_cap = 10'000'000'000LL) {
  i64 na = g.part_size(Part::A), nb = g.part_size(Part::B), nc = g.part_size(Part::C);
  if (na > 0 && nb > 0 && nc > 0) {
    if (na > iteration_cap / nb || na * nb > iteration_cap / nc)
      throw resource_error("brute_force_triangles: " + std::to_string(na) + "*" +
                           std::to_string(nb) + "*" + std::to_string(nc) +
                           " iterations exceed cap " + std::to_string(iteration_cap));
  }
  if (na >= (i64{1} << 32) || nb >= (i64{1} << 32) || nc >= (i64{1} << 32))
    throw resource_error("brute_force_triangles: part size exceeds 2^32");

  auto table = [&](Pair p) {
    i64 rows = g.part_size(pair_first(p)), colz = g.part_size(pair_second(p));
    std::vector<unsigned char> t(static_cast<size_t>(rows * colz), 0);
    for (i64 i = 0; i < rows; ++i)
      for (i64 j = 0; j < colz; ++j)
        if (g.has_edge(EdgeRef{p, i, j})) t[static_cast<size_t>(i * colz + j)] = 1;
    return t;
  };
  std::vector<unsigned char> ab = table(Pair::AB);
  std::vector<unsigned char> bc = table(Pair::BC);
  std::vector<unsigned char> ac = table(Pair::AC);

  TriangleList out;
  for (i64 a = 0; a < na; ++a)
    for (i64 b = 0; b < nb; ++b) {
      if (!ab[static_cast<size_t>(a * nb + b)]) continue;
      for (i64 c = 0; c < nc; ++c) {
        if (!ac[static_cast<size_t>(a * nc + c)]) continue;
        if (!bc[static_cast<size_t>(b * nc + c)]) continue;
        out.triangles.push_back({a, b, c});
        ++out.counts[static_cast<size_t>(Pair::AB)][TriangleList::key(a, b)];
        ++out.counts[static_cast<size_t>(Pair::BC)][TriangleList::key(b, c)];
        ++out.counts[static_cast<size_t>(Pair::AC)][TriangleList::key(a, c)];
      }
    }
  return out;
}

struct GeometryDiff {
  EdgeRef edge;
  bool stored = false;     // present in the adjacency structure
  bool geometric = false;  // demanded by the window predicate
};

// Recomputes every potential edge's window predicate from coordinates and
// diffs it against the stored adjacency.
inline std::vector<GeometryDiff> recheck_geometry(const TripartiteGraph& g,
                                                  const ConstructionParams& p) {
  if (!g.has_coords())
    throw std::invalid_argument("recheck_geometry: graph has no coordinate tables");
  if (g.coord_dim() != 0 && g.coord_dim() != p.d)
    throw std::invalid_argument("recheck_geometry: coordinate dimension " +
                                std::to_string(g.coord_dim()) + " does not match params d = " +
                                std::to_string(p.d));
  std::vector<GeometryDiff> diffs;
  for (Pair pr : kAllPairs) {
    const auto& ci = g.coords(pair_first(pr));
    const auto& cj = g.coords(pair_second(pr));
    for (i64 i = 0; i < static_cast<i64>(ci.size()); ++i)
      for (i64 j = 0; j < static_cast<i64>(cj.size()); ++j) {
        i64 d2 = squared_distance(ci[static_cast<size_t>(i)], cj[static_cast<size_t>(j)]);
        bool geo = pr == Pair::AB ? in_ab_window(d2, p) : in_c_window(d2, p);
        bool stored = g.has_edge(EdgeRef{pr, i, j});
        if (geo != stored) diffs.push_back({EdgeRef{pr, i, j}, stored, geo});
      }
  }
  return diffs;
}

}  // namespace bookgraph
