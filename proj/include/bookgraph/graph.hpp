#pragma once

// Tripartite graph with cross-part bitset adjacency. Each of the three pairs
// keeps a forward row family (rows indexed by the pair's first part) and the
// transposed reverse family, held in sync by every mutation; triangle counts
// reduce to an AND + popcount of two third-part rows.

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "bookgraph/bitmatrix.hpp"
#include "bookgraph/common.hpp"
#include "bookgraph/lattice.hpp"

namespace bookgraph {

enum class Part : int { A = 0, B = 1, C = 2 };
enum class Pair : int { AB = 0, BC = 1, AC = 2 };

constexpr Part pair_first(Pair p) { return p == Pair::BC ? Part::B : Part::A; }
constexpr Part pair_second(Pair p) { return p == Pair::AB ? Part::B : Part::C; }
constexpr Part pair_third(Pair p) {
  switch (p) {
    case Pair::AB: return Part::C;
    case Pair::BC: return Part::A;
    default: return Part::B;
  }
}

constexpr std::string_view part_name(Part p) {
  switch (p) {
    case Part::A: return "A";
    case Part::B: return "B";
    default: return "C";
  }
}

constexpr std::string_view pair_name(Pair p) {
  switch (p) {
    case Pair::AB: return "AB";
    case Pair::BC: return "BC";
    default: return "AC";
  }
}

inline constexpr std::array<Pair, 3> kAllPairs = {Pair::AB, Pair::BC, Pair::AC};
inline constexpr std::array<Part, 3> kAllParts = {Part::A, Part::B, Part::C};

struct EdgeRef {
  Pair pair = Pair::AB;
  i64 i = 0;  // index in the pair's first part
  i64 j = 0;  // index in the pair's second part

  friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
  friend auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

struct SparsifySpec {
  enum class Mode { random, greedy };
  Mode mode = Mode::random;
  i64 target_size = 0;  // 0 means "use the default rate"
  u64 seed = 0;
};

using PartCoords = std::array<std::vector<LatticePoint>, 3>;

class TripartiteGraph {
 public:
  TripartiteGraph() = default;

  TripartiteGraph(i64 na, i64 nb, i64 nc) { init(na, nb, nc); }

  TripartiteGraph(i64 na, i64 nb, i64 nc, PartCoords coords) {
    init(na, nb, nc);
    attach_coords(std::move(coords));
  }

  // Takes the three forward families (AB: nA x nB, BC: nB x nC, AC: nA x nC)
  // and derives the reverse families.
  static TripartiteGraph from_adjacency(BitMatrix ab, BitMatrix bc, BitMatrix ac,
                                        std::optional<PartCoords> coords = std::nullopt) {
    if (ab.rows() != ac.rows() || ab.cols() != bc.rows() || bc.cols() != ac.cols())
      throw std::invalid_argument("from_adjacency: inconsistent matrix shapes");
    TripartiteGraph g;
    g.sizes_ = {ab.rows(), ab.cols(), bc.cols()};
    g.fwd_ = {std::move(ab), std::move(bc), std::move(ac)};
    for (int p = 0; p < 3; ++p) g.rev_[p] = g.fwd_[p].transposed();
    if (coords) g.attach_coords(std::move(*coords));
    return g;
  }

  i64 part_size(Part p) const { return sizes_[static_cast<size_t>(p)]; }
  i64 total_vertices() const { return sizes_[0] + sizes_[1] + sizes_[2]; }

  bool has_coords() const { return has_coords_; }

  const std::vector<LatticePoint>& coords(Part p) const {
    if (!has_coords_) throw std::invalid_argument("graph has no coordinate tables");
    return coords_[static_cast<size_t>(p)];
  }

  const LatticePoint& point(Part p, i64 i) const { return coords(p)[static_cast<size_t>(i)]; }

  // Dimension of the coordinate tables; 0 when all parts are empty.
  int coord_dim() const {
    for (const auto& part : coords_)
      if (!part.empty()) return part.front().dim();
    return 0;
  }

  void add_edge(EdgeRef e) {
    check_edge(e);
    fwd(e.pair).set(e.i, e.j);
    rev(e.pair).set(e.j, e.i);
  }

  bool has_edge(EdgeRef e) const {
    check_edge(e);
    return fwd(e.pair).test(e.i, e.j);
  }

  // Returns the number of edges actually deleted (duplicates and non-edges
  // contribute 0).
  i64 remove_edges(std::span<const EdgeRef> edges) {
    i64 removed = 0;
    for (const EdgeRef& e : edges) {
      check_edge(e);
      if (!fwd(e.pair).test(e.i, e.j)) continue;
      fwd(e.pair).reset(e.i, e.j);
      rev(e.pair).reset(e.j, e.i);
      ++removed;
    }
    return removed;
  }

  i64 edge_count(Pair p) const { return fwd(p).count(); }
  i64 edge_count() const { return edge_count(Pair::AB) + edge_count(Pair::BC) + edge_count(Pair::AC); }

  const BitMatrix& forward(Pair p) const { return fwd_[static_cast<size_t>(p)]; }
  const BitMatrix& reverse(Pair p) const { return rev_[static_cast<size_t>(p)]; }

  // New graph with C replaced by `keep` (re-indexed ascending); A-B edges are
  // retained, B-C and A-C edges restricted. The original is untouched.
  TripartiteGraph restrict_C(std::span<const i64> keep) const {
    std::vector<i64> k(keep.begin(), keep.end());
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    for (i64 c : k)
      if (c < 0 || c >= part_size(Part::C))
        throw std::invalid_argument("restrict_C: index " + std::to_string(c) + " out of range");
    i64 nc = static_cast<i64>(k.size());
    BitMatrix bc(part_size(Part::B), nc), ac(part_size(Part::A), nc);
    for (i64 jj = 0; jj < nc; ++jj) {
      i64 c = k[static_cast<size_t>(jj)];
      BitMatrix::for_each_set(reverse(Pair::BC).row(c), [&](i64 b) { bc.set(b, jj); });
      BitMatrix::for_each_set(reverse(Pair::AC).row(c), [&](i64 a) { ac.set(a, jj); });
    }
    std::optional<PartCoords> coords;
    if (has_coords_) {
      PartCoords pc;
      pc[0] = coords_[0];
      pc[1] = coords_[1];
      pc[2].reserve(static_cast<size_t>(nc));
      for (i64 c : k) pc[2].push_back(coords_[2][static_cast<size_t>(c)]);
      coords = std::move(pc);
    }
    return from_adjacency(BitMatrix(forward(Pair::AB)), std::move(bc), std::move(ac),
                          std::move(coords));
  }

  friend bool operator==(const TripartiteGraph& x, const TripartiteGraph& y) {
    return x.sizes_ == y.sizes_ && x.fwd_ == y.fwd_ && x.has_coords_ == y.has_coords_ &&
           x.coords_ == y.coords_;
  }

 private:
  std::array<i64, 3> sizes_{0, 0, 0};
  std::array<BitMatrix, 3> fwd_, rev_;
  bool has_coords_ = false;
  PartCoords coords_;

  BitMatrix& fwd(Pair p) { return fwd_[static_cast<size_t>(p)]; }
  const BitMatrix& fwd(Pair p) const { return fwd_[static_cast<size_t>(p)]; }
  BitMatrix& rev(Pair p) { return rev_[static_cast<size_t>(p)]; }
  const BitMatrix& rev(Pair p) const { return rev_[static_cast<size_t>(p)]; }

  void init(i64 na, i64 nb, i64 nc) {
    if (na < 0 || nb < 0 || nc < 0) throw std::invalid_argument("part sizes must be >= 0");
    sizes_ = {na, nb, nc};
    fwd_ = {BitMatrix(na, nb), BitMatrix(nb, nc), BitMatrix(na, nc)};
    rev_ = {BitMatrix(nb, na), BitMatrix(nc, nb), BitMatrix(nc, na)};
  }

  void attach_coords(PartCoords coords) {
    int d = -1;
    for (int p = 0; p < 3; ++p) {
      if (static_cast<i64>(coords[static_cast<size_t>(p)].size()) != sizes_[static_cast<size_t>(p)])
        throw std::invalid_argument("coordinate table length mismatch for part " +
                                    std::string(part_name(static_cast<Part>(p))));
      for (const auto& pt : coords[static_cast<size_t>(p)]) {
        if (d < 0) d = pt.dim();
        if (pt.dim() != d)
          throw std::invalid_argument("coordinate tables mix dimensions");
      }
    }
    coords_ = std::move(coords);
    has_coords_ = true;
  }

  void check_edge(EdgeRef e) const {
    i64 ni = part_size(pair_first(e.pair)), nj = part_size(pair_second(e.pair));
    if (e.i < 0 || e.i >= ni || e.j < 0 || e.j >= nj)
      throw std::invalid_argument("edge (" + std::string(pair_name(e.pair)) + " " +
                                  std::to_string(e.i) + " " + std::to_string(e.j) +
                                  ") out of range");
  }
};

// Count of third-part vertices completing e to a triangle. Does not check
// that e itself is an edge; analyze::triangles_on_edge adds that contract.
inline i64 common_third_count(const TripartiteGraph& g, EdgeRef e) {
  switch (e.pair) {
    case Pair::AB:
      return BitMatrix::and_count(g.forward(Pair::AC).row(e.i), g.forward(Pair::BC).row(e.j));
    case Pair::BC:
      return BitMatrix::and_count(g.reverse(Pair::AB).row(e.i), g.reverse(Pair::AC).row(e.j));
    default:
      return BitMatrix::and_count(g.forward(Pair::AB).row(e.i), g.reverse(Pair::BC).row(e.j));
  }
}

// Visits every edge of the pair in row-major forward order.
template <typename Fn>
void for_each_edge(const TripartiteGraph& g, Pair p, Fn&& fn) {
  const BitMatrix& m = g.forward(p);
  for (i64 i = 0; i < m.rows(); ++i)
    BitMatrix::for_each_set(m.row(i), [&](i64 j) { fn(EdgeRef{p, i, j}); });
}

}  // namespace bookgraph
