#pragma once

// Graph file formats.
//
// Text:    tripartite <nA> <nB> <nC>
//          coords <A|B|C> <d>          (optional; all three parts or none,
//          <d integers per line>        one vertex per line, before any edge)
//          <AB|BC|AC> <i> <j>          (one edge per line, 0-based)
//
// Binary:  magic "BKGR0001", sizes, optional coordinate tables, then the
//          three forward bitset families as little-endian 64-bit words.

#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "bookgraph/graph.hpp"

namespace bookgraph {

inline constexpr std::array<char, 8> kBinaryMagic = {'B', 'K', 'G', 'R', '0', '0', '0', '1'};

inline void write_text(const TripartiteGraph& g, std::ostream& os) {
  os << "tripartite " << g.part_size(Part::A) << ' ' << g.part_size(Part::B) << ' '
     << g.part_size(Part::C) << '\n';
  if (g.has_coords()) {
    for (Part p : kAllParts) {
      os << "coords " << part_name(p) << ' ' << g.coord_dim() << '\n';
      for (const LatticePoint& pt : g.coords(p)) {
        for (int i = 0; i < pt.dim(); ++i) os << (i ? " " : "") << pt[i];
        os << '\n';
      }
    }
  }
  for (Pair p : kAllPairs)
    for_each_edge(g, p, [&](EdgeRef e) { os << pair_name(p) << ' ' << e.i << ' ' << e.j << '\n'; });
}

inline std::string to_text(const TripartiteGraph& g) {
  std::ostringstream os;
  write_text(g, os);
  return os.str();
}

namespace detail {

inline bool next_line(std::istream& is, std::string& line, i64& lineno) {
  if (!std::getline(is, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  ++lineno;
  return true;
}

inline std::optional<Part> part_from_name(const std::string& s) {
  if (s == "A") return Part::A;
  if (s == "B") return Part::B;
  if (s == "C") return Part::C;
  return std::nullopt;
}

inline std::optional<Pair> pair_from_name(const std::string& s) {
  if (s == "AB") return Pair::AB;
  if (s == "BC") return Pair::BC;
  if (s == "AC") return Pair::AC;
  return std::nullopt;
}

}  // namespace detail

inline TripartiteGraph read_text(std::istream& is) {
  std::string line;
  i64 lineno = 0;
  if (!detail::next_line(is, line, lineno)) throw parse_error("empty input", 1);
  std::istringstream head(line);
  std::string tag;
  i64 na = -1, nb = -1, nc = -1;
  head >> tag >> na >> nb >> nc;
  if (tag != "tripartite" || head.fail() || na < 0 || nb < 0 || nc < 0)
    throw parse_error("expected header 'tripartite <nA> <nB> <nC>'", lineno);

  std::array<i64, 3> sizes = {na, nb, nc};
  PartCoords coords;
  std::array<bool, 3> have_coords = {false, false, false};
  bool saw_edge = false;
  std::vector<EdgeRef> edges;

  while (detail::next_line(is, line, lineno)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "coords") {
      if (saw_edge) throw parse_error("coords block after edge lines", lineno);
      std::string pname;
      i64 d = -1;
      ls >> pname >> d;
      auto part = detail::part_from_name(pname);
      if (!part || ls.fail() || d < 0)
        throw parse_error("expected 'coords <A|B|C> <d>'", lineno);
      auto pi = static_cast<size_t>(*part);
      if (have_coords[pi])
        throw parse_error("duplicate coords block for part " + pname, lineno);
      have_coords[pi] = true;
      coords[pi].reserve(static_cast<size_t>(sizes[pi]));
      for (i64 v = 0; v < sizes[pi]; ++v) {
        std::string pl;
        if (!detail::next_line(is, pl, lineno))
          throw parse_error("unexpected end of file inside coords block", lineno + 1);
        std::istringstream ps(pl);
        LatticePoint pt;
        pt.coords.reserve(static_cast<size_t>(d));
        for (i64 i = 0; i < d; ++i) {
          Coord c;
          ps >> c;
          if (ps.fail()) throw parse_error("expected " + std::to_string(d) + " coordinates", lineno);
          pt.coords.push_back(c);
        }
        std::string rest;
        if (ps >> rest) throw parse_error("trailing tokens after coordinates", lineno);
        coords[pi].push_back(std::move(pt));
      }
    } else if (auto pr = detail::pair_from_name(kw)) {
      i64 i = -1, j = -1;
      ls >> i >> j;
      if (ls.fail()) throw parse_error("expected '" + kw + " <i> <j>'", lineno);
      std::string rest;
      if (ls >> rest) throw parse_error("trailing tokens after edge", lineno);
      i64 ni = sizes[static_cast<size_t>(pair_first(*pr))];
      i64 nj = sizes[static_cast<size_t>(pair_second(*pr))];
      if (i < 0 || i >= ni || j < 0 || j >= nj)
        throw parse_error("edge index out of range", lineno);
      edges.push_back(EdgeRef{*pr, i, j});
      saw_edge = true;
    } else {
      throw parse_error("unknown directive '" + kw + "'", lineno);
    }
  }

  int provided = static_cast<int>(have_coords[0]) + have_coords[1] + have_coords[2];
  if (provided != 0 && provided != 3)
    throw parse_error("coords blocks must cover all three parts or none");
  TripartiteGraph g;
  try {
    g = provided == 3 ? TripartiteGraph(na, nb, nc, std::move(coords))
                      : TripartiteGraph(na, nb, nc);
  } catch (const std::invalid_argument& e) {
    throw parse_error(e.what());
  }
  for (EdgeRef e : edges) g.add_edge(e);
  return g;
}

namespace detail {

inline void put_u64(std::ostream& os, u64 v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 8);
}

inline u64 get_u64(std::istream& is) {
  char b[8];
  is.read(b, 8);
  if (is.gcount() != 8) throw parse_error("unexpected end of binary stream");
  u64 v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<u64>(static_cast<unsigned char>(b[i])) << (8 * i);
  return v;
}

}  // namespace detail

inline void write_binary(const TripartiteGraph& g, std::ostream& os) {
  os.write(kBinaryMagic.data(), kBinaryMagic.size());
  detail::put_u64(os, static_cast<u64>(g.part_size(Part::A)));
  detail::put_u64(os, static_cast<u64>(g.part_size(Part::B)));
  detail::put_u64(os, static_cast<u64>(g.part_size(Part::C)));
  detail::put_u64(os, g.has_coords() ? 1 : 0);
  if (g.has_coords()) {
    detail::put_u64(os, static_cast<u64>(g.coord_dim()));
    for (Part p : kAllParts)
      for (const LatticePoint& pt : g.coords(p))
        for (int i = 0; i < pt.dim(); ++i) detail::put_u64(os, static_cast<u64>(pt[i]));
  }
  for (Pair p : kAllPairs) {
    const BitMatrix& m = g.forward(p);
    detail::put_u64(os, static_cast<u64>(m.raw_words().size()));
    for (u64 w : m.raw_words()) detail::put_u64(os, w);
  }
}

inline std::string to_binary(const TripartiteGraph& g) {
  std::ostringstream os(std::ios::binary);
  write_binary(g, os);
  return os.str();
}

inline TripartiteGraph read_binary(std::istream& is) {
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  if (is.gcount() != 8 || magic != kBinaryMagic)
    throw parse_error("bad magic; not a bookgraph binary file");
  auto na = static_cast<i64>(detail::get_u64(is));
  auto nb = static_cast<i64>(detail::get_u64(is));
  auto nc = static_cast<i64>(detail::get_u64(is));
  if (na < 0 || nb < 0 || nc < 0) throw parse_error("negative part size");
  u64 hasc = detail::get_u64(is);
  if (hasc > 1) throw parse_error("bad coords flag");
  std::optional<PartCoords> coords;
  if (hasc) {
    auto d = static_cast<i64>(detail::get_u64(is));
    if (d < 0 || d > 1'000'000) throw parse_error("implausible coordinate dimension");
    PartCoords pc;
    std::array<i64, 3> sizes = {na, nb, nc};
    for (int p = 0; p < 3; ++p) {
      pc[static_cast<size_t>(p)].reserve(static_cast<size_t>(sizes[static_cast<size_t>(p)]));
      for (i64 v = 0; v < sizes[static_cast<size_t>(p)]; ++v) {
        LatticePoint pt;
        pt.coords.reserve(static_cast<size_t>(d));
        for (i64 i = 0; i < d; ++i) pt.coords.push_back(static_cast<Coord>(detail::get_u64(is)));
        pc[static_cast<size_t>(p)].push_back(std::move(pt));
      }
    }
    coords = std::move(pc);
  }
  std::array<std::array<i64, 2>, 3> shapes = {{{na, nb}, {nb, nc}, {na, nc}}};
  std::array<BitMatrix, 3> fwd;
  for (int p = 0; p < 3; ++p) {
    BitMatrix m(shapes[static_cast<size_t>(p)][0], shapes[static_cast<size_t>(p)][1]);
    u64 nwords = detail::get_u64(is);
    if (nwords != m.raw_words().size())
      throw parse_error("bitset word count mismatch for pair " +
                        std::string(pair_name(static_cast<Pair>(p))));
    for (u64& w : m.raw_words()) w = detail::get_u64(is);
    if (!m.tail_clean())
      throw parse_error("stray bits beyond column range in pair " +
                        std::string(pair_name(static_cast<Pair>(p))));
    fwd[static_cast<size_t>(p)] = std::move(m);
  }
  return TripartiteGraph::from_adjacency(std::move(fwd[0]), std::move(fwd[1]), std::move(fwd[2]),
                                         std::move(coords));
}

// Sniffs the magic to pick the format.
inline TripartiteGraph load_graph(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw parse_error("cannot open '" + path + "'");
  std::array<char, 8> head{};
  f.read(head.data(), head.size());
  bool binary = f.gcount() == 8 && head == kBinaryMagic;
  f.clear();
  f.seekg(0);
  return binary ? read_binary(f) : read_text(f);
}

inline void save_graph(const TripartiteGraph& g, const std::string& path, bool binary) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  if (binary)
    write_binary(g, f);
  else
    write_text(g, f);
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace bookgraph
