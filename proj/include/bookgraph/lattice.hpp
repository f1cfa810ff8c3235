#pragma once

// Exact lattice geometry: integer squared distances, the squared-distance
// windows with denominators cleared, ball volumes, lattice-point counts, and
// the concentration estimates built on them. Window predicates never touch
// floating point.

#include <atomic>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "bookgraph/common.hpp"
#include "bookgraph/rng.hpp"

namespace bookgraph {

using Coord = i64;

struct LatticePoint {
  std::vector<Coord> coords;

  LatticePoint() = default;
  explicit LatticePoint(std::vector<Coord> v) : coords(std::move(v)) {}
  LatticePoint(std::initializer_list<Coord> v) : coords(v) {}

  int dim() const { return static_cast<int>(coords.size()); }
  Coord operator[](int i) const { return coords[static_cast<size_t>(i)]; }
  Coord& operator[](int i) { return coords[static_cast<size_t>(i)]; }

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

inline i64 squared_distance(const LatticePoint& u, const LatticePoint& v) {
  if (u.dim() != v.dim())
    throw std::invalid_argument("squared_distance: dimension mismatch (" +
                                std::to_string(u.dim()) + " vs " + std::to_string(v.dim()) + ")");
  i64 s = 0;
  for (int i = 0; i < u.dim(); ++i) {
    i64 t = u[i] - v[i];
    s += t * t;
  }
  return s;
}

// All window bounds are held with denominators cleared: the A-B window
// constrains 6*dist2, the C windows constrain 24*dist2, both against
// mu6 = (r^2-1)*d (which is 6 times the mean squared distance).
struct ConstructionParams {
  i64 r = 2;
  i64 d = 1;
  i64 mu6 = 0;
  i64 ab_lo = 0, ab_hi = 0;  // bounds on 6*dist2
  i64 c_lo = 0, c_hi = 0;    // bounds on 24*dist2
  bool coupled = false;

  friend bool operator==(const ConstructionParams&, const ConstructionParams&) = default;
};

inline ConstructionParams make_params(i64 r, i64 d) {
  if (r < 1) throw std::invalid_argument("make_params: r must be >= 1");
  if (d < 1) throw std::invalid_argument("make_params: d must be >= 1");
  ConstructionParams p;
  p.r = r;
  p.d = d;
  p.mu6 = (r * r - 1) * d;
  p.ab_lo = p.mu6 - 6 * d;
  p.ab_hi = p.mu6 + 6 * d;
  p.c_lo = p.mu6 - 48 * d;
  p.c_hi = p.mu6 + 48 * d;
  return p;
}

inline bool in_ab_window(i64 dist2, const ConstructionParams& p) {
  auto s = static_cast<__int128>(dist2) * 6;
  return s >= p.ab_lo && s <= p.ab_hi;
}

inline bool in_c_window(i64 dist2, const ConstructionParams& p) {
  auto s = static_cast<__int128>(dist2) * 24;
  return s >= p.c_lo && s <= p.c_hi;
}

inline double log_ball_volume_exact(int d, double radius) {
  if (d < 2 || d % 2 != 0)
    throw std::invalid_argument("ball_volume_exact: dimension must be even and >= 2");
  if (!(radius > 0)) throw std::invalid_argument("ball_volume_exact: radius must be positive");
  double h = d / 2.0;
  return h * std::log(std::numbers::pi) + d * std::log(radius) - std::lgamma(h + 1.0);
}

// pi^{d/2} r^d / (d/2)! for even d. Overflows to +inf for d beyond double
// range; use the log variant there.
inline double ball_volume_exact(int d, double radius) {
  if (d < 2 || d % 2 != 0)
    throw std::invalid_argument("ball_volume_exact: dimension must be even and >= 2");
  if (!(radius > 0)) throw std::invalid_argument("ball_volume_exact: radius must be positive");
  double h = d / 2.0;
  return std::pow(std::numbers::pi, h) * std::pow(radius, d) / std::tgamma(h + 1.0);
}

inline double log_ball_volume_upper(int d, double radius) {
  if (d < 1) throw std::invalid_argument("ball_volume_upper: dimension must be >= 1");
  if (!(radius > 0)) throw std::invalid_argument("ball_volume_upper: radius must be positive");
  double h = d / 2.0;
  return h * std::log(2.0 * std::numbers::pi * std::numbers::e) + d * std::log(radius) -
         h * std::log(static_cast<double>(d));
}

// (2 pi e)^{d/2} r^d / d^{d/2}; strictly above the exact volume for even d.
inline double ball_volume_upper(int d, double radius) {
  return std::exp(log_ball_volume_upper(d, radius));
}

inline i64 isqrt(i64 v) {
  if (v < 0) throw std::invalid_argument("isqrt: negative input");
  auto r = static_cast<i64>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

// base^exp <= limit without overflow; result in out when true.
inline bool checked_pow(i64 base, i64 exp, i64 limit, i64& out) {
  i64 acc = 1;
  for (i64 k = 0; k < exp; ++k) {
    if (base != 0 && acc > limit / base) return false;
    acc *= base;
    if (acc > limit) return false;
  }
  out = acc;
  return true;
}

// Exact count of integer vectors w in Z^d with sum w_i^2 <= radius_sq, by
// depth-first enumeration with remaining-budget pruning. The cap bounds the
// visited node count (and the bounding box up front).
inline i64 count_lattice_points_in_ball(int d, i64 radius_sq, i64 node_cap = 1'000'000'000) {
  if (d < 1) throw std::invalid_argument("count_lattice_points_in_ball: dimension must be >= 1");
  if (radius_sq < 0)
    throw std::invalid_argument("count_lattice_points_in_ball: radius_sq must be >= 0");
  i64 side = 2 * isqrt(radius_sq) + 1;
  i64 box = 0;
  if (!checked_pow(side, d, node_cap, box))
    throw resource_error("count_lattice_points_in_ball: bounding box " + std::to_string(side) +
                         "^" + std::to_string(d) + " exceeds node cap " + std::to_string(node_cap));
  i64 visited = 0;
  auto dfs = [&](auto&& self, int level, i64 budget) -> i64 {
    if (++visited > node_cap)
      throw resource_error("count_lattice_points_in_ball: visited nodes exceed cap " +
                           std::to_string(node_cap));
    if (level == d) return 1;
    i64 k = isqrt(budget);
    i64 total = 0;
    for (i64 w = -k; w <= k; ++w) total += self(self, level + 1, budget - w * w);
    return total;
  };
  return dfs(dfs, 0, radius_sq);
}

// Two-sided tail bound 2 exp(-t^2 / (2 lip^2 n)) for a lip-Lipschitz variable
// over an n-coordinate product space.
inline double hoeffding_tail(double t, double lip, i64 n) {
  if (t < 0) throw std::invalid_argument("hoeffding_tail: t must be >= 0");
  if (!(lip > 0)) throw std::invalid_argument("hoeffding_tail: lip must be positive");
  if (n < 1) throw std::invalid_argument("hoeffding_tail: n must be >= 1");
  return 2.0 * std::exp(-(t * t) / (2.0 * lip * lip * static_cast<double>(n)));
}

// Draws `trials` independent point pairs uniform on [r]^d and returns the
// fraction whose squared distance falls outside the A-B window. Trial i uses
// its own counter stream, so the result depends only on (r, d, trials, seed).
inline double sample_distance_concentration(i64 r, i64 d, i64 trials, u64 seed, int threads = 1) {
  if (r < 1 || d < 1) throw std::invalid_argument("sample_distance_concentration: r, d must be >= 1");
  if (trials < 1) throw std::invalid_argument("sample_distance_concentration: trials must be >= 1");
  ConstructionParams p = make_params(r, d);
  std::atomic<i64> outside{0};
  parallel_for(trials, threads, [&](i64 b, i64 e) {
    i64 local = 0;
    for (i64 t = b; t < e; ++t) {
      SplitStream rng(seed, static_cast<u64>(t));
      i64 dist2 = 0;
      for (i64 i = 0; i < d; ++i) {
        i64 u = 1 + static_cast<i64>(rng.bounded(static_cast<u64>(r)));
        i64 v = 1 + static_cast<i64>(rng.bounded(static_cast<u64>(r)));
        i64 diff = u - v;
        dist2 += diff * diff;
      }
      if (!in_ab_window(dist2, p)) ++local;
    }
    outside += local;
  });
  return static_cast<double>(outside.load()) / static_cast<double>(trials);
}

// All points of {lo,...,hi}^d in lexicographic order, last coordinate fastest.
inline std::vector<LatticePoint> enumerate_box(Coord lo, Coord hi, int d, i64 cap) {
  if (hi < lo) throw std::invalid_argument("enumerate_box: empty range");
  if (d < 1) throw std::invalid_argument("enumerate_box: dimension must be >= 1");
  i64 side = hi - lo + 1;
  i64 total = 0;
  if (!checked_pow(side, d, cap, total))
    throw resource_error("enumerate_box: " + std::to_string(side) + "^" + std::to_string(d) +
                         " points exceed cap " + std::to_string(cap));
  std::vector<LatticePoint> pts;
  pts.reserve(static_cast<size_t>(total));
  LatticePoint cur;
  cur.coords.assign(static_cast<size_t>(d), lo);
  for (i64 k = 0; k < total; ++k) {
    pts.push_back(cur);
    for (int i = d - 1; i >= 0; --i) {
      if (cur[i] < hi) {
        ++cur[i];
        break;
      }
      cur[i] = lo;
    }
  }
  return pts;
}

}  // namespace bookgraph
