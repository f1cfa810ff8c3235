#pragma once

#include "bookgraph/common.hpp"

namespace bookgraph {

inline constexpr u64 kGamma = 0x9e3779b97f4a7c15ull;

// splitmix64 finalizer; full avalanche on 64 bits.
inline constexpr u64 mix64(u64 x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

// Counter-based stream: output i is a pure function of (seed, stream, i).
// Work partitioned by stream id needs no shared generator state, so results
// are independent of thread count and execution order.
class SplitStream {
 public:
  SplitStream(u64 seed, u64 stream) : base_(mix64(seed ^ mix64(stream + kGamma))) {}

  u64 next() { return mix64(base_ + ++ctr_ * kGamma); }

  // Uniform over [0, n); exact (multiply-shift with rejection on the short range).
  u64 bounded(u64 n) {
    auto m = static_cast<unsigned __int128>(next()) * n;
    auto lo = static_cast<u64>(m);
    if (lo < n) {
      u64 t = (0 - n) % n;
      while (lo < t) {
        m = static_cast<unsigned __int128>(next()) * n;
        lo = static_cast<u64>(m);
      }
    }
    return static_cast<u64>(m >> 64);
  }

 private:
  u64 base_;
  u64 ctr_ = 0;
};

}  // namespace bookgraph
