#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace bookgraph {

using i64 = std::int64_t;
using u64 = std::uint64_t;

inline constexpr std::string_view kToolVersion = "0.1.0";

// A configured cap or budget was exceeded (enumeration size, visited nodes,
// oracle iterations). Distinct from invalid input so callers can map it to
// its own exit code.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed graph or report file. Carries the 1-based line number when known.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, i64 line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit parse_error(const std::string& what) : std::runtime_error(what), line_(-1) {}
  i64 line() const { return line_; }

 private:
  i64 line_ = -1;
};

// Runs fn(begin, end) over contiguous chunks of [0, n). fn must produce
// results that do not depend on chunk boundaries; everything built on this
// stays identical across thread counts.
template <typename Fn>
void parallel_for(i64 n, int threads, Fn&& fn) {
  if (n <= 0) return;
  if (threads <= 1 || n < 2) {
    fn(i64{0}, n);
    return;
  }
  int workers = static_cast<int>(std::min<i64>(threads, n));
  i64 chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int t = 0; t < workers; ++t) {
    i64 b = t * chunk;
    i64 e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace bookgraph
