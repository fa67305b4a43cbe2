#include "distill/rng.hpp"

#include <limits>

namespace distill {

std::uint64_t bounded(Engine& engine, std::uint64_t n) {
  if (n <= 1) return 0;
  // 2^64 mod n, computed without 128-bit arithmetic.
  const std::uint64_t rem = (std::numeric_limits<std::uint64_t>::max() % n + 1) % n;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - rem;
  // Accept w in [0, limit], i.e. the first 2^64 - rem values.
  for (;;) {
    const std::uint64_t w = engine();
    if (w <= limit) return w % n;
  }
}

}  // namespace distill
