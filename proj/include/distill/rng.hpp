#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace distill {

// Identifier recorded in manifests. mt19937_64 output is fixed by the C++
// standard; the bounded draw and shuffle below are ours (std::shuffle and
// std::uniform_int_distribution are implementation-defined), so the full
// permutation is reproducible across toolchains and languages.
//
//   bounded(n): draw w = engine() until w < limit, where
//               limit = 2^64 - (2^64 mod n); return w mod n.
//   shuffle(v): for i = size-1 down to 1: swap(v[i], v[bounded(i+1)]).
inline constexpr std::string_view kPrngId =
    "mt19937_64/fisher-yates-rejection/v1";

using Engine = std::mt19937_64;

std::uint64_t bounded(Engine& engine, std::uint64_t n);

template <class T>
void seeded_shuffle(std::vector<T>& values, Engine& engine) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(bounded(engine, i));
    using std::swap;
    swap(values[i - 1], values[j]);
  }
}

}  // namespace distill
