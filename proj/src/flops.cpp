#include "distill/flops.hpp"

#include <algorithm>

#include "distill/error.hpp"

namespace distill {

using u128 = FlopCount::value_type;

std::string FlopCount::to_string() const {
  if (value_ == 0) return "0";
  std::string digits;
  for (u128 v = value_; v != 0; v /= 10) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

namespace {

// Per-layer attention cost for `len` query positions attending over `len`
// keys. Shared by the forward and prefill formulas.
u128 attention_block(const ModelGeometry& g, u128 len) {
  const u128 d = g.d_model;
  const u128 h = g.n_heads;
  return 6 * len * d * d + 2 * len * len * d + 3 * len * len * h +
         2 * len * len * d + 2 * len * d * d;
}

u128 feed_forward(const ModelGeometry& g, u128 len) {
  return 4 * len * u128{g.d_model} * g.d_ff * g.n_layers;
}

// Cached decode cost that does not depend on the context length.
u128 cached_constant(const ModelGeometry& g) {
  const u128 d = g.d_model;
  const u128 v = g.vocab_size;
  return 2 * d * v + u128{g.n_layers} * (6 * d * d + 2 * d * d) +
         4 * d * g.d_ff * g.n_layers + 2 * d * v;
}

// Coefficient of ctx_len in the cached decode cost.
u128 cached_slope(const ModelGeometry& g) {
  return u128{g.n_layers} * (2 * u128{g.d_model} + 3 * u128{g.n_heads} +
                             2 * u128{g.d_model});
}

}  // namespace

FlopCount forward_flops(const ModelGeometry& g, std::uint64_t len) {
  const u128 l = len;
  const u128 dv = u128{g.d_model} * g.vocab_size;
  const u128 embeddings = 2 * l * dv;
  const u128 attention = attention_block(g, l) * g.n_layers;
  const u128 logits = 2 * l * dv;
  return FlopCount(embeddings + attention + feed_forward(g, l) + logits);
}

FlopCount training_step_flops(const ModelGeometry& g, std::uint64_t len) {
  return forward_flops(g, len) * 3;
}

FlopCount training_total_flops(const ModelGeometry& g,
                               std::span<const std::uint64_t> lengths) {
  if (lengths.empty()) throw Error(Errc::EmptyLengths, "no sequence lengths");
  FlopCount total;
  for (auto len : lengths) total += training_step_flops(g, len);
  return total;
}

FlopCount prefill_flops(const ModelGeometry& g, std::uint64_t prompt_len) {
  const u128 l = prompt_len;
  const u128 dv = u128{g.d_model} * g.vocab_size;
  const u128 embeddings = 2 * l * dv;
  const u128 attention = attention_block(g, l) * g.n_layers;
  // Only the last position's logits are needed.
  const u128 logits = 2 * dv;
  return FlopCount(embeddings + attention + feed_forward(g, l) + logits);
}

FlopCount cached_token_flops(const ModelGeometry& g, std::uint64_t ctx_len) {
  return FlopCount(cached_constant(g) + cached_slope(g) * ctx_len);
}

FlopCount generation_flops(const ModelGeometry& g, std::uint64_t prompt_len,
                           std::uint64_t gen_len) {
  if (prompt_len == 0) {
    throw Error(Errc::InvalidArgument, "generation requires prompt_len >= 1");
  }
  const u128 n = gen_len;
  // sum_{i=1..n} (prompt_len + i)
  const u128 ctx_sum = n * prompt_len + n * (n + 1) / 2;
  const u128 decode = n * cached_constant(g) + cached_slope(g) * ctx_sum;
  return prefill_flops(g, prompt_len) + FlopCount(decode);
}

FlopCount generation_flops_by_summation(const ModelGeometry& g,
                                        std::uint64_t prompt_len,
                                        std::uint64_t gen_len) {
  if (prompt_len == 0) {
    throw Error(Errc::InvalidArgument, "generation requires prompt_len >= 1");
  }
  FlopCount total = prefill_flops(g, prompt_len);
  for (std::uint64_t i = 1; i <= gen_len; ++i) {
    total += cached_token_flops(g, prompt_len + i);
  }
  return total;
}

}  // namespace distill
