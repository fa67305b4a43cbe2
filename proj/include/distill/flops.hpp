#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>

#include "distill/geometry.hpp"

namespace distill {

// Exact floating-point-operation count. Backed by a 128-bit unsigned
// integer; only converted to floating point at the reporting boundary.
class FlopCount {
 public:
  using value_type = unsigned __int128;

  constexpr FlopCount() = default;
  constexpr explicit FlopCount(value_type v) : value_(v) {}

  constexpr value_type value() const { return value_; }
  double to_double() const { return static_cast<double>(value_); }
  // Decimal digits, no sign, no separators.
  std::string to_string() const;

  constexpr FlopCount& operator+=(FlopCount o) {
    value_ += o.value_;
    return *this;
  }
  friend constexpr FlopCount operator+(FlopCount a, FlopCount b) {
    return FlopCount(a.value_ + b.value_);
  }
  friend constexpr FlopCount operator-(FlopCount a, FlopCount b) {
    return FlopCount(a.value_ - b.value_);
  }
  friend constexpr FlopCount operator*(FlopCount a, std::uint64_t k) {
    return FlopCount(a.value_ * k);
  }
  friend constexpr bool operator==(FlopCount a, FlopCount b) {
    return a.value_ == b.value_;
  }
  friend constexpr std::strong_ordering operator<=>(FlopCount a, FlopCount b) {
    return a.value_ < b.value_    ? std::strong_ordering::less
           : a.value_ > b.value_ ? std::strong_ordering::greater
                                 : std::strong_ordering::equal;
  }

 private:
  value_type value_ = 0;
};

// Full forward pass over a sequence of length `len`.
FlopCount forward_flops(const ModelGeometry& g, std::uint64_t len);

// Forward + backward, charged as three forward passes.
FlopCount training_step_flops(const ModelGeometry& g, std::uint64_t len);

// One step per sample (batch size 1). Throws EmptyLengths.
FlopCount training_total_flops(const ModelGeometry& g,
                               std::span<const std::uint64_t> lengths);

// Processing the whole prompt and emitting the first token's logits.
FlopCount prefill_flops(const ModelGeometry& g, std::uint64_t prompt_len);

// One decoded token with keys/values for `ctx_len` positions cached.
FlopCount cached_token_flops(const ModelGeometry& g, std::uint64_t ctx_len);

// Prefill plus `gen_len` cached decode steps at contexts prompt_len+1 ..
// prompt_len+gen_len. Uses the arithmetic-series closed form.
// Requires prompt_len >= 1.
FlopCount generation_flops(const ModelGeometry& g, std::uint64_t prompt_len,
                           std::uint64_t gen_len);

// Same quantity as generation_flops, summed token by token.
FlopCount generation_flops_by_summation(const ModelGeometry& g,
                                        std::uint64_t prompt_len,
                                        std::uint64_t gen_len);

}  // namespace distill
