#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace distill {

// Transformer dimensions consumed by the FLOPs formulas. Heads need not
// divide d_model; attention is always costed as plain multi-head.
struct ModelGeometry {
  std::string name;
  std::uint64_t vocab_size = 1;
  std::uint64_t d_model = 1;
  std::uint64_t d_ff = 1;
  std::uint64_t n_heads = 1;
  std::uint64_t n_layers = 0;  // zero is allowed

  bool operator==(const ModelGeometry&) const = default;
};

// Lengths for one training sample or one generation request.
struct SequenceProfile {
  std::uint64_t seq_len = 0;
  std::uint64_t prompt_len = 0;
  std::uint64_t gen_len = 0;
  std::uint64_t n_samples = 1;
};

// Parses a flat document with vocab_size, d_model, d_ff, n_heads, n_layers
// and an optional name. Unknown keys are reported through `warnings`.
ModelGeometry load_geometry(const nlohmann::json& doc,
                            std::vector<std::string>* warnings = nullptr);

ModelGeometry load_geometry_file(const std::filesystem::path& path,
                                 std::vector<std::string>* warnings = nullptr);

nlohmann::json to_json(const ModelGeometry& g);

}  // namespace distill
