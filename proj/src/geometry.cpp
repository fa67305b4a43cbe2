#include "distill/geometry.hpp"

#include <array>
#include <fstream>
#include <string_view>

#include "distill/error.hpp"

namespace distill {

namespace {

constexpr std::array<std::string_view, 5> kDimensionKeys = {
    "vocab_size", "d_model", "d_ff", "n_heads", "n_layers"};

std::uint64_t read_dimension(const nlohmann::json& doc, std::string_view key,
                             bool allow_zero) {
  const std::string k(key);
  if (!doc.contains(k)) throw Error(Errc::MissingKey, k);
  const auto& v = doc.at(k);
  if (v.is_number_integer()) {
    // Parsed non-negative numbers are unsigned, but ones built in code are signed.
    if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
      throw Error(Errc::NonPositiveDimension,
                  k + "=" + std::to_string(v.get<std::int64_t>()));
    }
    const auto value = v.get<std::uint64_t>();
    if (value == 0 && !allow_zero) {
      throw Error(Errc::NonPositiveDimension, k + "=0");
    }
    return value;
  }
  throw Error(Errc::InvalidArgument, k + " must be an integer, got " + v.dump());
}

}  // namespace

ModelGeometry load_geometry(const nlohmann::json& doc,
                            std::vector<std::string>* warnings) {
  if (!doc.is_object()) {
    throw Error(Errc::ParseError, "geometry document must be an object");
  }
  ModelGeometry g;
  g.vocab_size = read_dimension(doc, "vocab_size", false);
  g.d_model = read_dimension(doc, "d_model", false);
  g.d_ff = read_dimension(doc, "d_ff", false);
  g.n_heads = read_dimension(doc, "n_heads", false);
  g.n_layers = read_dimension(doc, "n_layers", true);
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) {
      throw Error(Errc::InvalidArgument, "name must be a string");
    }
    g.name = doc["name"].get<std::string>();
  }

  for (const auto& [key, _] : doc.items()) {
    bool known = key == "name";
    for (auto k : kDimensionKeys) known = known || key == k;
    if (!known && warnings != nullptr) {
      warnings->push_back("ignoring unknown geometry key '" + key + "'");
    }
  }
  return g;
}

ModelGeometry load_geometry_file(const std::filesystem::path& path,
                                 std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, path.string() + ": " + e.what());
  }
  return load_geometry(doc, warnings);
}

nlohmann::json to_json(const ModelGeometry& g) {
  nlohmann::json j;
  j["name"] = g.name;
  j["vocab_size"] = g.vocab_size;
  j["d_model"] = g.d_model;
  j["d_ff"] = g.d_ff;
  j["n_heads"] = g.n_heads;
  j["n_layers"] = g.n_layers;
  return j;
}

}  // namespace distill
