#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

namespace distill {

enum class Benchmark {
  winogrande,
  openbookqa,
  mmlu_misc,
  squad,
  coqa,
  ifeval,
  aqua_rat,
  mmlu_math,
  mmlu_pro_math,
  gsm8k,
  math_500,
  aime,
};

enum class Category { general_mc, general_oe, math_mc, math_oe };

inline constexpr std::array<Benchmark, 12> kAllBenchmarks = {
    Benchmark::winogrande, Benchmark::openbookqa, Benchmark::mmlu_misc,
    Benchmark::squad,      Benchmark::coqa,       Benchmark::ifeval,
    Benchmark::aqua_rat,   Benchmark::mmlu_math,  Benchmark::mmlu_pro_math,
    Benchmark::gsm8k,      Benchmark::math_500,   Benchmark::aime};

inline constexpr std::array<Category, 4> kAllCategories = {
    Category::general_mc, Category::general_oe, Category::math_mc, Category::math_oe};

// Hyphenated names, e.g. "mmlu-pro-math".
std::string_view to_string(Benchmark b);
// "General-MC", "General-OE", "Math-MC", "Math-OE".
std::string_view to_string(Category c);

// Accepts hyphens or underscores. nullopt for unknown names.
std::optional<Benchmark> find_benchmark(std::string_view name);
// Throws UnknownBenchmark.
Benchmark parse_benchmark(std::string_view name);
Category parse_category(std::string_view name);

Category category_of(Benchmark b);
std::array<Benchmark, 3> benchmarks_in(Category c);

}  // namespace distill
