#include "distill/benchmarks.hpp"

#include <string>

#include "distill/error.hpp"

namespace distill {

std::string_view to_string(Benchmark b) {
  switch (b) {
    case Benchmark::winogrande: return "winogrande";
    case Benchmark::openbookqa: return "openbookqa";
    case Benchmark::mmlu_misc: return "mmlu-misc";
    case Benchmark::squad: return "squad";
    case Benchmark::coqa: return "coqa";
    case Benchmark::ifeval: return "ifeval";
    case Benchmark::aqua_rat: return "aqua-rat";
    case Benchmark::mmlu_math: return "mmlu-math";
    case Benchmark::mmlu_pro_math: return "mmlu-pro-math";
    case Benchmark::gsm8k: return "gsm8k";
    case Benchmark::math_500: return "math-500";
    case Benchmark::aime: return "aime";
  }
  return "?";
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::general_mc: return "General-MC";
    case Category::general_oe: return "General-OE";
    case Category::math_mc: return "Math-MC";
    case Category::math_oe: return "Math-OE";
  }
  return "?";
}

std::optional<Benchmark> find_benchmark(std::string_view name) {
  std::string norm(name);
  for (auto& ch : norm) {
    if (ch == '_') ch = '-';
  }
  for (auto b : kAllBenchmarks) {
    if (to_string(b) == norm) return b;
  }
  return std::nullopt;
}

Benchmark parse_benchmark(std::string_view name) {
  if (auto b = find_benchmark(name)) return *b;
  throw Error(Errc::UnknownBenchmark, std::string(name));
}

Category parse_category(std::string_view name) {
  for (auto c : kAllCategories) {
    if (to_string(c) == name) return c;
  }
  throw Error(Errc::InvalidArgument, "unknown category '" + std::string(name) + "'");
}

Category category_of(Benchmark b) {
  switch (b) {
    case Benchmark::winogrande:
    case Benchmark::openbookqa:
    case Benchmark::mmlu_misc:
      return Category::general_mc;
    case Benchmark::squad:
    case Benchmark::coqa:
    case Benchmark::ifeval:
      return Category::general_oe;
    case Benchmark::aqua_rat:
    case Benchmark::mmlu_math:
    case Benchmark::mmlu_pro_math:
      return Category::math_mc;
    case Benchmark::gsm8k:
    case Benchmark::math_500:
    case Benchmark::aime:
      return Category::math_oe;
  }
  return Category::general_mc;
}

std::array<Benchmark, 3> benchmarks_in(Category c) {
  std::array<Benchmark, 3> out{};
  std::size_t n = 0;
  for (auto b : kAllBenchmarks) {
    if (category_of(b) == c) out[n++] = b;
  }
  return out;
}

}  // namespace distill
