#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace distill {

enum class Errc {
  MissingKey,
  NonPositiveDimension,
  InvalidArgument,
  ParseError,
  IoError,
  EmptyLengths,
  DuplicateIds,
  MissingAnswer,
  RhoOutOfRange,
  StepOutOfRange,
  InvalidSchedule,
  UnknownBenchmark,
  MissingGroundTruth,
  EndpointUnreachable,
  MalformedResponse,
  EmptyRecordSet,
  MissingVerdict,
  EmptyInput,
  TooFewPoints,
  NoFeasibleFit,
  NonPositiveCoordinate,
  DegenerateX,
  BenchmarkMismatch,
  ZeroIftLength,
  MissingTokenCounts,
};

std::string_view to_string(Errc code);

// All library failures surface as this type; what() is "<Code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace distill
