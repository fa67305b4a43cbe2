#include "distill/error.hpp"

namespace distill {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::MissingKey: return "MissingKey";
    case Errc::NonPositiveDimension: return "NonPositiveDimension";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
    case Errc::EmptyLengths: return "EmptyLengths";
    case Errc::DuplicateIds: return "DuplicateIds";
    case Errc::MissingAnswer: return "MissingAnswer";
    case Errc::RhoOutOfRange: return "RhoOutOfRange";
    case Errc::StepOutOfRange: return "StepOutOfRange";
    case Errc::InvalidSchedule: return "InvalidSchedule";
    case Errc::UnknownBenchmark: return "UnknownBenchmark";
    case Errc::MissingGroundTruth: return "MissingGroundTruth";
    case Errc::EndpointUnreachable: return "EndpointUnreachable";
    case Errc::MalformedResponse: return "MalformedResponse";
    case Errc::EmptyRecordSet: return "EmptyRecordSet";
    case Errc::MissingVerdict: return "MissingVerdict";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::NoFeasibleFit: return "NoFeasibleFit";
    case Errc::NonPositiveCoordinate: return "NonPositiveCoordinate";
    case Errc::DegenerateX: return "DegenerateX";
    case Errc::BenchmarkMismatch: return "BenchmarkMismatch";
    case Errc::ZeroIftLength: return "ZeroIftLength";
    case Errc::MissingTokenCounts: return "MissingTokenCounts";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

}  // namespace distill
