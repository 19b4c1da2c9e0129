#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace coalesce {

using Vertex = std::uint32_t;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Undirected edge, or a directed edge u -> v where the direction matters.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class ErrorCode {
  InvalidArgument,
  SameComponentMerge,
  DuplicateWeights,
  ZeroAdmissibleRate,
  WrongKernel,
  TruncatedRun,
  NonIntegralResult,
  UnsupportedSize,
  QuadratureFailure,
};

const char* to_string(ErrorCode code);

class CoalesceError : public std::runtime_error {
 public:
  CoalesceError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Number of unordered pairs from n items.
constexpr std::uint64_t choose2(std::uint64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

}  // namespace coalesce
