#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kspdg {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using SubgraphId = std::uint32_t;
using PathId = std::uint32_t;

/// Distances and weights are fixed-point milli-units so every comparison
/// between a bound and an actual distance is exact.
using Weight = std::int64_t;

inline constexpr Weight kMilli = 1000;
inline constexpr Weight kInfinity = std::numeric_limits<Weight>::max() / 4;
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();
inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

/// Formats a milli-unit value as a decimal with three fractional digits.
inline std::string format_weight(Weight w) {
  if (w >= kInfinity) return "inf";
  std::string sign = w < 0 ? "-" : "";
  Weight a = w < 0 ? -w : w;
  std::string frac = std::to_string(a % kMilli);
  while (frac.size() < 3) frac.insert(frac.begin(), '0');
  return sign + std::to_string(a / kMilli) + "." + frac;
}

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

/// Unordered vertex pair stored with first < second.
struct VertexPair {
  VertexId first = kNoVertex;
  VertexId second = kNoVertex;

  VertexPair() = default;
  VertexPair(VertexId a, VertexId b) : first(a < b ? a : b), second(a < b ? b : a) {}

  friend auto operator<=>(const VertexPair&, const VertexPair&) = default;
};

}  // namespace kspdg
