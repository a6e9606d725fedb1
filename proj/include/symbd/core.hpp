#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace symbd {

enum class ErrorKind {
  NumericalBreakdown,
  UnknownHandle,
  MalformedModel,
  TooManySlots,
  ColorClash,
  NonTransitiveRelation,
  TooLarge,
  UnknownItem,
  MissingBlock,
  SubproblemUnbounded,
  EmptyInput,
  BadInput,
};

struct Error : std::runtime_error {
  ErrorKind kind;
  Error(ErrorKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

// Instance data is fixed-point (at most a few decimals), so numeric equality
// is decided on a scaled integer key. Safe for |v| < 9e12.
inline std::int64_t numeric_key(double v) { return std::llround(v * 1e6); }

constexpr double kFeasTol = 1e-7;   // LP feasibility
constexpr double kPivotTol = 1e-9;  // simplex pivot magnitude
constexpr double kIntTol = 1e-6;    // integrality in branch and cut
constexpr double kCutTol = 1e-6;    // cut violation threshold

}  // namespace symbd
