#pragma once

#include <stdexcept>
#include <string>

namespace wattcast {

enum class Errc {
  // power-function validation
  NonZeroAtOrigin,
  NotIncreasing,
  NotConvex,
  EmptyTable,
  SpeedAboveCap,
  PowerAboveCapRange,
  // trace parsing
  SyntaxError,
  UnknownPage,
  NonPositiveSize,
  NegativeArrival,
  ZeroWeight,
  // simulation
  EmptyQueue,
  NoPendingEvents,
  SpeedCapExceeded,
  // analysis
  IncompleteSchedule,
  NotOutstanding,
  InfeasibleReference,
  BetaMismatch,
  BudgetExceeded,
  HorizonTooShort,
  // rounding
  InconsistentSlots,
  MismatchedTraces,
  // generic
  InvalidArgument,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& detail) { throw Error(code, detail); }

}  // namespace wattcast
