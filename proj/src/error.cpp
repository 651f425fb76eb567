#include "wattcast/error.hpp"

namespace wattcast {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NonZeroAtOrigin: return "NonZeroAtOrigin";
    case Errc::NotIncreasing: return "NotIncreasing";
    case Errc::NotConvex: return "NotConvex";
    case Errc::EmptyTable: return "EmptyTable";
    case Errc::SpeedAboveCap: return "SpeedAboveCap";
    case Errc::PowerAboveCapRange: return "PowerAboveCapRange";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownPage: return "UnknownPage";
    case Errc::NonPositiveSize: return "NonPositiveSize";
    case Errc::NegativeArrival: return "NegativeArrival";
    case Errc::ZeroWeight: return "ZeroWeight";
    case Errc::EmptyQueue: return "EmptyQueue";
    case Errc::NoPendingEvents: return "NoPendingEvents";
    case Errc::SpeedCapExceeded: return "SpeedCapExceeded";
    case Errc::IncompleteSchedule: return "IncompleteSchedule";
    case Errc::NotOutstanding: return "NotOutstanding";
    case Errc::InfeasibleReference: return "InfeasibleReference";
    case Errc::BetaMismatch: return "BetaMismatch";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::HorizonTooShort: return "HorizonTooShort";
    case Errc::InconsistentSlots: return "InconsistentSlots";
    case Errc::MismatchedTraces: return "MismatchedTraces";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace wattcast
