#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "wattcast/trace.hpp"

namespace wattcast {

// One piecewise-constant stretch of a fractional schedule. Maps hold only
// nonzero entries; an idle interval has empty maps.
struct RateInterval {
  double t0 = 0;
  double t1 = 0;
  std::map<int, double> page_rate;     // page index -> aggregate broadcast rate
  std::map<int, double> contribution;  // request id -> x_{p,i}

  double length() const { return t1 - t0; }
  double total_rate() const;
};

// Piecewise-constant per-page broadcast rates with per-request contributions
// and completion times. Intervals partition [0, makespan]. `augmentation`
// records the resource-augmentation factor of the producing policy (1 for
// reference schedules); augmented accounting charges P(rate/augmentation).
struct FractionalSchedule {
  std::vector<RateInterval> intervals;
  std::vector<double> completion;  // per request id; NaN when never satisfied
  double eps = 0;
  double beta = 0;
  double augmentation = 1;

  double makespan() const { return intervals.empty() ? 0.0 : intervals.back().t1; }
  bool complete() const;

  double page_rate_at(double t, int page) const;
  double total_rate_at(double t) const;

  // Integral of this page's rate over [a, b] (exact; rates are constant per
  // interval).
  double page_volume(int page, double a, double b) const;
  // Integral of one request's contribution over [a, b].
  double contribution_volume(int request, double a, double b) const;
};

// Checks the schedule against its trace: interval continuity, per-page rate =
// sum of contributions where contributions are present, and for every
// completed request `integral of page rate over [arrival, completion] ==
// sigma`. Returns human-readable violations (empty means clean).
std::vector<std::string> check_fractional_invariants(const FractionalSchedule& fs, const Trace& trace,
                                                     double tol);

std::string emit_schedule(const FractionalSchedule& fs, const Trace& trace);
FractionalSchedule parse_schedule(const std::string& text, const Trace& trace);

// Simulator event log entry; formatted per line as
// `t=<time> kind=<arrival|completion> request=<id> |Na|=<n> speed=<s>`.
struct SimEvent {
  enum class Kind { Arrival, Completion };
  double t = 0;
  Kind kind = Kind::Arrival;
  int request = 0;
  int na_after = 0;
  double speed_after = 0;
};

std::string format_event(const SimEvent& ev);

// Serialized single-page micro-slot: the transmitter serves exactly one page
// per slot at the interval's full speed; volume = speed * duration.
struct Slot {
  double start = 0;
  double duration = 0;
  int page = 0;
  double speed = 0;
  double volume = 0;
};

using SlotSequence = std::vector<Slot>;

struct Piece {
  int page = 0;
  int k = 0;  // 1-based piece index within its transmission
  double start = 0;
  double duration = 0;  // actual (augmented) duration
  double speed = 0;     // actual (augmented) speed
  double volume = 0;
  int transmission = 0;
  int slot_index = -1;  // global index of the fractional slot this piece maps to
};

struct Transmission {
  int page = 0;
  int sourcing_request = 0;
  double width = 0;
  double start = 0;  // b: start of the first piece
  double end = 0;
  int pieces = 0;
};

struct IntegralSchedule {
  std::vector<Piece> pieces;
  std::vector<Transmission> transmissions;
  std::vector<double> completion;    // f^I per request id; NaN when never satisfied
  std::vector<int> satisfied_by;     // transmission index per request; -1 when unsatisfied
  double eps_prime = 1;
  double delta = 0;

  bool complete() const;
};

std::string emit_integral(const IntegralSchedule& is, const Trace& trace);

constexpr double kNoTime = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace wattcast
