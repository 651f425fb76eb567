#pragma once

#include <string>
#include <vector>

#include "wattcast/power.hpp"
#include "wattcast/schedule.hpp"
#include "wattcast/trace.hpp"

namespace wattcast {

// Default slot size: min(0.1, min_p sigma_p / 4), keeping the additive
// rounding terms small relative to the instance scale.
double default_slot_size(const Trace& trace);

// Cuts every fractional interval into windows of length <= delta; within a
// window the pages served in that interval get consecutive sub-slots with
// durations proportional to their volumes (page-id order), each broadcast at
// the interval's full speed so per-page volume is conserved exactly. Interval
// boundaries (arrivals, completions) always land on slot boundaries.
SlotSequence serialize_slots(const FractionalSchedule& fs, const Trace& trace, double delta);

// The queue-of-tuples rounding: replays the fractional schedule's completions
// in slot order, keeps one tuple per pending page transmission (width = the
// minimum f - a over the requests it absorbs), always broadcasts the queued
// tuple of minimum width next, piece k at (1+eps') times the speed of the
// sourcing request's k-th slot, and on a transmission's last piece marks every
// request for the page that arrived at or before its start. `horizon` limits
// the replay to decisions at time <= horizon (used to exercise the online
// property); by default the whole schedule is rounded.
IntegralSchedule gen_rounding(const SlotSequence& slots, const Trace& trace,
                              const std::vector<double>& fractional_completion, double eps_prime,
                              double horizon = kInf);

struct StretchEntry {
  int request = 0;
  double flow_fractional = 0;  // f - a
  double flow_integral = 0;    // f^I - a
  double bound = 0;            // (1 + 2/eps')(f - a) + 5*delta/eps'
  bool ok = true;
};

struct RoundingReport {
  std::vector<StretchEntry> stretch;
  double max_stretch_slack = 0;  // max of flow_integral - bound (negative when fine)
  double energy_integral_nominal = 0;
  double energy_fractional = 0;
  int overlap_violations = 0;
  std::vector<std::string> violations;
  bool pass = false;

  std::string to_text() const;  // key=value lines plus one line per violation
};

// Certifies the reduction's guarantees on a rounded schedule: the per-request
// stretch bound, nominal-speed energy dominance, sequential pieces, the
// marking contract, slot-to-piece injectivity, and the same-page overlap
// property (later sourcing requests arrive after earlier sourcing requests'
// fractional finish).
RoundingReport verify_rounding(const FractionalSchedule& fs, const IntegralSchedule& is,
                               const Trace& trace, const PowerFunction& power, double eps_prime,
                               double delta);

}  // namespace wattcast
