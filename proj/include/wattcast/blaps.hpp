#pragma once

#include <map>
#include <optional>
#include <vector>

#include "wattcast/config.hpp"
#include "wattcast/power.hpp"
#include "wattcast/schedule.hpp"
#include "wattcast/trace.hpp"

namespace wattcast {

struct OutstandingRequest {
  int id = 0;
  int page = 0;
  double arrival = 0;
  double residual = 0;  // sigma_p minus volume of the page broadcast since arrival
};

// Queue sorted ascending by request id, which equals (arrival, id) order.
struct SimState {
  double now = 0;
  std::vector<OutstandingRequest> queue;
};

// Rate share per request: the floor(beta*|Na|) latest-arriving requests each
// get (1+6eps)Q(|Na|)/(beta*|Na|); when beta*|Na| is non-integral the one
// boundary request gets the fractional remainder of that share. The shares
// always sum to (1+6eps)Q(|Na|).
std::map<int, double> active_rates(const SimState& state, const Config& cfg, const SpeedInverse& q);

struct NextEvent {
  double t = 0;
  SimEvent::Kind kind = SimEvent::Kind::Arrival;
};

// Earliest of the next arrival and the next completion under the given
// shares; exact ties resolve to the completion.
NextEvent next_event(const SimState& state, const std::map<int, double>& request_rates,
                     std::optional<double> next_arrival);

struct SimResult {
  FractionalSchedule schedule;
  std::vector<SimEvent> events;
};

// Event-driven exact simulation: |Na(t)| is piecewise constant, so rates are
// piecewise constant and every completion time is closed-form.
SimResult simulate(const Trace& trace, const PowerFunction& power, const Config& cfg);

}  // namespace wattcast
