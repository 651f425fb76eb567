#include "wattcast/blaps.hpp"

#include <algorithm>
#include <cmath>

#include "wattcast/numeric.hpp"

namespace wattcast {

namespace {

double completion_eps(double sigma) { return 1e-12 * std::max(1.0, sigma); }

std::map<int, double> page_rates_of(const SimState& state, const std::map<int, double>& request_rates) {
  std::map<int, double> page_rate;
  for (const OutstandingRequest& r : state.queue) {
    auto it = request_rates.find(r.id);
    if (it != request_rates.end() && it->second > 0) page_rate[r.page] += it->second;
  }
  return page_rate;
}

}  // namespace

std::map<int, double> active_rates(const SimState& state, const Config& cfg, const SpeedInverse& q) {
  if (state.queue.empty()) fail(Errc::EmptyQueue, "no outstanding requests");
  const double beta = cfg.beta_or_default();
  const size_t m = state.queue.size();
  const double bm = beta * double(m);
  size_t full;
  double frac;
  double nearest = std::round(bm);
  if (nearest >= 1.0 && std::abs(bm - nearest) <= cfg.tol) {
    full = size_t(nearest);
    frac = 0;
  } else {
    full = size_t(std::floor(bm));
    frac = bm - double(full);
  }
  const double speed = (1 + 6 * cfg.eps) * q(double(m));
  const double share = speed / bm;
  std::map<int, double> rates;
  size_t idx = m;
  for (size_t j = 0; j < full; ++j) rates[state.queue[--idx].id] = share;
  if (frac > 0) rates[state.queue[--idx].id] = frac * share;
  return rates;
}

NextEvent next_event(const SimState& state, const std::map<int, double>& request_rates,
                     std::optional<double> next_arrival) {
  auto page_rate = page_rates_of(state, request_rates);
  double t_completion = kInf;
  for (const OutstandingRequest& r : state.queue) {
    auto it = page_rate.find(r.page);
    if (it == page_rate.end() || !(it->second > 0)) continue;
    t_completion = std::min(t_completion, state.now + r.residual / it->second);
  }
  if (!next_arrival && t_completion == kInf) fail(Errc::NoPendingEvents, "nothing left to happen");
  if (next_arrival && *next_arrival < t_completion) return {*next_arrival, SimEvent::Kind::Arrival};
  return {t_completion, SimEvent::Kind::Completion};
}

SimResult simulate(const Trace& trace, const PowerFunction& power, const Config& cfg) {
  cfg.validate();
  const double beta = cfg.beta_or_default();
  const double aug = 1 + 6 * cfg.eps;
  SpeedInverse q(power);

  SimResult out;
  FractionalSchedule& fs = out.schedule;
  fs.eps = cfg.eps;
  fs.beta = beta;
  fs.augmentation = aug;
  fs.completion.assign(trace.requests().size(), kNoTime);

  const auto& reqs = trace.requests();
  SimState st;
  size_t next_arr = 0;

  auto speed_now = [&](size_t na) { return na == 0 ? 0.0 : aug * q(double(na)); };

  auto admit_due_arrivals = [&]() {
    while (next_arr < reqs.size() && reqs[next_arr].arrival <= st.now) {
      const Request& r = reqs[next_arr++];
      st.queue.push_back({r.id, r.page, r.arrival, trace.sigma_of(r)});
      out.events.push_back(
          {st.now, SimEvent::Kind::Arrival, r.id, int(st.queue.size()), speed_now(st.queue.size())});
    }
  };

  while (!st.queue.empty() || next_arr < reqs.size()) {
    if (st.queue.empty()) {
      // Idle until the next arrival (leading idle included so intervals
      // partition [0, makespan]).
      double t_next = reqs[next_arr].arrival;
      if (t_next > st.now) fs.intervals.push_back({st.now, t_next, {}, {}});
      st.now = t_next;
      admit_due_arrivals();
      continue;
    }

    std::map<int, double> rates;
    try {
      rates = active_rates(st, cfg, q);
    } catch (const Error& e) {
      if (e.code() == Errc::PowerAboveCapRange) {
        fail(Errc::SpeedCapExceeded, "power cap too low for " + std::to_string(st.queue.size()) +
                                         " outstanding requests (" + e.what() + ")");
      }
      throw;
    }
    std::optional<double> arrival;
    if (next_arr < reqs.size()) arrival = reqs[next_arr].arrival;
    NextEvent ev = next_event(st, rates, arrival);

    double dt = ev.t - st.now;
    RateInterval seg;
    seg.t0 = st.now;
    seg.t1 = ev.t;
    seg.page_rate = page_rates_of(st, rates);
    seg.contribution = rates;
    if (dt > 0) fs.intervals.push_back(seg);

    for (OutstandingRequest& r : st.queue) {
      auto it = seg.page_rate.find(r.page);
      if (it != seg.page_rate.end()) r.residual -= it->second * dt;
    }
    st.now = ev.t;

    if (ev.kind == SimEvent::Kind::Completion) {
      // Sweep everything at (or within float noise of) zero residual; ties
      // complete together in request-id order.
      std::vector<OutstandingRequest> kept;
      kept.reserve(st.queue.size());
      std::vector<OutstandingRequest> done;
      for (const OutstandingRequest& r : st.queue) {
        if (r.residual <= completion_eps(trace.sigma_of(trace.requests()[size_t(r.id)]))) {
          done.push_back(r);
        } else {
          kept.push_back(r);
        }
      }
      st.queue = std::move(kept);
      for (const OutstandingRequest& r : done) {
        fs.completion[size_t(r.id)] = st.now;
      }
      size_t na = st.queue.size() + done.size();
      for (const OutstandingRequest& r : done) {
        --na;
        out.events.push_back({st.now, SimEvent::Kind::Completion, r.id, int(na), speed_now(na)});
      }
    }
    admit_due_arrivals();
  }
  return out;
}

}  // namespace wattcast
