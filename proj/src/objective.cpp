#include <cmath>

#include "wattcast/analysis.hpp"

namespace wattcast {

namespace {

double flow_total(const std::vector<double>& completion, const Trace& trace, std::vector<double>& per_flow) {
  if (completion.size() != trace.requests().size()) {
    fail(Errc::MismatchedTraces, "schedule covers " + std::to_string(completion.size()) + " requests, trace has " +
                                     std::to_string(trace.requests().size()));
  }
  double flow = 0;
  per_flow.resize(completion.size());
  for (const Request& r : trace.requests()) {
    double f = completion[size_t(r.id)];
    if (!std::isfinite(f)) {
      fail(Errc::IncompleteSchedule, "request " + std::to_string(r.id) + " never finishes");
    }
    per_flow[size_t(r.id)] = f - r.arrival;
    flow += f - r.arrival;
  }
  return flow;
}

}  // namespace

Metrics objective(const FractionalSchedule& fs, const Trace& trace, const PowerFunction& power,
                  Config::Accounting mode) {
  Metrics m;
  m.accounting = mode;
  m.flow = flow_total(fs.completion, trace, m.per_request_flow);
  double divisor = mode == Config::Accounting::Augmented ? fs.augmentation : 1.0;
  for (const RateInterval& seg : fs.intervals) {
    double s = seg.total_rate();
    if (s > 0) m.energy += power(s / divisor) * seg.length();
  }
  m.objective = m.flow + m.energy;
  return m;
}

Metrics objective(const IntegralSchedule& is, const Trace& trace, const PowerFunction& power,
                  Config::Accounting mode) {
  Metrics m;
  m.accounting = mode;
  m.flow = flow_total(is.completion, trace, m.per_request_flow);
  double divisor = mode == Config::Accounting::Augmented ? 1.0 + is.eps_prime : 1.0;
  for (const Piece& piece : is.pieces) {
    m.energy += power(piece.speed / divisor) * piece.duration;
  }
  m.objective = m.flow + m.energy;
  return m;
}

int rank_of(int request_id, const std::vector<int>& outstanding, const Trace& trace) {
  bool found = false;
  int rank = 0;
  const auto& reqs = trace.requests();
  if (request_id < 0 || size_t(request_id) >= reqs.size()) {
    fail(Errc::InvalidArgument, "request " + std::to_string(request_id) + " not in trace");
  }
  for (int id : outstanding) {
    if (id < 0 || size_t(id) >= reqs.size()) {
      fail(Errc::InvalidArgument, "outstanding id " + std::to_string(id) + " not in trace");
    }
    // Ids are assigned in (arrival, id) order, so id comparison is the order.
    if (id <= request_id) ++rank;
    found |= id == request_id;
  }
  if (!found) fail(Errc::NotOutstanding, "request " + std::to_string(request_id) + " is not outstanding");
  return rank;
}

}  // namespace wattcast
