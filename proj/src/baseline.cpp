#include <algorithm>
#include <cmath>

#include "wattcast/analysis.hpp"

namespace wattcast {

namespace {

struct Waiting {
  int id;
  int page;
  double arrival;
  double residual;
};

}  // namespace

std::pair<FractionalSchedule, Metrics> fixed_speed_baseline(const Trace& trace, const PowerFunction& power,
                                                            double speed, BaselinePolicy policy) {
  if (!(speed > 0)) fail(Errc::InvalidArgument, "baseline speed must be positive");
  FractionalSchedule fs;
  fs.augmentation = 1;
  fs.completion.assign(trace.requests().size(), kNoTime);

  const auto& reqs = trace.requests();
  std::vector<Waiting> queue;
  size_t next_arr = 0;
  double now = 0;

  auto choose_page = [&]() {
    if (policy == BaselinePolicy::Fifo) return queue.front().page;
    // LWF: maximum accumulated waiting, ties by page id string.
    std::map<int, double> waiting;
    for (const Waiting& w : queue) waiting[w.page] += now - w.arrival;
    int best = -1;
    for (const auto& [page, total] : waiting) {
      if (best < 0 || total > waiting[best] ||
          (total == waiting[best] && trace.pages()[size_t(page)].id < trace.pages()[size_t(best)].id)) {
        best = page;
      }
    }
    return best;
  };

  while (!queue.empty() || next_arr < reqs.size()) {
    if (queue.empty()) {
      double t_next = reqs[next_arr].arrival;
      if (t_next > now) fs.intervals.push_back({now, t_next, {}, {}});
      now = t_next;
      while (next_arr < reqs.size() && reqs[next_arr].arrival <= now) {
        const Request& r = reqs[next_arr++];
        queue.push_back({r.id, r.page, r.arrival, trace.sigma_of(r)});
      }
      continue;
    }
    int page = choose_page();
    double min_residual = kInf;
    for (const Waiting& w : queue) {
      if (w.page == page) min_residual = std::min(min_residual, w.residual);
    }
    double t_done = now + min_residual / speed;
    double t_next = t_done;
    if (next_arr < reqs.size()) t_next = std::min(t_next, reqs[next_arr].arrival);

    if (t_next > now) fs.intervals.push_back({now, t_next, {{page, speed}}, {}});
    for (Waiting& w : queue) {
      if (w.page == page) w.residual -= speed * (t_next - now);
    }
    now = t_next;

    std::vector<Waiting> kept;
    for (const Waiting& w : queue) {
      if (w.residual <= 1e-12 * std::max(1.0, trace.sigma_of(reqs[size_t(w.id)]))) {
        fs.completion[size_t(w.id)] = now;
      } else {
        kept.push_back(w);
      }
    }
    queue = std::move(kept);
    while (next_arr < reqs.size() && reqs[next_arr].arrival <= now) {
      const Request& r = reqs[next_arr++];
      queue.push_back({r.id, r.page, r.arrival, trace.sigma_of(r)});
    }
  }
  Metrics m = objective(fs, trace, power, Config::Accounting::Raw);
  return {std::move(fs), std::move(m)};
}

}  // namespace wattcast
