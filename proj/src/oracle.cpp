#include <algorithm>
#include <cmath>

#include "wattcast/analysis.hpp"
#include "wattcast/numeric.hpp"

namespace wattcast {

namespace {

struct Choice {
  int page = -1;  // -1: idle
  double speed = 0;
};

struct Search {
  const Trace& trace;
  const PowerFunction& power;
  double delta;
  int n_slots;
  std::vector<Choice> options;  // fixed enumeration order: idle, then pages x speeds
  double s_max;

  double best_cost = kInf;
  std::vector<Choice> best_choices;
  std::vector<double> best_completion;

  std::vector<Choice> choices;

  // delivered[i]: volume of request i's page broadcast since its arrival.
  struct Node {
    std::vector<double> delivered;
    std::vector<double> completion;
    int completed = 0;
    double cost = 0;
  };

  Search(const Trace& t, const PowerFunction& p) : trace(t), power(p) {}

  // Advances `node` across slot k under `choice`; accrues flow for every
  // request alive in the slot and energy for the whole slot.
  void advance(Node& node, int k, const Choice& choice) const {
    const double t0 = k * delta;
    const double t1 = t0 + delta;
    if (choice.page >= 0) node.cost += power(choice.speed) * delta;
    for (const Request& r : trace.requests()) {
      double f = node.completion[size_t(r.id)];
      if (std::isfinite(f) || r.arrival >= t1) continue;
      double from = std::max(t0, r.arrival);
      if (choice.page == r.page && choice.speed > 0) {
        double need = trace.sigma_of(r) - node.delivered[size_t(r.id)];
        double got = choice.speed * (t1 - from);
        if (got >= need - 1e-12 * std::max(1.0, trace.sigma_of(r))) {
          double done_at = from + need / choice.speed;
          node.completion[size_t(r.id)] = done_at;
          node.delivered[size_t(r.id)] = trace.sigma_of(r);
          node.cost += done_at - from;
          ++node.completed;
          continue;
        }
        node.delivered[size_t(r.id)] += got;
      }
      node.cost += t1 - from;
    }
  }

  double lower_bound(const Node& node) const {
    double lb = node.cost;
    for (const Request& r : trace.requests()) {
      if (std::isfinite(node.completion[size_t(r.id)])) continue;
      lb += (trace.sigma_of(r) - node.delivered[size_t(r.id)]) / s_max;
    }
    return lb;
  }

  void dfs(const Node& node, int k) {
    const int n = int(trace.requests().size());
    if (node.completed == n) {
      // Remaining slots idle; strict improvement keeps the first (= lexico-
      // graphically smallest in enumeration order) among equal-cost schedules.
      if (node.cost < best_cost) {
        best_cost = node.cost;
        best_choices.assign(choices.begin(), choices.begin() + k);
        best_completion = node.completion;
      }
      return;
    }
    if (k == n_slots) return;
    if (lower_bound(node) >= best_cost) return;
    const double t1 = (k + 1) * delta;
    for (const Choice& c : options) {
      if (c.page >= 0) {
        // Broadcasting a page no incomplete request can absorb is dominated
        // by idling.
        bool useful = false;
        for (const Request& r : trace.requests()) {
          if (r.page == c.page && !std::isfinite(node.completion[size_t(r.id)]) && r.arrival < t1) {
            useful = true;
            break;
          }
        }
        if (!useful) continue;
      }
      Node child = node;
      advance(child, k, c);
      choices[size_t(k)] = c;
      dfs(child, k + 1);
    }
  }
};

}  // namespace

std::pair<FractionalSchedule, Metrics> brute_force_opt(const Trace& trace, const PowerFunction& power,
                                                       const OracleParams& params) {
  if (!(params.delta > 0)) fail(Errc::InvalidArgument, "delta_opt must be positive");
  if (!(params.horizon >= 0)) fail(Errc::InvalidArgument, "horizon must be nonnegative");

  std::vector<double> speeds = params.speeds;
  const size_t n = trace.requests().size();
  if (speeds.empty()) {
    double top = std::ceil(power.inverse(std::max(1.0, 2.0 * double(n)))) + 1;
    for (double s = 0; s <= top; s += 1) speeds.push_back(s);
  }
  std::sort(speeds.begin(), speeds.end());
  speeds.erase(std::unique(speeds.begin(), speeds.end()), speeds.end());
  if (speeds.empty() || speeds.front() < 0) fail(Errc::InvalidArgument, "speed grid must be nonnegative");
  if (speeds.front() != 0) speeds.insert(speeds.begin(), 0.0);

  const int n_slots = int(std::ceil(params.horizon / params.delta - 1e-9));
  const double branch = double(speeds.size()) * double(trace.pages().size() + 1);
  if (n_slots > 0 && double(n_slots) * std::log(branch) > std::log(params.budget)) {
    fail(Errc::BudgetExceeded, "(" + std::to_string(speeds.size()) + " speeds * " +
                                   std::to_string(trace.pages().size() + 1) + " targets)^" +
                                   std::to_string(n_slots) + " exceeds the enumeration budget");
  }

  FractionalSchedule fs;
  fs.augmentation = 1;
  fs.completion.assign(n, kNoTime);
  if (n == 0) {
    Metrics zero;
    zero.accounting = Config::Accounting::Raw;
    return {std::move(fs), std::move(zero)};
  }

  Search search(trace, power);
  search.delta = params.delta;
  search.n_slots = n_slots;
  search.s_max = speeds.back();
  if (!(search.s_max > 0)) fail(Errc::HorizonTooShort, "speed grid has no positive speed");
  search.options.push_back({-1, 0.0});
  std::vector<int> page_order(trace.pages().size());
  for (size_t p = 0; p < page_order.size(); ++p) page_order[p] = int(p);
  std::sort(page_order.begin(), page_order.end(), [&](int a, int b) {
    return trace.pages()[size_t(a)].id < trace.pages()[size_t(b)].id;
  });
  for (int p : page_order) {
    for (double s : speeds) {
      if (s > 0) search.options.push_back({p, s});
    }
  }
  search.choices.resize(size_t(n_slots));

  Search::Node root;
  root.delivered.assign(n, 0.0);
  root.completion.assign(n, kNoTime);
  search.dfs(root, 0);

  if (!(search.best_cost < kInf)) {
    fail(Errc::HorizonTooShort, "no schedule completes every request within the horizon");
  }

  fs.completion = search.best_completion;
  int last_active = -1;
  for (size_t k = 0; k < search.best_choices.size(); ++k) {
    if (search.best_choices[k].page >= 0) last_active = int(k);
  }
  for (int k = 0; k <= last_active; ++k) {
    const Choice& c = search.best_choices[size_t(k)];
    RateInterval seg;
    seg.t0 = k * params.delta;
    seg.t1 = seg.t0 + params.delta;
    if (c.page >= 0) seg.page_rate[c.page] = c.speed;
    fs.intervals.push_back(std::move(seg));
  }

  Metrics m = objective(fs, trace, power, Config::Accounting::Raw);
  if (std::abs(m.objective - search.best_cost) > 1e-6 * std::max(1.0, search.best_cost)) {
    fail(Errc::InvalidArgument, "oracle bookkeeping mismatch: " + fmt_g12(m.objective) + " vs " +
                                    fmt_g12(search.best_cost));
  }
  return {std::move(fs), std::move(m)};
}

}  // namespace wattcast
