#include "wattcast/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "wattcast/numeric.hpp"

namespace wattcast {

double default_slot_size(const Trace& trace) {
  double delta = 0.1;
  for (const Page& p : trace.pages()) delta = std::min(delta, p.sigma / 4);
  return delta;
}

SlotSequence serialize_slots(const FractionalSchedule& fs, const Trace& trace, double delta) {
  if (!(delta > 0)) fail(Errc::InvalidArgument, "slot size must be positive");
  SlotSequence slots;
  for (const RateInterval& seg : fs.intervals) {
    double total = seg.total_rate();
    if (!(total > 0)) continue;
    std::vector<std::pair<int, double>> pages(seg.page_rate.begin(), seg.page_rate.end());
    std::sort(pages.begin(), pages.end(), [&](const auto& a, const auto& b) {
      return trace.pages()[size_t(a.first)].id < trace.pages()[size_t(b.first)].id;
    });
    double w0 = seg.t0;
    while (w0 < seg.t1 - 1e-15 * std::max(1.0, seg.t1)) {
      double w1 = std::min(w0 + delta, seg.t1);
      double window = w1 - w0;
      double cursor = w0;
      for (const auto& [page, rate] : pages) {
        Slot slot;
        slot.start = cursor;
        slot.duration = window * rate / total;
        slot.page = page;
        slot.speed = total;
        slot.volume = rate * window;
        cursor += slot.duration;
        slots.push_back(slot);
      }
      w0 = w1;
    }
  }
  return slots;
}

namespace {

struct PendingTuple {
  int page = 0;
  double width = 0;
  double start = kInf;  // b; infinity until the first piece is broadcast
  int k = 1;
  int sourcing = 0;
  int base_slot = 0;  // index into the page's slot list of the sourcing request's first slot
  double broadcast_volume = 0;
  long seq = 0;  // insertion order, for deterministic tie-breaks
  int tx = -1;   // transmission index once started
  bool started() const { return std::isfinite(start); }
};

struct PageSlots {
  std::vector<int> slot_index;  // global slot indices for this page, in time order
};

}  // namespace

IntegralSchedule gen_rounding(const SlotSequence& slots, const Trace& trace,
                              const std::vector<double>& fractional_completion, double eps_prime,
                              double horizon) {
  if (!(eps_prime > 0) || eps_prime > 1.0) {
    fail(Errc::InvalidArgument, "eps-prime must satisfy 0 < eps' <= 1");
  }
  if (fractional_completion.size() != trace.requests().size()) {
    fail(Errc::MismatchedTraces, "completion vector does not cover the trace");
  }

  IntegralSchedule out;
  out.eps_prime = eps_prime;
  out.completion.assign(trace.requests().size(), kNoTime);
  out.satisfied_by.assign(trace.requests().size(), -1);

  std::vector<PageSlots> per_page(trace.pages().size());
  for (size_t i = 0; i < slots.size(); ++i) per_page[size_t(slots[i].page)].slot_index.push_back(int(i));

  // Fractional completions in event order (f, id); same-page ties follow
  // arrival order because ids do.
  std::vector<int> order;
  for (const Request& r : trace.requests()) {
    if (!std::isfinite(fractional_completion[size_t(r.id)])) {
      fail(Errc::IncompleteSchedule, "request " + std::to_string(r.id) + " has no fractional completion");
    }
    if (fractional_completion[size_t(r.id)] <= horizon) order.push_back(r.id);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double fa = fractional_completion[size_t(a)];
    double fb = fractional_completion[size_t(b)];
    return fa != fb ? fa < fb : a < b;
  });

  auto first_slot_at_or_after = [&](int page, double arrival) {
    const auto& list = per_page[size_t(page)].slot_index;
    auto it = std::lower_bound(list.begin(), list.end(), arrival - 1e-12, [&](int idx, double t) {
      return slots[size_t(idx)].start < t;
    });
    return int(it - list.begin());
  };

  std::vector<PendingTuple> queue;
  std::vector<bool> marked(trace.requests().size(), false);
  long next_seq = 0;
  size_t cursor = 0;  // next fractional completion to ingest
  double now = 0;

  auto ingest_due = [&]() {
    while (cursor < order.size() && fractional_completion[size_t(order[cursor])] <= now + 1e-12) {
      int id = order[cursor++];
      if (marked[size_t(id)]) continue;
      const Request& r = trace.requests()[size_t(id)];
      double width = fractional_completion[size_t(id)] - r.arrival;
      PendingTuple* match = nullptr;
      for (PendingTuple& t : queue) {
        if (t.page == r.page && t.start >= r.arrival - 1e-12) {
          // Prefer the unstarted tuple; at most one exists per page.
          if (match == nullptr || (!t.started() && match->started())) match = &t;
        }
      }
      if (match == nullptr) {
        PendingTuple t;
        t.page = r.page;
        t.width = width;
        t.sourcing = id;
        t.base_slot = first_slot_at_or_after(r.page, r.arrival);
        t.seq = next_seq++;
        queue.push_back(t);
      } else if (!match->started() && width < match->width) {
        // Width only shrinks while queued; frozen once broadcasting begins.
        match->width = width;
        match->sourcing = id;
        match->base_slot = first_slot_at_or_after(r.page, r.arrival);
      }
    }
  };

  while (true) {
    ingest_due();
    if (queue.empty()) {
      if (cursor >= order.size()) break;
      double t_next = fractional_completion[size_t(order[cursor])];
      if (t_next > horizon) break;
      now = std::max(now, t_next);
      continue;
    }
    if (now >= horizon) break;

    // Dequeue minimum width; ties by page id then insertion order.
    size_t pick = 0;
    for (size_t i = 1; i < queue.size(); ++i) {
      const PendingTuple& a = queue[i];
      const PendingTuple& b = queue[pick];
      const std::string& pa = trace.pages()[size_t(a.page)].id;
      const std::string& pb = trace.pages()[size_t(b.page)].id;
      if (a.width < b.width || (a.width == b.width && (pa < pb || (pa == pb && a.seq < b.seq)))) {
        pick = i;
      }
    }
    PendingTuple tuple = queue[size_t(pick)];
    queue.erase(queue.begin() + long(pick));

    const auto& list = per_page[size_t(tuple.page)].slot_index;
    size_t slot_pos = size_t(tuple.base_slot) + size_t(tuple.k - 1);
    if (slot_pos >= list.size()) {
      fail(Errc::InconsistentSlots,
           "page " + trace.pages()[size_t(tuple.page)].id + " has no slot " + std::to_string(tuple.k) +
               " after request " + std::to_string(tuple.sourcing) + "'s arrival");
    }
    const Slot& slot = slots[size_t(list[slot_pos])];

    if (tuple.k == 1) {
      tuple.start = now;
      Transmission tx;
      tx.page = tuple.page;
      tx.sourcing_request = tuple.sourcing;
      tx.width = tuple.width;
      tx.start = now;
      out.transmissions.push_back(tx);
      tuple.tx = int(out.transmissions.size()) - 1;
    }
    int tx_index = tuple.tx;

    Piece piece;
    piece.page = tuple.page;
    piece.k = tuple.k;
    piece.start = now;
    piece.duration = slot.duration / (1 + eps_prime);
    piece.speed = slot.speed * (1 + eps_prime);
    piece.volume = slot.volume;
    piece.transmission = tx_index;
    piece.slot_index = list[slot_pos];
    out.pieces.push_back(piece);
    now += piece.duration;
    tuple.broadcast_volume += slot.volume;

    Transmission& tx = out.transmissions[size_t(tx_index)];
    tx.pieces = tuple.k;
    tx.end = now;

    double sigma = trace.pages()[size_t(tuple.page)].sigma;
    double slack = 1e-9 * std::max(1.0, sigma);
    if (std::abs(tuple.broadcast_volume - sigma) <= slack) {
      // Final piece: the transmission delivered the page start-to-finish, so
      // every request that arrived by its start is integrally satisfied.
      for (const Request& r : trace.requests()) {
        if (r.page == tuple.page && !marked[size_t(r.id)] &&
            r.arrival <= tx.start + 1e-12 * std::max(1.0, tx.start)) {
          marked[size_t(r.id)] = true;
          out.completion[size_t(r.id)] = now;
          out.satisfied_by[size_t(r.id)] = tx_index;
        }
      }
    } else if (tuple.broadcast_volume > sigma + slack) {
      fail(Errc::InconsistentSlots, "page " + trace.pages()[size_t(tuple.page)].id + " slots overshoot sigma (" +
                                        fmt_g12(tuple.broadcast_volume) + " vs " + fmt_g12(sigma) +
                                        ") for request " + std::to_string(tuple.sourcing));
    } else {
      tuple.k += 1;
      queue.push_back(tuple);
    }
  }

  if (horizon == kInf) {
    for (const Request& r : trace.requests()) {
      if (!marked[size_t(r.id)]) {
        fail(Errc::InconsistentSlots, "request " + std::to_string(r.id) + " never integrally satisfied");
      }
    }
  }
  return out;
}

std::string RoundingReport::to_text() const {
  std::ostringstream out;
  out << "requests=" << stretch.size() << '\n';
  out << "max_stretch_slack=" << fmt_g12(max_stretch_slack) << '\n';
  out << "energy_integral_nominal=" << fmt_g12(energy_integral_nominal) << '\n';
  out << "energy_fractional=" << fmt_g12(energy_fractional) << '\n';
  out << "overlap_violations=" << overlap_violations << '\n';
  out << "violations=" << violations.size() << '\n';
  for (const std::string& v : violations) out << "violation\t" << v << '\n';
  out << "pass=" << (pass ? "true" : "false") << '\n';
  return out.str();
}

RoundingReport verify_rounding(const FractionalSchedule& fs, const IntegralSchedule& is,
                               const Trace& trace, const PowerFunction& power, double eps_prime,
                               double delta) {
  if (fs.completion.size() != trace.requests().size() ||
      is.completion.size() != trace.requests().size()) {
    fail(Errc::MismatchedTraces, "schedules do not cover the trace's requests");
  }
  RoundingReport report;
  report.max_stretch_slack = -kInf;

  // Per-request stretch: f^I - a <= (f - a) + (2/eps')(f - a) + 5*delta/eps'.
  for (const Request& r : trace.requests()) {
    double f = fs.completion[size_t(r.id)];
    double fi = is.completion[size_t(r.id)];
    if (!std::isfinite(f) || !std::isfinite(fi)) {
      report.violations.push_back("incomplete\trequest=" + std::to_string(r.id));
      continue;
    }
    StretchEntry e;
    e.request = r.id;
    e.flow_fractional = f - r.arrival;
    e.flow_integral = fi - r.arrival;
    e.bound = (1 + 2 / eps_prime) * e.flow_fractional + 5 * delta / eps_prime;
    e.ok = e.flow_integral <= e.bound + 1e-9;
    report.max_stretch_slack = std::max(report.max_stretch_slack, e.flow_integral - e.bound);
    if (!e.ok) {
      report.violations.push_back("stretch\trequest=" + std::to_string(r.id) + " flow_integral=" +
                                  fmt_g12(e.flow_integral) + " bound=" + fmt_g12(e.bound));
    }
    report.stretch.push_back(e);
  }
  if (report.stretch.empty()) report.max_stretch_slack = 0;

  // Energy dominance at nominal (pre-augmentation) speeds and durations: each
  // fractional slot backs at most one piece.
  for (const Piece& piece : is.pieces) {
    double nominal_speed = piece.speed / (1 + eps_prime);
    double nominal_duration = piece.duration * (1 + eps_prime);
    report.energy_integral_nominal += power(nominal_speed) * nominal_duration;
  }
  for (const RateInterval& seg : fs.intervals) {
    double s = seg.total_rate();
    if (s > 0) report.energy_fractional += power(s) * seg.length();
  }
  if (report.energy_integral_nominal > report.energy_fractional + 1e-9) {
    report.violations.push_back("energy\tintegral_nominal=" + fmt_g12(report.energy_integral_nominal) +
                                " fractional=" + fmt_g12(report.energy_fractional));
  }

  // Pieces must not overlap in time; within a transmission indices run 1..K.
  std::vector<const Piece*> by_time;
  for (const Piece& p : is.pieces) by_time.push_back(&p);
  std::sort(by_time.begin(), by_time.end(),
            [](const Piece* a, const Piece* b) { return a->start < b->start; });
  for (size_t i = 0; i + 1 < by_time.size(); ++i) {
    if (by_time[i]->start + by_time[i]->duration > by_time[i + 1]->start + 1e-9) {
      report.violations.push_back("overlap-pieces\tt=" + fmt_g12(by_time[i + 1]->start));
    }
  }
  std::vector<int> next_k(is.transmissions.size(), 1);
  std::vector<double> volume(is.transmissions.size(), 0.0);
  for (const Piece* pp : by_time) {
    const Piece& p = *pp;
    if (p.transmission < 0 || size_t(p.transmission) >= is.transmissions.size()) {
      report.violations.push_back("piece-transmission\tk=" + std::to_string(p.k));
      continue;
    }
    if (p.k != next_k[size_t(p.transmission)]) {
      report.violations.push_back("sequence\ttransmission=" + std::to_string(p.transmission) +
                                  " expected_k=" + std::to_string(next_k[size_t(p.transmission)]) +
                                  " got_k=" + std::to_string(p.k));
    } else {
      next_k[size_t(p.transmission)] += 1;
    }
    volume[size_t(p.transmission)] += p.volume;
  }

  // Marking contract: every request's transmission starts at or after its
  // arrival and delivers the full page.
  for (const Request& r : trace.requests()) {
    int tx_index = is.satisfied_by[size_t(r.id)];
    if (tx_index < 0 || size_t(tx_index) >= is.transmissions.size()) {
      if (std::isfinite(is.completion[size_t(r.id)])) {
        report.violations.push_back("marking\trequest=" + std::to_string(r.id) + " has no transmission");
      }
      continue;
    }
    const Transmission& tx = is.transmissions[size_t(tx_index)];
    if (r.arrival > tx.start + 1e-9) {
      report.violations.push_back("marking\trequest=" + std::to_string(r.id) + " arrived after start " +
                                  fmt_g12(tx.start));
    }
    double sigma = trace.pages()[size_t(tx.page)].sigma;
    if (std::abs(volume[size_t(tx_index)] - sigma) > 1e-9 * std::max(1.0, sigma)) {
      report.violations.push_back("marking\ttransmission=" + std::to_string(tx_index) +
                                  " delivered " + fmt_g12(volume[size_t(tx_index)]) + " of sigma " +
                                  fmt_g12(sigma));
    }
    if (std::abs(is.completion[size_t(r.id)] - tx.end) > 1e-9 * std::max(1.0, tx.end)) {
      report.violations.push_back("marking\trequest=" + std::to_string(r.id) +
                                  " completion != transmission end");
    }
  }

  // Slot-to-piece injectivity (the power-dominance mechanism).
  std::set<int> used_slots;
  for (const Piece& p : is.pieces) {
    if (p.slot_index >= 0 && !used_slots.insert(p.slot_index).second) {
      report.violations.push_back("slot-reuse\tslot=" + std::to_string(p.slot_index));
    }
  }

  // Overlap property: same-page transmissions with sourcing requests j > k
  // (per-page arrival order) satisfy a_{q,j} >= f_{q,k}.
  for (size_t i = 0; i < is.transmissions.size(); ++i) {
    for (size_t j = 0; j < is.transmissions.size(); ++j) {
      if (i == j || is.transmissions[i].page != is.transmissions[j].page) continue;
      const Request& ri = trace.requests()[size_t(is.transmissions[i].sourcing_request)];
      const Request& rj = trace.requests()[size_t(is.transmissions[j].sourcing_request)];
      if (rj.per_page_index <= ri.per_page_index) continue;
      double f_earlier = fs.completion[size_t(ri.id)];
      if (rj.arrival < f_earlier - 1e-9) {
        ++report.overlap_violations;
        report.violations.push_back("overlap-lemma\tpage=" + trace.pages()[size_t(ri.page)].id +
                                    " a_j=" + fmt_g12(rj.arrival) + " f_k=" + fmt_g12(f_earlier));
      }
    }
  }

  report.pass = report.violations.empty();
  return report;
}

}  // namespace wattcast
