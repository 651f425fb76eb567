#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "wattcast/analysis.hpp"
#include "wattcast/numeric.hpp"

namespace wattcast {

namespace {

// Outstanding request ids of a run at time t, as the limit from below
// (Before: arrived strictly before t, not yet completed at t) or above
// (After: arrived at or before t, completes strictly after t).
std::vector<int> outstanding_at(const FractionalSchedule& fs, const Trace& trace, double t, Side side) {
  std::vector<int> ids;
  for (const Request& r : trace.requests()) {
    double f = fs.completion[size_t(r.id)];
    bool in = side == Side::Before ? (r.arrival < t && f >= t) : (r.arrival <= t && f > t);
    if (in) ids.push_back(r.id);
  }
  return ids;
}

class QMemo {
 public:
  explicit QMemo(const PowerFunction& p) : q_(p) {}

  double operator()(int rank) {
    if (size_t(rank) >= cache_.size()) cache_.resize(size_t(rank) + 1, -1.0);
    if (cache_[size_t(rank)] < 0) cache_[size_t(rank)] = q_(double(rank));
    return cache_[size_t(rank)];
  }

 private:
  SpeedInverse q_;
  std::vector<double> cache_;
};

PotentialState potential_impl(double t, const FractionalSchedule& alg, const FractionalSchedule& ref,
                              const Trace& trace, QMemo& q, double eps, Side side) {
  PotentialState state;
  state.t = t;
  std::vector<int> ids = outstanding_at(alg, trace, t, side);
  // Ids ascend, so rank is the position in the list.
  int rank = 0;
  for (int id : ids) {
    ++rank;
    const Request& r = trace.requests()[size_t(id)];
    double on_future = alg.contribution_volume(id, t, alg.makespan());
    double ref_delivered = ref.page_volume(r.page, r.arrival, t);
    PotentialTerm term;
    term.request = id;
    term.rank = rank;
    term.z = on_future * ref_delivered / trace.sigma_of(r);
    term.term = double(rank) * term.z / q(rank);
    state.terms.push_back(term);
    state.phi += term.term;
  }
  state.phi /= eps;
  return state;
}

}  // namespace

PotentialState potential(double t, const FractionalSchedule& alg, const FractionalSchedule& ref,
                         const Trace& trace, const PowerFunction& power, double eps, Side side) {
  if (!alg.complete()) fail(Errc::IncompleteSchedule, "algorithm run has unfinished requests");
  auto ref_issues = check_fractional_invariants(ref, trace, 1e-9);
  if (!ref_issues.empty()) fail(Errc::InfeasibleReference, ref_issues.front());
  QMemo q(power);
  return potential_impl(t, alg, ref, trace, q, eps, side);
}

std::string ConditionReport::to_text() const {
  std::ostringstream out;
  out << "F=" << fmt_g12(g_alg_flow) << '\n';
  out << "E=" << fmt_g12(g_alg - g_alg_flow) << '\n';
  out << "G=" << fmt_g12(g_alg) << '\n';
  out << "G_ref=" << fmt_g12(g_ref) << '\n';
  out << "ratio=" << fmt_g12(ratio) << '\n';
  out << "bound=" << fmt_g12(competitive_bound) << '\n';
  out << "running_max_residual=" << fmt_g12(running_max_residual) << '\n';
  out << "jump_max_delta=" << fmt_g12(jump_max_delta) << '\n';
  out << "boundary_phi_start=" << fmt_g12(phi_start) << '\n';
  out << "boundary_phi_end=" << fmt_g12(phi_end) << '\n';
  out << "violations=" << violations.size() << '\n';
  for (const std::string& v : violations) out << "violation\t" << v << '\n';
  out << "pass=" << (pass ? "true" : "false") << '\n';
  return out.str();
}

ConditionReport verify_conditions(const FractionalSchedule& alg, const FractionalSchedule& ref,
                                  const Trace& trace, const PowerFunction& power, double eps,
                                  double tol_eq, double tol_run) {
  if (!(eps > 0) || eps > 1.0 / 6.0 + 1e-12) fail(Errc::InvalidArgument, "eps must satisfy 0 < eps <= 1/6");
  if (std::abs(alg.eps - eps) > 1e-12 || std::abs(alg.beta - eps) > 1e-12) {
    fail(Errc::BetaMismatch, "algorithm run used eps=" + fmt_g12(alg.eps) + " beta=" + fmt_g12(alg.beta) +
                                 ", verifier needs beta = eps = " + fmt_g12(eps));
  }
  if (alg.completion.size() != trace.requests().size() ||
      ref.completion.size() != trace.requests().size()) {
    fail(Errc::MismatchedTraces, "schedules do not cover the trace's requests");
  }
  if (!alg.complete()) fail(Errc::IncompleteSchedule, "algorithm run has unfinished requests");
  auto ref_issues = check_fractional_invariants(ref, trace, 1e-9);
  if (!ref_issues.empty()) {
    fail(Errc::InfeasibleReference, ref_issues.front() +
                                        (ref_issues.size() > 1
                                             ? " (+" + std::to_string(ref_issues.size() - 1) + " more)"
                                             : ""));
  }

  ConditionReport report;
  report.competitive_bound = 2.0 / (eps * eps);
  report.running_max_residual = -kInf;
  report.jump_max_delta = -kInf;

  // The algorithm run is validated report-style so sabotage shows up as a
  // reported violation rather than an exception.
  for (const std::string& issue : check_fractional_invariants(alg, trace, 1e-9)) {
    report.violations.push_back("alg-invariant\t" + issue);
  }

  QMemo q(power);

  // Merged timeline: both schedules' interval boundaries plus every event.
  std::set<double> boundary{0.0};
  std::set<double> event_times;
  for (const RateInterval& seg : alg.intervals) {
    boundary.insert(seg.t0);
    boundary.insert(seg.t1);
  }
  for (const RateInterval& seg : ref.intervals) {
    boundary.insert(seg.t0);
    boundary.insert(seg.t1);
  }
  std::map<double, std::set<std::string>> events;
  for (const Request& r : trace.requests()) {
    events[r.arrival].insert("arrival");
    events[alg.completion[size_t(r.id)]].insert("alg-completion");
    events[ref.completion[size_t(r.id)]].insert("ref-completion");
  }
  for (const auto& [t, kinds] : events) boundary.insert(t);
  double t_end = *boundary.rbegin();

  auto phi = [&](double t, Side side) {
    return potential_impl(t, alg, ref, trace, q, eps, side).phi;
  };

  // Boundary condition.
  double first_arrival = trace.requests().empty() ? 0.0 : trace.requests().front().arrival;
  report.phi_start = phi(first_arrival, Side::Before);
  report.phi_end = phi(t_end, Side::After);
  report.boundary_ok = std::abs(report.phi_start) <= tol_eq && std::abs(report.phi_end) <= tol_eq;
  if (!report.boundary_ok) {
    report.violations.push_back("boundary\tphi_start=" + fmt_g12(report.phi_start) +
                                " phi_end=" + fmt_g12(report.phi_end));
  }

  // Jump condition at every event time.
  for (const auto& [t, kinds] : events) {
    JumpRecord jump;
    jump.t = t;
    bool first = true;
    for (const std::string& k : kinds) {
      if (!first) jump.kinds += '+';
      jump.kinds += k;
      first = false;
    }
    jump.phi_before = phi(t, Side::Before);
    jump.phi_after = phi(t, Side::After);
    jump.delta = jump.phi_after - jump.phi_before;
    jump.ok = jump.delta <= tol_eq;
    if (!jump.ok) {
      report.violations.push_back("jump\tt=" + fmt_g12(t) + " kinds=" + jump.kinds +
                                  " delta=" + fmt_g12(jump.delta));
    }
    report.jump_max_delta = std::max(report.jump_max_delta, jump.delta);
    report.jumps.push_back(std::move(jump));
  }

  // Running condition on every interval of the merged timeline.
  std::vector<double> times(boundary.begin(), boundary.end());
  for (size_t i = 0; i + 1 < times.size(); ++i) {
    double t0 = times[i];
    double t1 = times[i + 1];
    if (!(t1 > t0)) continue;
    double mid = 0.5 * (t0 + t1);
    IntervalRecord rec;
    rec.t0 = t0;
    rec.t1 = t1;
    double na = double(outstanding_at(alg, trace, mid, Side::After).size());
    double no = double(outstanding_at(ref, trace, mid, Side::After).size());
    double s_alg = alg.total_rate_at(mid);
    double s_ref = ref.total_rate_at(mid);
    double dt = t1 - t0;
    rec.d_g_alg = (na + (s_alg > 0 ? power(s_alg / alg.augmentation) : 0.0)) * dt;
    rec.d_g_ref = (no + (s_ref > 0 ? power(s_ref) : 0.0)) * dt;
    rec.d_phi = phi(t1, Side::Before) - phi(t0, Side::After);
    rec.residual = rec.d_g_alg + rec.d_phi - report.competitive_bound * rec.d_g_ref;
    rec.ok = rec.residual <= tol_run;
    if (!rec.ok) {
      report.violations.push_back("running\tt0=" + fmt_g12(t0) + " t1=" + fmt_g12(t1) +
                                  " residual=" + fmt_g12(rec.residual));
    }
    report.running_max_residual = std::max(report.running_max_residual, rec.residual);
    report.g_alg += rec.d_g_alg;
    report.g_alg_flow += na * dt;
    report.g_ref += rec.d_g_ref;
    report.intervals.push_back(std::move(rec));
  }

  if (report.intervals.empty()) report.running_max_residual = 0;
  if (report.jumps.empty()) report.jump_max_delta = 0;
  report.ratio = report.g_ref > 0 ? report.g_alg / report.g_ref : 0.0;
  bool integrated_ok = report.g_alg <= report.competitive_bound * report.g_ref + tol_run;
  if (!integrated_ok) {
    report.violations.push_back("integrated\tG=" + fmt_g12(report.g_alg) + " > bound*G_ref=" +
                                fmt_g12(report.competitive_bound * report.g_ref));
  }
  report.pass = report.violations.empty();
  return report;
}

}  // namespace wattcast
