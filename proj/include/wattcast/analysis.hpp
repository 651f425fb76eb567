#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wattcast/config.hpp"
#include "wattcast/power.hpp"
#include "wattcast/schedule.hpp"
#include "wattcast/trace.hpp"

namespace wattcast {

struct Metrics {
  double flow = 0;
  double energy = 0;
  double objective = 0;  // flow + energy
  std::vector<double> per_request_flow;
  Config::Accounting accounting = Config::Accounting::Raw;
};

// F from completions; E = integral of P(s(t)) dt in raw mode, of
// P(s(t)/augmentation) in augmented mode. Piecewise-constant integrals are
// computed exactly.
Metrics objective(const FractionalSchedule& fs, const Trace& trace, const PowerFunction& power,
                  Config::Accounting mode);
Metrics objective(const IntegralSchedule& is, const Trace& trace, const PowerFunction& power,
                  Config::Accounting mode);

// Position of a request among the outstanding set in (arrival, id) order.
// `outstanding` holds request ids sorted ascending.
int rank_of(int request_id, const std::vector<int>& outstanding, const Trace& trace);

enum class Side { Before, After };

struct PotentialTerm {
  int request = 0;
  int rank = 0;
  double z = 0;
  double term = 0;  // rank * z / Q(rank)
};

struct PotentialState {
  double t = 0;
  std::vector<PotentialTerm> terms;
  double phi = 0;
};

// Phi(t) = (1/eps) * sum over the algorithm's outstanding requests of
// rank * z / Q(rank), with z = On(p,i,t,inf) * Ref(p,a,t) / sigma_p. Needs
// both runs completed; evaluated exactly (On and Ref are piecewise linear).
// Side selects the limit from below or above at event times.
PotentialState potential(double t, const FractionalSchedule& alg, const FractionalSchedule& ref,
                         const Trace& trace, const PowerFunction& power, double eps,
                         Side side = Side::After);

struct JumpRecord {
  double t = 0;
  std::string kinds;  // event kinds coinciding at t, '+'-joined
  double phi_before = 0;
  double phi_after = 0;
  double delta = 0;
  bool ok = true;
};

struct IntervalRecord {
  double t0 = 0, t1 = 0;
  double d_g_alg = 0;
  double d_phi = 0;
  double d_g_ref = 0;
  double residual = 0;  // d_g_alg + d_phi - (2/eps^2) * d_g_ref
  bool ok = true;
};

struct ConditionReport {
  double phi_start = 0, phi_end = 0;
  bool boundary_ok = true;
  std::vector<JumpRecord> jumps;
  std::vector<IntervalRecord> intervals;
  std::vector<std::string> violations;
  double g_alg = 0;             // augmented accounting
  double g_alg_flow = 0;        // flow part of g_alg
  double g_ref = 0;             // raw accounting
  double ratio = 0;             // g_alg / g_ref
  double competitive_bound = 0; // 2/eps^2
  double running_max_residual = 0;
  double jump_max_delta = 0;
  bool pass = false;

  std::string to_text() const;  // key=value lines plus one line per violation
};

// Checks the boundary, jump, and running conditions of the potential against
// a feasible reference schedule, plus the integrated bound
// G_alg(augmented) <= (2/eps^2) * G_ref(raw). Any feasible reference works.
ConditionReport verify_conditions(const FractionalSchedule& alg, const FractionalSchedule& ref,
                                  const Trace& trace, const PowerFunction& power, double eps,
                                  double tol_eq = 1e-9, double tol_run = 1e-7);

struct OracleParams {
  double delta = 0.5;
  std::vector<double> speeds;  // empty: {0, 1, ..., ceil(Q(2n)) + 1}
  double horizon = 0;
  double budget = 1e8;
};

// Exhaustive search over per-slot (page-or-idle, speed) choices; returns the
// feasible schedule minimizing raw flow plus energy on the grid. The result
// upper-bounds the true continuous optimum.
std::pair<FractionalSchedule, Metrics> brute_force_opt(const Trace& trace, const PowerFunction& power,
                                                       const OracleParams& params);

enum class BaselinePolicy { Fifo, Lwf };

// Feasible constant-speed broadcast schedule. FIFO serves the page whose
// earliest outstanding request arrived first; LWF the page with maximum total
// accumulated waiting (re-evaluated at arrival/completion events).
std::pair<FractionalSchedule, Metrics> fixed_speed_baseline(const Trace& trace, const PowerFunction& power,
                                                            double speed, BaselinePolicy policy);

}  // namespace wattcast
