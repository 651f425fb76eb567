#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wattcast/error.hpp"

namespace wattcast {

// A convex power curve: P(0) = 0, strictly increasing, strictly convex,
// unbounded. Construction validates the conditions and throws Error naming
// the first violated one. Values are immutable after construction.
class PowerFunction {
 public:
  enum class Kind { Monomial, Polynomial, Table };

  struct Sample {
    double speed = 0;
    double power = 0;
  };

  // P(s) = s^alpha, alpha > 1.
  static PowerFunction monomial(double alpha, std::optional<double> max_speed = {});
  // P(s) = sum_k coeffs[k] * s^(k+1); nonnegative coefficients, some power >= 2.
  static PowerFunction polynomial(std::vector<double> coeffs, std::optional<double> max_speed = {});
  // Piecewise-linear through strictly increasing samples starting at (0,0);
  // extended past the last sample at the last slope.
  static PowerFunction table(std::vector<Sample> samples, std::optional<double> max_speed = {});

  // Text grammar, one statement per line ('#' comments allowed):
  //   monomial <alpha> | poly <c1> <c2> ... | table <s,p>;<s,p>;...
  //   cap <smax>            (optional, after the function line)
  static PowerFunction parse(const std::string& text);

  // Power drawn at speed s (s >= 0; s <= cap when capped).
  double operator()(double speed) const;

  // Q(y): the speed whose power draw is y. Closed form for monomials,
  // bisection (bracket by doubling, relative width rel_tol) otherwise.
  double inverse(double power, double rel_tol = 1e-12) const;

  Kind kind() const { return kind_; }
  std::optional<double> max_speed() const { return max_speed_; }

  // Canonical grammar text for this function.
  std::string describe() const;

 private:
  PowerFunction() = default;

  Kind kind_ = Kind::Monomial;
  double alpha_ = 2.0;
  std::vector<double> coeffs_;
  std::vector<Sample> samples_;
  std::optional<double> max_speed_;
};

// Q = P^{-1} with its inversion tolerance. Cheap to copy, safe to share.
class SpeedInverse {
 public:
  explicit SpeedInverse(PowerFunction p, double tolerance = 1e-12)
      : power_(std::move(p)), tolerance_(tolerance) {}

  double operator()(double power) const { return power_.inverse(power, tolerance_); }

  const PowerFunction& power() const { return power_; }
  double tolerance() const { return tolerance_; }

 private:
  PowerFunction power_;
  double tolerance_;
};

// Concavity spot checks on Q: for each (x, alpha) pair with x > 1 and
// 0 < alpha <= 1, verifies (x-1)/x <= Q(x-1)/Q(x) and alpha*Q(x) <= Q(alpha*x).
struct ConcavityCheck {
  double x = 0;
  double alpha = 0;
  double ratio_lhs = 0, ratio_rhs = 0;  // (x-1)/x vs Q(x-1)/Q(x)
  double scale_lhs = 0, scale_rhs = 0;  // alpha*Q(x) vs Q(alpha*x)
  bool ratio_ok = true, scale_ok = true;
};

struct ConcavityReport {
  std::vector<ConcavityCheck> checks;
  int violations = 0;
  bool pass() const { return violations == 0; }
};

ConcavityReport check_concavity_props(const SpeedInverse& q,
                                      const std::vector<std::pair<double, double>>& samples,
                                      double slack = 1e-9);

}  // namespace wattcast
