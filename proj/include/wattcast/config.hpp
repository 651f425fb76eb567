#pragma once

#include <cstdint>
#include <optional>

#include "wattcast/error.hpp"

namespace wattcast {

// Run parameters shared across the pipeline. The analysis requires the
// scheduler's eps <= 1/6 and beta = eps; out-of-range values are rejected,
// never clamped.
struct Config {
  enum class Accounting { Augmented, Raw };

  double eps = 1.0 / 6.0;
  std::optional<double> beta;   // defaults to eps
  double eps_prime = 1.0;       // rounding augmentation, (0, 1]
  std::optional<double> delta;  // slot size; defaults to min(0.1, min_p sigma_p / 4)
  Accounting accounting = Accounting::Augmented;
  double tol = 1e-9;
  std::uint64_t seed = 0;

  double beta_or_default() const { return beta.value_or(eps); }

  void validate() const {
    if (!(eps > 0) || eps > 1.0 / 6.0 + 1e-12) {
      fail(Errc::InvalidArgument, "eps must satisfy 0 < eps <= 1/6");
    }
    double b = beta_or_default();
    if (!(b > 0) || b > 1.0) fail(Errc::InvalidArgument, "beta must satisfy 0 < beta <= 1");
    if (!(eps_prime > 0) || eps_prime > 1.0) {
      fail(Errc::InvalidArgument, "eps-prime must satisfy 0 < eps' <= 1");
    }
    if (delta && !(*delta > 0)) fail(Errc::InvalidArgument, "delta must be positive");
    if (!(tol > 0)) fail(Errc::InvalidArgument, "tolerance must be positive");
  }
};

}  // namespace wattcast
