#include "wattcast/power.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wattcast/numeric.hpp"

namespace wattcast {

namespace {

void check_cap(const std::optional<double>& cap) {
  if (cap && !(*cap > 0 && std::isfinite(*cap))) {
    fail(Errc::InvalidArgument, "max_speed cap must be positive and finite");
  }
}

double poly_value(const std::vector<double>& c, double s) {
  // P(s) = s*(c1 + s*(c2 + ...)), powers start at 1.
  double acc = 0;
  for (size_t i = c.size(); i-- > 0;) acc = acc * s + c[i];
  return acc * s;
}

double poly_d1(const std::vector<double>& c, double s) {
  double acc = 0;
  for (size_t i = c.size(); i-- > 0;) acc = acc * s + double(i + 1) * c[i];
  return acc;
}

double poly_d2(const std::vector<double>& c, double s) {
  double acc = 0;
  for (size_t i = c.size(); i-- > 1;) acc = acc * s + double(i + 1) * double(i) * c[i];
  return acc;
}

std::vector<double> validation_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 128; ++i) g.push_back(16.0 * i / 128.0);
  double s = 1e-6;
  while (s <= 1e6) {
    g.push_back(s);
    s *= 1.2589254117941673;  // tenth of a decade
  }
  std::sort(g.begin(), g.end());
  return g;
}

}  // namespace

PowerFunction PowerFunction::monomial(double alpha, std::optional<double> max_speed) {
  if (!std::isfinite(alpha)) fail(Errc::InvalidArgument, "monomial exponent must be finite");
  if (alpha == 0) fail(Errc::NonZeroAtOrigin, "s^0 = 1 violates P(0) = 0");
  if (alpha < 0) fail(Errc::NotIncreasing, "monomial with negative exponent decreases");
  if (alpha <= 1) {
    fail(Errc::NotConvex, "monomial s^" + fmt_g12(alpha) + " is not strictly convex (needs alpha > 1)");
  }
  check_cap(max_speed);
  PowerFunction p;
  p.kind_ = Kind::Monomial;
  p.alpha_ = alpha;
  p.max_speed_ = max_speed;
  return p;
}

PowerFunction PowerFunction::polynomial(std::vector<double> coeffs, std::optional<double> max_speed) {
  for (double c : coeffs) {
    if (!std::isfinite(c)) fail(Errc::InvalidArgument, "polynomial coefficient must be finite");
  }
  while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
  bool any_positive = std::any_of(coeffs.begin(), coeffs.end(), [](double c) { return c > 0; });
  if (coeffs.empty() || !any_positive) {
    fail(Errc::NotIncreasing, "polynomial is identically zero");
  }
  bool any_negative = std::any_of(coeffs.begin(), coeffs.end(), [](double c) { return c < 0; });
  if (any_negative) {
    // No closed-form test with mixed signs; scan the conditions in order on
    // a sample grid (the validation is sampled by design).
    for (double s : validation_grid()) {
      if (poly_d1(coeffs, s) < -1e-12 * std::max(1.0, std::abs(poly_value(coeffs, s)))) {
        fail(Errc::NotIncreasing, "polynomial decreases near s = " + fmt_g12(s));
      }
    }
    bool strict_witness = false;
    for (double s : validation_grid()) {
      double d2 = poly_d2(coeffs, s);
      if (d2 < -1e-12 * std::max(1.0, std::abs(poly_value(coeffs, s)))) {
        fail(Errc::NotConvex, "polynomial is concave near s = " + fmt_g12(s));
      }
      if (d2 > 0) strict_witness = true;
    }
    if (!strict_witness) fail(Errc::NotConvex, "polynomial has no strictly convex region");
  } else {
    bool degree_two_plus = false;
    for (size_t i = 1; i < coeffs.size(); ++i) degree_two_plus |= coeffs[i] > 0;
    if (!degree_two_plus) fail(Errc::NotConvex, "linear polynomial is not strictly convex");
  }
  check_cap(max_speed);
  PowerFunction p;
  p.kind_ = Kind::Polynomial;
  p.coeffs_ = std::move(coeffs);
  p.max_speed_ = max_speed;
  return p;
}

PowerFunction PowerFunction::table(std::vector<Sample> samples, std::optional<double> max_speed) {
  if (samples.empty()) fail(Errc::EmptyTable, "table has no samples");
  for (const Sample& s : samples) {
    if (!std::isfinite(s.speed) || !std::isfinite(s.power)) {
      fail(Errc::InvalidArgument, "table sample must be finite");
    }
  }
  if (samples.front().speed != 0.0 || samples.front().power != 0.0) {
    fail(Errc::NonZeroAtOrigin, "first table sample must be (0,0)");
  }
  if (samples.size() < 2) fail(Errc::NotIncreasing, "table needs a sample above speed 0");
  for (size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].speed > samples[i - 1].speed) || !(samples[i].power > samples[i - 1].power)) {
      fail(Errc::NotIncreasing, "table samples must strictly increase in both coordinates (sample " +
                                    std::to_string(i) + ")");
    }
  }
  double prev_slope = -1;
  for (size_t i = 1; i < samples.size(); ++i) {
    double slope = (samples[i].power - samples[i - 1].power) / (samples[i].speed - samples[i - 1].speed);
    if (i > 1 && slope <= prev_slope * (1 + 1e-12)) {
      fail(Errc::NotConvex, "table slope does not strictly increase at sample " + std::to_string(i));
    }
    prev_slope = slope;
  }
  check_cap(max_speed);
  PowerFunction p;
  p.kind_ = Kind::Table;
  p.samples_ = std::move(samples);
  p.max_speed_ = max_speed;

  // Midpoint convexity spot check over an even grid plus the knots.
  double hi = 2 * p.samples_.back().speed;
  for (int i = 1; i < 256; ++i) {
    double m = hi * i / 256.0;
    double h = hi / 256.0;
    double lhs = p(m);
    double rhs = 0.5 * (p(m - h) + p(m + h));
    if (lhs > rhs + 1e-9 * std::max(1.0, rhs)) {
      fail(Errc::NotConvex, "midpoint convexity fails near s = " + fmt_g12(m));
    }
  }
  return p;
}

double PowerFunction::operator()(double speed) const {
  if (!(speed >= 0)) fail(Errc::InvalidArgument, "speed must be nonnegative");
  if (max_speed_ && speed > *max_speed_ * (1 + 1e-12)) {
    fail(Errc::SpeedAboveCap, "speed " + fmt_g12(speed) + " above cap " + fmt_g12(*max_speed_));
  }
  switch (kind_) {
    case Kind::Monomial:
      return std::pow(speed, alpha_);
    case Kind::Polynomial:
      return poly_value(coeffs_, speed);
    case Kind::Table: {
      if (speed >= samples_.back().speed) {
        size_t n = samples_.size();
        double slope =
            (samples_[n - 1].power - samples_[n - 2].power) / (samples_[n - 1].speed - samples_[n - 2].speed);
        return samples_.back().power + slope * (speed - samples_.back().speed);
      }
      auto it = std::upper_bound(samples_.begin(), samples_.end(), speed,
                                 [](double v, const Sample& s) { return v < s.speed; });
      const Sample& hi = *it;
      const Sample& lo = *(it - 1);
      double t = (speed - lo.speed) / (hi.speed - lo.speed);
      return lo.power + t * (hi.power - lo.power);
    }
  }
  fail(Errc::InvalidArgument, "corrupt power function");
}

double PowerFunction::inverse(double power, double rel_tol) const {
  if (!(power >= 0)) fail(Errc::InvalidArgument, "power must be nonnegative");
  if (power == 0) return 0;
  if (max_speed_) {
    double ymax = (*this)(*max_speed_);
    if (power > ymax * (1 + 1e-12)) {
      fail(Errc::PowerAboveCapRange,
           "power " + fmt_g12(power) + " above P(max_speed) = " + fmt_g12(ymax));
    }
  }
  if (kind_ == Kind::Monomial) {
    double q = std::pow(power, 1.0 / alpha_);
    if (max_speed_ && q > *max_speed_) q = *max_speed_;
    return q;
  }
  double hi = 1.0;
  if (max_speed_) hi = std::min(hi, *max_speed_);
  while ((*this)(hi) < power) {
    if (max_speed_ && hi >= *max_speed_) break;
    hi *= 2;
    if (max_speed_ && hi > *max_speed_) hi = *max_speed_;
  }
  double lo = 0.0;
  while (hi - lo > rel_tol * std::max(1.0, hi)) {
    double mid = 0.5 * (lo + hi);
    if ((*this)(mid) < power) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::string PowerFunction::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::Monomial:
      out << "monomial " << fmt_g12(alpha_);
      break;
    case Kind::Polynomial:
      out << "poly";
      for (double c : coeffs_) out << ' ' << fmt_g12(c);
      break;
    case Kind::Table:
      out << "table ";
      for (size_t i = 0; i < samples_.size(); ++i) {
        if (i) out << ';';
        out << fmt_g12(samples_[i].speed) << ',' << fmt_g12(samples_[i].power);
      }
      break;
  }
  if (max_speed_) out << "\ncap " << fmt_g12(*max_speed_);
  return out.str();
}

PowerFunction PowerFunction::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> func_tokens;
  std::optional<double> cap;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string t; ls >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    if (tokens[0] == "cap") {
      if (tokens.size() != 2) fail(Errc::SyntaxError, "line " + std::to_string(line_no) + ": cap <smax>");
      cap = parse_double(tokens[1], line_no);
      continue;
    }
    if (!func_tokens.empty()) {
      fail(Errc::SyntaxError, "line " + std::to_string(line_no) + ": multiple power functions");
    }
    func_tokens = tokens;
  }
  if (func_tokens.empty()) fail(Errc::SyntaxError, "no power function given");
  const std::string& kind = func_tokens[0];
  if (kind == "monomial") {
    if (func_tokens.size() != 2) fail(Errc::SyntaxError, "monomial <alpha>");
    return monomial(parse_double(func_tokens[1]), cap);
  }
  if (kind == "poly") {
    std::vector<double> coeffs;
    for (size_t i = 1; i < func_tokens.size(); ++i) coeffs.push_back(parse_double(func_tokens[i]));
    return polynomial(std::move(coeffs), cap);
  }
  if (kind == "table") {
    if (func_tokens.size() != 2) fail(Errc::SyntaxError, "table <s,p>;<s,p>;...");
    std::vector<Sample> samples;
    std::istringstream ts(func_tokens[1]);
    std::string pair;
    while (std::getline(ts, pair, ';')) {
      auto comma = pair.find(',');
      if (comma == std::string::npos) fail(Errc::SyntaxError, "table sample needs <speed,power>");
      samples.push_back({parse_double(pair.substr(0, comma)), parse_double(pair.substr(comma + 1))});
    }
    return table(std::move(samples), cap);
  }
  fail(Errc::SyntaxError, "unknown power function kind '" + kind + "'");
}

ConcavityReport check_concavity_props(const SpeedInverse& q,
                                      const std::vector<std::pair<double, double>>& samples,
                                      double slack) {
  ConcavityReport report;
  for (auto [x, alpha] : samples) {
    if (!(x > 1)) fail(Errc::InvalidArgument, "concavity check needs x > 1");
    if (!(alpha > 0 && alpha <= 1)) fail(Errc::InvalidArgument, "concavity check needs alpha in (0,1]");
    ConcavityCheck c;
    c.x = x;
    c.alpha = alpha;
    c.ratio_lhs = (x - 1) / x;
    c.ratio_rhs = q(x - 1) / q(x);
    c.scale_lhs = alpha * q(x);
    c.scale_rhs = q(alpha * x);
    c.ratio_ok = c.ratio_lhs <= c.ratio_rhs + slack;
    c.scale_ok = c.scale_lhs <= c.scale_rhs + slack;
    if (!c.ratio_ok || !c.scale_ok) ++report.violations;
    report.checks.push_back(c);
  }
  return report;
}

}  // namespace wattcast
