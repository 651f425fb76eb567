#include "wattcast/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wattcast/numeric.hpp"

namespace wattcast {

double RateInterval::total_rate() const {
  double s = 0;
  for (const auto& [page, rate] : page_rate) s += rate;
  return s;
}

bool FractionalSchedule::complete() const {
  return std::all_of(completion.begin(), completion.end(), [](double f) { return std::isfinite(f); });
}

bool IntegralSchedule::complete() const {
  return std::all_of(completion.begin(), completion.end(), [](double f) { return std::isfinite(f); });
}

namespace {

// Index of the interval containing t (preferring the one starting at t), or -1.
int interval_at(const std::vector<RateInterval>& iv, double t) {
  if (iv.empty() || t < iv.front().t0 || t > iv.back().t1) return -1;
  size_t lo = 0, hi = iv.size();
  while (lo + 1 < hi) {
    size_t mid = (lo + hi) / 2;
    if (iv[mid].t0 <= t) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return int(lo);
}

double map_get(const std::map<int, double>& m, int key) {
  auto it = m.find(key);
  return it == m.end() ? 0.0 : it->second;
}

template <typename Getter>
double integrate(const std::vector<RateInterval>& iv, double a, double b, Getter get) {
  if (!(b > a)) return 0;
  double acc = 0;
  for (const RateInterval& seg : iv) {
    if (seg.t1 <= a) continue;
    if (seg.t0 >= b) break;
    double lo = std::max(a, seg.t0);
    double hi = std::min(b, seg.t1);
    if (hi > lo) acc += get(seg) * (hi - lo);
  }
  return acc;
}

}  // namespace

double FractionalSchedule::page_rate_at(double t, int page) const {
  int i = interval_at(intervals, t);
  return i < 0 ? 0.0 : map_get(intervals[size_t(i)].page_rate, page);
}

double FractionalSchedule::total_rate_at(double t) const {
  int i = interval_at(intervals, t);
  return i < 0 ? 0.0 : intervals[size_t(i)].total_rate();
}

double FractionalSchedule::page_volume(int page, double a, double b) const {
  return integrate(intervals, a, b, [&](const RateInterval& seg) { return map_get(seg.page_rate, page); });
}

double FractionalSchedule::contribution_volume(int request, double a, double b) const {
  return integrate(intervals, a, b,
                   [&](const RateInterval& seg) { return map_get(seg.contribution, request); });
}

std::vector<std::string> check_fractional_invariants(const FractionalSchedule& fs, const Trace& trace,
                                                     double tol) {
  std::vector<std::string> issues;
  if (fs.completion.size() != trace.requests().size()) {
    issues.push_back("completion vector has " + std::to_string(fs.completion.size()) + " entries for " +
                     std::to_string(trace.requests().size()) + " requests");
    return issues;
  }
  double prev = 0;
  for (size_t i = 0; i < fs.intervals.size(); ++i) {
    const RateInterval& seg = fs.intervals[i];
    if (!(seg.t1 > seg.t0)) issues.push_back("interval " + std::to_string(i) + " has nonpositive length");
    if (std::abs(seg.t0 - prev) > tol) {
      issues.push_back("interval " + std::to_string(i) + " starts at " + fmt_g12(seg.t0) +
                       ", expected " + fmt_g12(prev));
    }
    prev = seg.t1;
    if (!seg.contribution.empty()) {
      std::map<int, double> by_page;
      for (const auto& [req, x] : seg.contribution) by_page[trace.requests()[size_t(req)].page] += x;
      for (const auto& [page, rate] : seg.page_rate) {
        if (std::abs(rate - map_get(by_page, page)) > tol * std::max(1.0, rate)) {
          issues.push_back("interval " + std::to_string(i) + ": page " + trace.pages()[size_t(page)].id +
                           " rate != sum of contributions");
        }
      }
    }
  }
  for (const Request& r : trace.requests()) {
    double f = fs.completion[size_t(r.id)];
    if (!std::isfinite(f)) {
      issues.push_back("request " + std::to_string(r.id) + " never completes");
      continue;
    }
    double delivered = fs.page_volume(r.page, r.arrival, f);
    double sigma = trace.sigma_of(r);
    if (std::abs(delivered - sigma) > tol * std::max(1.0, sigma)) {
      issues.push_back("request " + std::to_string(r.id) + ": delivered " + fmt_g12(delivered) +
                       " of sigma " + fmt_g12(sigma) + " over [arrival, completion]");
    }
  }
  return issues;
}

std::string emit_schedule(const FractionalSchedule& fs, const Trace& trace) {
  std::ostringstream out;
  out << "# wattcast fractional schedule\n";
  out << "meta\teps=" << fmt_g12(fs.eps) << "\tbeta=" << fmt_g12(fs.beta) << "\taug="
      << fmt_g12(fs.augmentation) << '\n';
  for (const RateInterval& seg : fs.intervals) {
    out << "interval\t" << fmt_g12(seg.t0) << '\t' << fmt_g12(seg.t1);
    for (const auto& [page, rate] : seg.page_rate) {
      out << "\tp:" << trace.pages()[size_t(page)].id << '=' << fmt_g12(rate);
    }
    for (const auto& [req, x] : seg.contribution) out << "\tr:" << req << '=' << fmt_g12(x);
    out << '\n';
  }
  for (size_t i = 0; i < fs.completion.size(); ++i) {
    if (std::isfinite(fs.completion[i])) {
      out << "done\trequest=" << i << "\tt=" << fmt_g12(fs.completion[i]) << '\n';
    }
  }
  return out.str();
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) fields.push_back(cur);
  return fields;
}

// Splits "key=value", returning value; throws when the key does not match.
std::string expect_kv(const std::string& field, const std::string& key, int line) {
  auto eq = field.find('=');
  if (eq == std::string::npos || field.substr(0, eq) != key) {
    fail(Errc::SyntaxError, "line " + std::to_string(line) + ": expected " + key + "=<value>");
  }
  return field.substr(eq + 1);
}

}  // namespace

FractionalSchedule parse_schedule(const std::string& text, const Trace& trace) {
  FractionalSchedule fs;
  fs.completion.assign(trace.requests().size(), kNoTime);
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("t=", 0) == 0) continue;  // event log lines are informational
    auto fields = split(line, '\t');
    const std::string& tag = fields[0];
    if (tag == "meta") {
      for (size_t i = 1; i < fields.size(); ++i) {
        auto eq = fields[i].find('=');
        if (eq == std::string::npos) fail(Errc::SyntaxError, "line " + std::to_string(line_no) + ": bad meta");
        std::string key = fields[i].substr(0, eq);
        double v = parse_double(fields[i].substr(eq + 1), line_no);
        if (key == "eps") {
          fs.eps = v;
        } else if (key == "beta") {
          fs.beta = v;
        } else if (key == "aug") {
          fs.augmentation = v;
        } else {
          fail(Errc::SyntaxError, "line " + std::to_string(line_no) + ": unknown meta key '" + key + "'");
        }
      }
    } else if (tag == "interval") {
      if (fields.size() < 3) fail(Errc::SyntaxError, "line " + std::to_string(line_no) + ": short interval");
      RateInterval seg;
      seg.t0 = parse_double(fields[1], line_no);
      seg.t1 = parse_double(fields[2], line_no);
      for (size_t i = 3; i < fields.size(); ++i) {
        const std::string& f = fields[i];
        auto eq = f.find('=');
        if (f.size() < 3 || f[1] != ':' || eq == std::string::npos) {
          fail(Errc::SyntaxError, "line " + std::to_string(line_no) + ": bad rate field '" + f + "'");
        }
        double v = parse_double(f.substr(eq + 1), line_no);
        std::string name = f.substr(2, eq - 2);
        if (f[0] == 'p') {
          seg.page_rate[trace.page_index(name)] = v;
        } else if (f[0] == 'r') {
          int req = int(parse_double(name, line_no));
          if (req < 0 || size_t(req) >= trace.requests().size()) {
            fail(Errc::MismatchedTraces, "line " + std::to_string(line_no) + ": request " + name +
                                             " not in trace");
          }
          seg.contribution[req] = v;
        } else {
          fail(Errc::SyntaxError, "line " + std::to_string(line_no) + ": bad rate field '" + f + "'");
        }
      }
      fs.intervals.push_back(std::move(seg));
    } else if (tag == "done") {
      if (fields.size() != 3) fail(Errc::SyntaxError, "line " + std::to_string(line_no) + ": bad done line");
      int req = int(parse_double(expect_kv(fields[1], "request", line_no), line_no));
      double f = parse_double(expect_kv(fields[2], "t", line_no), line_no);
      if (req < 0 || size_t(req) >= trace.requests().size()) {
        fail(Errc::MismatchedTraces, "line " + std::to_string(line_no) + ": request " +
                                         std::to_string(req) + " not in trace");
      }
      fs.completion[size_t(req)] = f;
    } else {
      fail(Errc::SyntaxError, "line " + std::to_string(line_no) + ": unknown line tag '" + tag + "'");
    }
  }
  return fs;
}

std::string format_event(const SimEvent& ev) {
  std::ostringstream out;
  out << "t=" << fmt_g12(ev.t) << " kind=" << (ev.kind == SimEvent::Kind::Arrival ? "arrival" : "completion")
      << " request=" << ev.request << " |Na|=" << ev.na_after << " speed=" << fmt_g12(ev.speed_after);
  return out.str();
}

std::string emit_integral(const IntegralSchedule& is, const Trace& trace) {
  std::ostringstream out;
  for (const Piece& piece : is.pieces) {
    out << "piece\tpage=" << trace.pages()[size_t(piece.page)].id << "\tk=" << piece.k << "\tstart="
        << fmt_g12(piece.start) << "\tdur=" << fmt_g12(piece.duration) << "\tspeed="
        << fmt_g12(piece.speed) << '\n';
  }
  for (size_t i = 0; i < is.completion.size(); ++i) {
    if (std::isfinite(is.completion[i])) {
      out << "done\trequest=" << i << "\tt=" << fmt_g12(is.completion[i]) << '\n';
    }
  }
  return out.str();
}

}  // namespace wattcast
