#include "wattcast/trace.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "wattcast/numeric.hpp"

namespace wattcast {

Trace Trace::build(std::vector<Page> pages, const std::vector<std::pair<std::string, double>>& requests) {
  Trace t;
  for (auto& p : pages) {
    if (p.id.empty()) fail(Errc::SyntaxError, "empty page id");
    if (!(p.sigma > 0) || !std::isfinite(p.sigma)) {
      fail(Errc::NonPositiveSize, "page '" + p.id + "' has size " + fmt_g12(p.sigma));
    }
    if (t.index_.count(p.id)) fail(Errc::SyntaxError, "duplicate page '" + p.id + "'");
    t.index_[p.id] = int(t.pages_.size());
    t.pages_.push_back(std::move(p));
  }
  t.requests_.reserve(requests.size());
  for (const auto& [page_id, arrival] : requests) {
    auto it = t.index_.find(page_id);
    if (it == t.index_.end()) fail(Errc::UnknownPage, "request for undeclared page '" + page_id + "'");
    if (arrival < 0 || !std::isfinite(arrival)) {
      fail(Errc::NegativeArrival, "request for '" + page_id + "' arrives at " + fmt_g12(arrival));
    }
    Request r;
    r.page = it->second;
    r.arrival = arrival;
    t.requests_.push_back(r);
  }
  // Stable sort keeps declaration order on arrival ties.
  std::stable_sort(t.requests_.begin(), t.requests_.end(),
                   [](const Request& a, const Request& b) { return a.arrival < b.arrival; });
  std::vector<int> seen(t.pages_.size(), 0);
  for (size_t i = 0; i < t.requests_.size(); ++i) {
    t.requests_[i].id = int(i);
    t.requests_[i].per_page_index = ++seen[size_t(t.requests_[i].page)];
  }
  return t;
}

Trace Trace::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Page> pages;
  std::vector<std::pair<std::string, double>> requests;
  std::map<std::string, bool> declared;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string t; ls >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    if (tokens[0] == "page") {
      if (tokens.size() != 3) fail(Errc::SyntaxError, "line " + std::to_string(line_no) + ": page <id> <sigma>");
      pages.push_back({tokens[1], parse_double(tokens[2], line_no)});
      declared[tokens[1]] = true;
    } else if (tokens[0] == "request") {
      if (tokens.size() != 3) {
        fail(Errc::SyntaxError, "line " + std::to_string(line_no) + ": request <page-id> <arrival>");
      }
      if (!declared.count(tokens[1])) {
        fail(Errc::UnknownPage, "line " + std::to_string(line_no) + ": page '" + tokens[1] + "' not declared");
      }
      requests.emplace_back(tokens[1], parse_double(tokens[2], line_no));
    } else {
      fail(Errc::SyntaxError, "line " + std::to_string(line_no) + ": unknown keyword '" + tokens[0] + "'");
    }
  }
  return build(std::move(pages), requests);
}

std::string Trace::emit() const {
  std::ostringstream out;
  out << "# wattcast trace\n";
  for (const Page& p : pages_) out << "page " << p.id << ' ' << fmt_g12(p.sigma) << '\n';
  for (const Request& r : requests_) {
    out << "request " << pages_[size_t(r.page)].id << ' ' << fmt_g12(r.arrival) << '\n';
  }
  return out.str();
}

int Trace::page_index(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) fail(Errc::UnknownPage, "page '" + id + "' not in trace");
  return it->second;
}

Trace weighted_jobs_to_trace(const std::vector<WeightedJob>& jobs) {
  std::vector<Page> pages;
  std::vector<std::pair<std::string, double>> requests;
  for (size_t j = 0; j < jobs.size(); ++j) {
    const WeightedJob& job = jobs[j];
    if (job.weight <= 0) fail(Errc::ZeroWeight, "job " + std::to_string(j) + " has weight " + std::to_string(job.weight));
    std::string id = "job" + std::to_string(j);
    pages.push_back({id, job.size});
    for (int w = 0; w < job.weight; ++w) requests.emplace_back(id, job.arrival);
  }
  return Trace::build(std::move(pages), requests);
}

namespace {

double quantize(double v) { return parse_double(fmt_g12(v)); }

}  // namespace

Trace gen_random_trace(std::uint64_t seed, int n_pages, int n_requests, double sigma_max, double horizon) {
  if (n_pages <= 0) fail(Errc::InvalidArgument, "need at least one page");
  if (n_requests < 0) fail(Errc::InvalidArgument, "negative request count");
  if (!(sigma_max > 0)) fail(Errc::InvalidArgument, "sigma_max must be positive");
  if (horizon < 0) fail(Errc::InvalidArgument, "horizon must be nonnegative");
  std::mt19937_64 rng(seed);
  std::vector<Page> pages;
  for (int p = 0; p < n_pages; ++p) {
    double sigma = quantize(sigma_max * (1.0 - uniform01(rng)));  // in (0, sigma_max]
    pages.push_back({"p" + std::to_string(p), sigma});
  }
  std::vector<std::pair<std::string, double>> requests;
  for (int r = 0; r < n_requests; ++r) {
    int page = int(rng() % std::uint64_t(n_pages));
    double arrival = quantize(horizon * uniform01(rng));
    requests.emplace_back(pages[size_t(page)].id, arrival);
  }
  return Trace::build(std::move(pages), requests);
}

}  // namespace wattcast
