#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wattcast/error.hpp"

namespace wattcast {

struct Page {
  std::string id;
  double sigma = 0;  // page volume, > 0

  bool operator==(const Page&) const = default;
};

struct Request {
  int id = 0;              // dense, assigned in (arrival, declaration) order
  int page = 0;            // index into Trace::pages()
  int per_page_index = 0;  // 1-based arrival index among this page's requests
  double arrival = 0;

  bool operator==(const Request&) const = default;
};

// A problem instance: page catalog plus requests sorted by (arrival, id).
// Equal arrivals keep declaration order, so request ids form a total order
// consistent with arrival order everywhere downstream.
class Trace {
 public:
  Trace() = default;

  // Pages in declaration order; requests as (page-id, arrival) in declaration
  // order. Sorting and id assignment happen here.
  static Trace build(std::vector<Page> pages, const std::vector<std::pair<std::string, double>>& requests);

  // Line grammar, '#' comments: `page <id> <sigma>` then `request <page-id> <arrival>`.
  static Trace parse(const std::string& text);

  // Canonical text: pages in declaration order, requests sorted, 12
  // significant digits, newline terminated. parse(emit()) == *this.
  std::string emit() const;

  const std::vector<Page>& pages() const { return pages_; }
  const std::vector<Request>& requests() const { return requests_; }

  int page_index(const std::string& id) const;
  const Page& page_of(const Request& r) const { return pages_[size_t(r.page)]; }
  double sigma_of(const Request& r) const { return pages_[size_t(r.page)].sigma; }

  bool operator==(const Trace&) const = default;

 private:
  std::vector<Page> pages_;
  std::vector<Request> requests_;
  std::map<std::string, int> index_;
};

struct WeightedJob {
  int weight = 1;  // positive integer
  double size = 0;
  double arrival = 0;
};

// Each job becomes a fresh page of the job's size plus `weight` identical
// requests at the job's arrival; scheduling the result realizes weighted flow
// time plus energy in the standard single-request-per-page model.
Trace weighted_jobs_to_trace(const std::vector<WeightedJob>& jobs);

// Deterministic function of the seed; page sizes uniform in (0, sigma_max],
// arrivals uniform in [0, horizon], page choice uniform. All values are
// quantized through the canonical 12-digit text format so generated traces
// round-trip exactly.
Trace gen_random_trace(std::uint64_t seed, int n_pages, int n_requests, double sigma_max, double horizon);

}  // namespace wattcast
