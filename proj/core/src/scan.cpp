#include "bellscan/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "bellscan/herald.hpp"
#include "bellscan/stats.hpp"

namespace bellscan {

namespace {

std::optional<double> selected_p(const ScanResult& r, PValueKind which) {
  if (!r.stats) return std::nullopt;
  if (which == PValueKind::chsh) return r.stats->chsh.p;
  if (!r.stats->chi2) return std::nullopt;
  return r.stats->chi2->p;
}

bool has_empty_pair(const CountsTable& counts) {
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      if (counts.total(a, b) == 0) return true;
    }
  }
  return false;
}

}  // namespace

ScanResult analyze_sample(std::span<const CandidateEvent> events, const HeraldFilter& filter) {
  const CountsTable counts = tabulate_selected(events, filter);
  ScanResult r;
  r.start_offset_ps = filter.start_offset_ps;
  r.invalid_threshold = filter.invalid_threshold;
  r.sample_size = counts.total();
  if (!has_empty_pair(counts)) r.stats = analyze_counts(counts);
  return r;
}

std::vector<Picoseconds> offset_range(Picoseconds min, Picoseconds max, Picoseconds step) {
  if (step <= 0) throw DomainError("offset step must be positive");
  if (min > max) throw DomainError("offset range is empty (min > max)");
  std::vector<Picoseconds> out;
  for (Picoseconds v = min; v <= max; v += step) out.push_back(v);
  return out;
}

std::vector<std::uint32_t> threshold_range(std::uint32_t min, std::uint32_t max,
                                           std::uint32_t step) {
  if (step == 0) throw DomainError("threshold step must be positive");
  if (min > max) throw DomainError("threshold range is empty (min > max)");
  if (max > kMaxCleanAttempts) {
    throw DomainError("threshold above " + std::to_string(kMaxCleanAttempts));
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = min; v <= max; v += step) out.push_back(v);
  return out;
}

ScanGrid scan_1d(std::span<const CandidateEvent> events, const HeraldFilter& base,
                 Picoseconds offset_min, Picoseconds offset_max, Picoseconds step, unsigned jobs) {
  const auto offsets = offset_range(offset_min, offset_max, step);
  const std::uint32_t threshold = base.invalid_threshold;
  return scan_2d(events, base, offsets, std::span(&threshold, 1), jobs);
}

ScanGrid scan_2d(std::span<const CandidateEvent> events, const HeraldFilter& base,
                 std::span<const Picoseconds> offsets, std::span<const std::uint32_t> thresholds,
                 unsigned jobs) {
  if (offsets.empty() || thresholds.empty()) throw DomainError("scan axis is empty");
  for (auto t : thresholds) {
    if (t > kMaxCleanAttempts) throw DomainError("threshold above " + std::to_string(kMaxCleanAttempts));
  }

  ScanGrid grid;
  grid.offsets.assign(offsets.begin(), offsets.end());
  grid.thresholds.assign(thresholds.begin(), thresholds.end());
  const std::size_t points = offsets.size() * thresholds.size();
  grid.results.resize(points);

  auto evaluate = [&](std::size_t i) {
    HeraldFilter f = base;
    f.start_offset_ps = grid.offsets[i / grid.thresholds.size()];
    f.invalid_threshold = grid.thresholds[i % grid.thresholds.size()];
    grid.results[i] = analyze_sample(events, f);
  };

  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, points);
  if (workers == 1) {
    for (std::size_t i = 0; i < points; ++i) evaluate(i);
    return grid;
  }

  // Each slot is written by exactly one worker.
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (std::size_t i = next.fetch_add(1); i < points; i = next.fetch_add(1)) evaluate(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return grid;
}

PValueHistogram pvalue_histogram(std::span<const double> pvalues) {
  PValueHistogram h;
  for (std::size_t i = 0; i <= kHistogramBins; ++i) {
    h.bin_edges[i] = static_cast<double>(i) / static_cast<double>(kHistogramBins);
  }
  for (double p : pvalues) {
    const double clamped = std::clamp(p, 0.0, 1.0);
    const auto bin = std::min(static_cast<std::size_t>(clamped * kHistogramBins), kHistogramBins - 1);
    ++h.counts[bin];
    ++h.total;
  }
  return h;
}

PValueHistogram pvalue_histogram(std::span<const ScanResult> results, PValueKind which) {
  std::vector<double> ps;
  ps.reserve(results.size());
  for (const auto& r : results) {
    if (auto p = selected_p(r, which)) ps.push_back(*p);
  }
  return pvalue_histogram(ps);
}

double uniform_tv_distance(const PValueHistogram& hist) {
  if (hist.total == 0) return 0.0;
  const double expected = 1.0 / static_cast<double>(kHistogramBins);
  double sum = 0.0;
  for (auto c : hist.counts) {
    sum += std::abs(static_cast<double>(c) / static_cast<double>(hist.total) - expected);
  }
  return 0.5 * sum;
}

}  // namespace bellscan
