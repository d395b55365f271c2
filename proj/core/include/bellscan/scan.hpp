#pragma once

// Sweeps the event-ready sample space over window-start offset and
// invalid-marker threshold, running the full statistics battery per point.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bellscan/model.hpp"

namespace bellscan {

struct ScanGrid {
  std::vector<Picoseconds> offsets;
  std::vector<std::uint32_t> thresholds;
  /// Row-major: offset outer, threshold inner.
  std::vector<ScanResult> results;

  const ScanResult& at(std::size_t offset_index, std::size_t threshold_index) const {
    return results.at(offset_index * thresholds.size() + threshold_index);
  }
};

/// Selects with `filter` and analyzes the sample. Points with an empty
/// setting pair carry the observed N and no statistics.
ScanResult analyze_sample(std::span<const CandidateEvent> events, const HeraldFilter& filter);

/// Inclusive arithmetic range min, min+step, ... <= max. Throws DomainError
/// when step <= 0 or min > max.
std::vector<Picoseconds> offset_range(Picoseconds min, Picoseconds max, Picoseconds step);
std::vector<std::uint32_t> threshold_range(std::uint32_t min, std::uint32_t max, std::uint32_t step);

/// Offsets swept at base.invalid_threshold. `jobs` worker threads evaluate
/// points concurrently; output order and content do not depend on it.
ScanGrid scan_1d(std::span<const CandidateEvent> events, const HeraldFilter& base,
                 Picoseconds offset_min, Picoseconds offset_max, Picoseconds step,
                 unsigned jobs = 1);

/// Full cross product of offsets and thresholds. Throws DomainError on an
/// empty axis or a threshold above kMaxCleanAttempts.
ScanGrid scan_2d(std::span<const CandidateEvent> events, const HeraldFilter& base,
                 std::span<const Picoseconds> offsets, std::span<const std::uint32_t> thresholds,
                 unsigned jobs = 1);

enum class PValueKind { nosig_chi2, chsh };

inline constexpr std::size_t kHistogramBins = 20;

/// 20 equal bins on [0,1]; bin i covers [i/20, (i+1)/20), the last bin also
/// takes p = 1.
struct PValueHistogram {
  std::array<double, kHistogramBins + 1> bin_edges{};
  std::array<std::uint64_t, kHistogramBins> counts{};
  std::uint64_t total = 0;
};

PValueHistogram pvalue_histogram(std::span<const ScanResult> results, PValueKind which);
PValueHistogram pvalue_histogram(std::span<const double> pvalues);

/// Total-variation distance between the normalized histogram and the uniform
/// distribution over its bins. Zero for an empty histogram.
double uniform_tv_distance(const PValueHistogram& hist);

}  // namespace bellscan
