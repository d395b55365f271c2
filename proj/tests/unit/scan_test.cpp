#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "bellscan/herald.hpp"
#include "bellscan/ingest.hpp"
#include "bellscan/scan.hpp"
#include "bellscan/stats.hpp"
#include "bellscan/synth.hpp"

namespace bellscan {
namespace {

std::vector<CandidateEvent> synthetic(std::uint64_t seed, double epsilon, double w_ref,
                                      std::uint64_t n = 6'000) {
  SynthConfig cfg;
  cfg.n_attempts = n;
  cfg.seed = seed;
  cfg.epsilon = epsilon;
  cfg.w_ref = w_ref;
  cfg.invalid_rate = 0.004;
  return generate(cfg);
}

std::string csv(const ScanGrid& g) {
  std::ostringstream out;
  write_scan_csv(out, g.results);
  return out.str();
}

TEST(Scan1d, EmptyEventsGiveUndefinedPoints) {
  const auto grid = scan_1d({}, HeraldFilter{}, -5'000, 5'000, 1'000);
  ASSERT_EQ(grid.results.size(), 11u);
  for (const auto& r : grid.results) {
    EXPECT_EQ(r.sample_size, 0u);
    EXPECT_FALSE(r.stats.has_value());
  }
}

TEST(Scan1d, InclusiveSteppingOverPublishedRange) {
  const auto grid = scan_1d({}, HeraldFilter{}, -50'000, 20'000, 1'000);
  EXPECT_EQ(grid.results.size(), 71u);
  EXPECT_EQ(grid.results.front().start_offset_ps, -50'000);
  EXPECT_EQ(grid.results.back().start_offset_ps, 20'000);
  EXPECT_EQ(offset_range(0, 10, 3), (std::vector<Picoseconds>{0, 3, 6, 9}));
  EXPECT_THROW(offset_range(0, 10, 0), DomainError);
  EXPECT_THROW(offset_range(5, 0, 1), DomainError);
  EXPECT_THROW(threshold_range(0, 300, 10), DomainError);
  EXPECT_EQ(threshold_range(0, 250, 10).size(), 26u);
}

TEST(Scan2d, SinglePointEqualsDirectAnalysis) {
  const auto events = synthetic(3, 0.0, 0.2);
  const HeraldFilter base{0, 0, 100'000, 0};
  const std::vector<Picoseconds> offsets = {-7'000};
  const std::vector<std::uint32_t> thresholds = {120};
  const auto grid = scan_2d(events, base, offsets, thresholds);
  HeraldFilter f = base;
  f.start_offset_ps = -7'000;
  f.invalid_threshold = 120;
  const auto direct = analyze_sample(events, f);
  std::ostringstream a, b;
  write_scan_csv(a, grid.results);
  write_scan_csv(b, std::span(&direct, 1));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(direct.sample_size, select_sample(events, f).size());
}

TEST(Scan2d, ThresholdRowMatchesScan1d) {
  const auto events = synthetic(4, 0.1, 0.3);
  HeraldFilter base;
  base.invalid_threshold = 250;
  const auto one = scan_1d(events, base, -20'000, 10'000, 2'000);
  const std::vector<std::uint32_t> thresholds = {0, 100, 250};
  const auto two = scan_2d(events, base, one.offsets, thresholds);
  ASSERT_EQ(two.results.size(), one.results.size() * 3);
  std::vector<ScanResult> row;
  for (std::size_t i = 0; i < one.offsets.size(); ++i) row.push_back(two.at(i, 2));
  std::ostringstream a, b;
  write_scan_csv(a, row);
  write_scan_csv(b, one.results);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Scan2d, EveryPointMatchesDirectAnalysisAndSizesAreMonotone) {
  const auto events = synthetic(5, 0.1, 0.3);
  const HeraldFilter base;
  const auto offsets = offset_range(-30'000, 20'000, 5'000);
  const auto thresholds = threshold_range(0, 250, 50);
  const auto grid = scan_2d(events, base, offsets, thresholds, 3);
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    for (std::size_t j = 0; j < thresholds.size(); ++j) {
      const auto& r = grid.at(i, j);
      HeraldFilter f = base;
      f.start_offset_ps = offsets[i];
      f.invalid_threshold = thresholds[j];
      const auto direct = analyze_sample(events, f);
      EXPECT_EQ(r.sample_size, direct.sample_size);
      ASSERT_EQ(r.stats.has_value(), direct.stats.has_value());
      if (r.stats) EXPECT_EQ(r.stats->chsh.value, direct.stats->chsh.value);
      if (i > 0) EXPECT_LE(r.sample_size, grid.at(i - 1, j).sample_size);
      if (j > 0) EXPECT_LE(r.sample_size, grid.at(i, j - 1).sample_size);
    }
  }
}

TEST(Scan2d, OutputIndependentOfWorkerCount) {
  const auto events = synthetic(6, 0.2, 0.4);
  const auto offsets = offset_range(-50'000, 20'000, 5'000);
  const auto thresholds = threshold_range(0, 250, 25);
  const auto reference = csv(scan_2d(events, HeraldFilter{}, offsets, thresholds, 1));
  for (unsigned jobs : {2u, 3u, 8u, 64u}) {
    EXPECT_EQ(csv(scan_2d(events, HeraldFilter{}, offsets, thresholds, jobs)), reference);
  }
}

TEST(Scan2d, RejectsBadAxes) {
  const std::vector<Picoseconds> offsets = {0};
  const std::vector<std::uint32_t> none;
  const std::vector<std::uint32_t> too_high = {251};
  EXPECT_THROW(scan_2d({}, HeraldFilter{}, offsets, none), DomainError);
  EXPECT_THROW(scan_2d({}, HeraldFilter{}, offsets, too_high), DomainError);
}

TEST(Scan1d, InjectedSignalEmergesAtEarlyOffsets) {
  SynthConfig cfg;
  cfg.n_attempts = 20'000;
  cfg.seed = 77;
  cfg.epsilon = 0.3;
  cfg.w_ref = 0.5;
  cfg.invalid_rate = 0.0;
  const auto events = generate(cfg);
  const auto grid = scan_1d(events, HeraldFilter{}, -50'000, 20'000, 1'000);
  double early = 0.0, late = 0.0;
  int n_early = 0, n_late = 0;
  for (const auto& r : grid.results) {
    ASSERT_TRUE(r.stats && r.stats->chi2);
    const double log_p = std::log10(std::max(r.stats->chi2->p, 1e-300));
    if (r.start_offset_ps <= -8'000) {
      EXPECT_LT(r.stats->chi2->p, 1e-10) << r.start_offset_ps;
      early += log_p;
      ++n_early;
    } else if (r.start_offset_ps >= 0) {
      late += log_p;
      ++n_late;
    }
  }
  EXPECT_LT(early / n_early, late / n_late - 5.0);
  // Between the reflection onset and the nominal start, p falls as the window opens earlier.
  const auto p_at = [&](Picoseconds off) {
    return grid.results[static_cast<std::size_t>((off + 50'000) / 1'000)].stats->chi2->p;
  };
  EXPECT_LT(p_at(-8'000), p_at(-5'000));
  EXPECT_LT(p_at(-5'000), p_at(0));
}

TEST(Histogram, BinningRules) {
  const std::vector<double> ps = {0.0125, 0.0, 0.05, 0.999, 1.0};
  const auto h = pvalue_histogram(ps);
  EXPECT_EQ(h.total, 5u);
  EXPECT_EQ(h.counts[0], 2u);
  EXPECT_EQ(h.counts[1], 1u);
  EXPECT_EQ(h.counts[19], 2u);
  EXPECT_DOUBLE_EQ(h.bin_edges[0], 0.0);
  EXPECT_DOUBLE_EQ(h.bin_edges[1], 0.05);
  EXPECT_DOUBLE_EQ(h.bin_edges[20], 1.0);
}

TEST(Histogram, UndefinedPointsExcluded) {
  const auto grid = scan_1d({}, HeraldFilter{}, 0, 5'000, 1'000);
  EXPECT_EQ(pvalue_histogram(grid.results, PValueKind::nosig_chi2).total, 0u);
  EXPECT_EQ(pvalue_histogram(grid.results, PValueKind::chsh).total, 0u);
}

TEST(Histogram, SingleDefinedPoint) {
  ScanResult r;
  r.sample_size = 1242;
  r.stats = SampleStats{};
  r.stats->chi2 = Chi2Result{12.75, 4, 0.0125};
  r.stats->chsh.p = 0.5;
  const auto h = pvalue_histogram(std::span(&r, 1), PValueKind::nosig_chi2);
  EXPECT_EQ(h.total, 1u);
  EXPECT_EQ(h.counts[0], 1u);
  EXPECT_EQ(pvalue_histogram(std::span(&r, 1), PValueKind::chsh).counts[10], 1u);
}

TEST(Histogram, UniformDistanceOfFlatAndSpikedInputs) {
  std::vector<double> flat;
  for (int i = 0; i < 2000; ++i) flat.push_back((i + 0.5) / 2000.0);
  EXPECT_NEAR(uniform_tv_distance(pvalue_histogram(flat)), 0.0, 1e-12);
  const std::vector<double> spike(100, 0.001);
  EXPECT_NEAR(uniform_tv_distance(pvalue_histogram(spike)), 0.95, 1e-12);
  EXPECT_EQ(uniform_tv_distance(PValueHistogram{}), 0.0);
}

}  // namespace
}  // namespace bellscan
