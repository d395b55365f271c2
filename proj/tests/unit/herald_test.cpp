#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "bellscan/herald.hpp"
#include "bellscan/stats.hpp"
#include "test_support.hpp"

namespace bellscan {
namespace {

using testing::make_event;

std::vector<CandidateEvent> random_events(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_int_distribution<Picoseconds> click(-30'000, 30'000);
  std::uniform_int_distribution<int> clean(0, 250);
  std::vector<CandidateEvent> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto e = make_event(bit(rng), bit(rng), bit(rng) ? 1 : -1, bit(rng) ? 1 : -1, click(rng),
                        click(rng), clean(rng));
    e.sync_index = i;
    out.push_back(e);
  }
  return out;
}

bool is_subsequence(const std::vector<CandidateEvent>& sub, const std::vector<CandidateEvent>& of) {
  auto it = of.begin();
  for (const auto& e : sub) {
    it = std::find(it, of.end(), e);
    if (it == of.end()) return false;
    ++it;
  }
  return true;
}

TEST(SelectSample, DegenerateWindowSelectsNothing) {
  std::mt19937_64 rng(1);
  const auto events = random_events(rng, 100);
  EXPECT_TRUE(select_sample(events, HeraldFilter{0, 5'000, 5'000, 0}).empty());
  EXPECT_TRUE(select_sample(events, HeraldFilter{0, 10'000, -10'000, 0}).empty());
}

TEST(SelectSample, VacuousFilterKeepsEverything) {
  std::mt19937_64 rng(2);
  const auto events = random_events(rng, 100);
  EXPECT_EQ(select_sample(events, HeraldFilter{0, -30'000, 30'000, 0}), events);
}

TEST(SelectSample, ThresholdIsInclusiveLowerBound) {
  const std::vector<CandidateEvent> events = {make_event(0, 0, 1, 1, 0, 0, 40),
                                              make_event(0, 1, 1, 1, 0, 0, 60),
                                              make_event(1, 0, 1, 1, 0, 0, 250)};
  const auto selected = select_sample(events, HeraldFilter{0, 0, 1'000, 50});
  ASSERT_EQ(selected.size(), 2u);
  EXPECT_EQ(selected[0].clean_attempts, 60u);
  EXPECT_EQ(selected[1].clean_attempts, 250u);
  EXPECT_EQ(select_sample(events, HeraldFilter{0, 0, 1'000, 60}).size(), 2u);
}

TEST(SelectSample, WindowBoundsInclusiveForBothClicks) {
  const HeraldFilter f{1'000, -500, 2'000, 0};  // opens at 500
  EXPECT_TRUE(passes(make_event(0, 0, 1, 1, 500, 2'000), f));
  EXPECT_FALSE(passes(make_event(0, 0, 1, 1, 499, 1'000), f));
  EXPECT_FALSE(passes(make_event(0, 0, 1, 1, 1'000, 499), f));
  EXPECT_FALSE(passes(make_event(0, 0, 1, 1, 1'000, 2'001), f));
  EXPECT_FALSE(passes(make_event(0, 0, 1, 1, 2'001, 1'000), f));
}

TEST(SelectSample, TabulateSelectedMatchesTabulateOfSelection) {
  std::mt19937_64 rng(3);
  const auto events = random_events(rng, 500);
  const HeraldFilter f{0, -5'000, 20'000, 100};
  EXPECT_EQ(tabulate_selected(events, f), tabulate(select_sample(events, f)));
}

TEST(SelectSampleProperty, MonotoneSubsequenceAndIdempotent) {
  std::mt19937_64 rng(20240917);
  std::uniform_int_distribution<Picoseconds> offset(-40'000, 40'000);
  std::uniform_int_distribution<Picoseconds> stop(-10'000, 40'000);
  std::uniform_int_distribution<std::uint32_t> threshold(0, 250);
  std::uniform_int_distribution<std::size_t> size(0, 120);
  for (int trial = 0; trial < 300; ++trial) {
    const auto events = random_events(rng, size(rng));
    HeraldFilter tight{0, offset(rng), stop(rng), threshold(rng)};
    HeraldFilter loose = tight;
    loose.start_offset_ps -= std::uniform_int_distribution<Picoseconds>(0, 20'000)(rng);
    loose.invalid_threshold -= std::uniform_int_distribution<std::uint32_t>(0, tight.invalid_threshold)(rng);

    const auto t = select_sample(events, tight);
    const auto l = select_sample(events, loose);
    EXPECT_TRUE(is_subsequence(t, l));
    EXPECT_TRUE(is_subsequence(l, events));
    EXPECT_EQ(select_sample(t, tight), t);
    EXPECT_EQ(select_sample(l, loose), l);
  }
}

}  // namespace
}  // namespace bellscan
