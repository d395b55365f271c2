#include <gtest/gtest.h>

#include <random>

#include "bellscan/model.hpp"
#include "test_support.hpp"

namespace bellscan {
namespace {

TEST(ValidateEvent, SaturatesCleanAttempts) {
  const auto e = validate_event(RawEvent{0, 0, 0, 0, 300, 0, 1, +1, -1});
  EXPECT_EQ(e.clean_attempts, 250u);
  EXPECT_EQ(e.setting_a, 0);
  EXPECT_EQ(e.setting_b, 1);
  EXPECT_EQ(e.outcome_x, Outcome::plus);
  EXPECT_EQ(e.outcome_y, Outcome::minus);
}

TEST(ValidateEvent, RejectsSettingOutOfRange) {
  try {
    validate_event(RawEvent{0, 0, 0, 0, 0, 2, 0, +1, +1});
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("setting_a out of range"), std::string::npos);
  }
  EXPECT_THROW(validate_event(RawEvent{0, 0, 0, 0, 0, 0, -1, +1, +1}), DomainError);
}

TEST(ValidateEvent, RejectsOutcomesAndNegativeCounters) {
  EXPECT_THROW(validate_event(RawEvent{0, 0, 0, 0, 0, 0, 0, 0, +1}), DomainError);
  EXPECT_THROW(validate_event(RawEvent{0, 0, 0, 0, 0, 0, 0, +1, 2}), DomainError);
  EXPECT_THROW(validate_event(RawEvent{-1, 0, 0, 0, 0, 0, 0, +1, +1}), DomainError);
  EXPECT_THROW(validate_event(RawEvent{0, -3, 0, 0, 0, 0, 0, +1, +1}), DomainError);
  EXPECT_THROW(validate_event(RawEvent{0, 0, 0, 0, -1, 0, 0, +1, +1}), DomainError);
}

TEST(ValidateEvent, AcceptsNegativeClickOffsetsVerbatim) {
  const auto e = validate_event(RawEvent{0, 0, -1200, 3400, 0, 0, 0, +1, +1});
  EXPECT_EQ(e.click1_ps, -1200);
  EXPECT_EQ(e.click2_ps, 3400);
  EXPECT_EQ(e.clean_attempts, 0u);
}

TEST(ValidateEvent, IdentityOnValidEvents) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_int_distribution<std::int64_t> click(-60'000, 60'000);
  std::uniform_int_distribution<std::int64_t> clean(0, 250);
  for (int i = 0; i < 500; ++i) {
    const auto e = validate_event(RawEvent{bit(rng), i, click(rng), click(rng), clean(rng), bit(rng),
                                           bit(rng), bit(rng) ? 1 : -1, bit(rng) ? 1 : -1});
    EXPECT_EQ(validate_event(to_raw(e)), e);
  }
}

TEST(HeraldFilter, ThresholdRangeChecked) {
  HeraldFilter f;
  EXPECT_NO_THROW(f.validate());
  f.invalid_threshold = 251;
  EXPECT_THROW(f.validate(), DomainError);
}

TEST(HeraldFilter, DegenerateWhenStartReachesStop) {
  HeraldFilter f{0, 0, 10, 0};
  EXPECT_FALSE(f.degenerate());
  f.start_offset_ps = 10;
  EXPECT_TRUE(f.degenerate());
}

TEST(CountsTable, TotalsNonDecreasingUnderAdds) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> bit(0, 1);
  CountsTable t;
  std::uint64_t previous = 0;
  for (int i = 0; i < 200; ++i) {
    const int a = bit(rng), b = bit(rng);
    const auto before = t.total(a, b);
    t.add(testing::make_event(a, b, bit(rng) ? 1 : -1, bit(rng) ? 1 : -1));
    EXPECT_EQ(t.total(a, b), before + 1);
    EXPECT_EQ(t.total(), previous + 1);
    previous = t.total();
  }
}

TEST(CountsTable, ForPairPlacesCells) {
  const auto t = CountsTable::for_pair(1, 0, {1, 2, 3, 4});
  EXPECT_EQ(t.at(1, 0, Outcome::plus, Outcome::minus), 2u);
  EXPECT_EQ(t.at(1, 0, Outcome::minus, Outcome::plus), 3u);
  EXPECT_EQ(t.total(1, 0), 10u);
  EXPECT_EQ(t.total(0, 0), 0u);
  EXPECT_THROW(static_cast<void>(t.at(2, 0, Outcome::plus, Outcome::plus)), DomainError);
}

}  // namespace
}  // namespace bellscan
