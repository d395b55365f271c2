#include "bellscan/model.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace bellscan {

namespace {

std::uint8_t checked_setting(std::int64_t v, const char* field) {
  if (v != 0 && v != 1) {
    throw DomainError(std::string(field) + " out of range: " + std::to_string(v) +
                      " (expected 0 or 1)");
  }
  return static_cast<std::uint8_t>(v);
}

Outcome checked_outcome(std::int64_t v, const char* field) {
  if (v == 1) return Outcome::plus;
  if (v == -1) return Outcome::minus;
  throw DomainError(std::string(field) + " out of range: " + std::to_string(v) +
                    " (expected +1 or -1)");
}

void check_non_negative(std::int64_t v, const char* field) {
  if (v < 0) throw DomainError(std::string(field) + " is negative: " + std::to_string(v));
}

}  // namespace

CandidateEvent validate_event(const RawEvent& raw) {
  check_non_negative(raw.run_id, "run_id");
  check_non_negative(raw.sync_index, "sync_index");
  check_non_negative(raw.clean_attempts, "clean_attempts");
  if (raw.run_id > std::numeric_limits<std::uint32_t>::max()) {
    throw DomainError("run_id out of range: " + std::to_string(raw.run_id));
  }

  CandidateEvent event;
  event.run_id = static_cast<std::uint32_t>(raw.run_id);
  event.sync_index = static_cast<std::uint64_t>(raw.sync_index);
  event.click1_ps = raw.click1_ps;
  event.click2_ps = raw.click2_ps;
  event.clean_attempts = static_cast<std::uint32_t>(
      std::min<std::int64_t>(raw.clean_attempts, kMaxCleanAttempts));
  event.setting_a = checked_setting(raw.setting_a, "setting_a");
  event.setting_b = checked_setting(raw.setting_b, "setting_b");
  event.outcome_x = checked_outcome(raw.outcome_x, "outcome_x");
  event.outcome_y = checked_outcome(raw.outcome_y, "outcome_y");
  return event;
}

RawEvent to_raw(const CandidateEvent& event) noexcept {
  return RawEvent{
      .run_id = event.run_id,
      .sync_index = static_cast<std::int64_t>(event.sync_index),
      .click1_ps = event.click1_ps,
      .click2_ps = event.click2_ps,
      .clean_attempts = event.clean_attempts,
      .setting_a = event.setting_a,
      .setting_b = event.setting_b,
      .outcome_x = sign(event.outcome_x),
      .outcome_y = sign(event.outcome_y),
  };
}

void HeraldFilter::validate() const {
  if (invalid_threshold > kMaxCleanAttempts) {
    throw DomainError("invalid_threshold out of range: " + std::to_string(invalid_threshold) +
                      " (expected 0.." + std::to_string(kMaxCleanAttempts) + ")");
  }
}

std::size_t CountsTable::index(int a, int b, Outcome x, Outcome y) {
  if ((a != 0 && a != 1) || (b != 0 && b != 1)) {
    throw DomainError("setting pair out of range: (" + std::to_string(a) + "," +
                      std::to_string(b) + ")");
  }
  const std::size_t xi = x == Outcome::plus ? 0 : 1;
  const std::size_t yi = y == Outcome::plus ? 0 : 1;
  return static_cast<std::size_t>(a) * 8 + static_cast<std::size_t>(b) * 4 + xi * 2 + yi;
}

std::uint64_t CountsTable::total(int a, int b) const {
  const auto first = counts_.begin() + static_cast<std::ptrdiff_t>(index(a, b, Outcome::plus, Outcome::plus));
  return std::accumulate(first, first + 4, std::uint64_t{0});
}

std::uint64_t CountsTable::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

CountsTable CountsTable::for_pair(int a, int b, std::array<std::uint64_t, 4> cells) {
  CountsTable t;
  t.at(a, b, Outcome::plus, Outcome::plus) = cells[0];
  t.at(a, b, Outcome::plus, Outcome::minus) = cells[1];
  t.at(a, b, Outcome::minus, Outcome::plus) = cells[2];
  t.at(a, b, Outcome::minus, Outcome::minus) = cells[3];
  return t;
}

}  // namespace bellscan
