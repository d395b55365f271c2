#pragma once

// Domain types shared by the heralding filter, the statistics kernel, the
// sample-space scan and the synthetic generator.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace bellscan {

using Picoseconds = std::int64_t;

/// Clean-attempt counters saturate here; thresholds above it select nothing new.
inline constexpr std::uint32_t kMaxCleanAttempts = 250;

/// Raised for values that violate a domain invariant (bad setting, outcome,
/// counter, or configuration).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An estimator was asked for a setting pair with no recorded trials.
class EmptyCellError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class Outcome : std::int8_t { minus = -1, plus = +1 };

constexpr int sign(Outcome o) noexcept { return static_cast<int>(o); }

/// One potential event-ready trial.
struct CandidateEvent {
  std::uint32_t run_id = 0;
  std::uint64_t sync_index = 0;
  Picoseconds click1_ps = 0;
  Picoseconds click2_ps = 0;
  std::uint32_t clean_attempts = 0;
  std::uint8_t setting_a = 0;
  std::uint8_t setting_b = 0;
  Outcome outcome_x = Outcome::plus;
  Outcome outcome_y = Outcome::plus;

  friend bool operator==(const CandidateEvent&, const CandidateEvent&) = default;
};

/// Unvalidated field values as they come off a record or a generator.
struct RawEvent {
  std::int64_t run_id = 0;
  std::int64_t sync_index = 0;
  std::int64_t click1_ps = 0;
  std::int64_t click2_ps = 0;
  std::int64_t clean_attempts = 0;
  std::int64_t setting_a = 0;
  std::int64_t setting_b = 0;
  std::int64_t outcome_x = 1;
  std::int64_t outcome_y = 1;
};

/// Checks every field and saturates clean_attempts at kMaxCleanAttempts.
/// Throws DomainError naming the offending field.
CandidateEvent validate_event(const RawEvent& raw);

/// Inverse of validate_event for an already-valid event.
RawEvent to_raw(const CandidateEvent& event) noexcept;

/// Event-ready selection parameters. The effective window opens at
/// window_start_ps + start_offset_ps and closes at window_stop_ps, both
/// inclusive.
struct HeraldFilter {
  Picoseconds window_start_ps = 0;
  Picoseconds start_offset_ps = 0;
  Picoseconds window_stop_ps = 100'000;
  std::uint32_t invalid_threshold = kMaxCleanAttempts;

  constexpr Picoseconds effective_start() const noexcept {
    return window_start_ps + start_offset_ps;
  }
  constexpr bool degenerate() const noexcept { return effective_start() >= window_stop_ps; }

  /// Throws DomainError when invalid_threshold exceeds kMaxCleanAttempts.
  void validate() const;

  friend bool operator==(const HeraldFilter&, const HeraldFilter&) = default;
};

/// The 16 joint counts N^{xy}_{ab}.
class CountsTable {
 public:
  CountsTable() = default;

  std::uint64_t at(int a, int b, Outcome x, Outcome y) const { return counts_[index(a, b, x, y)]; }
  std::uint64_t& at(int a, int b, Outcome x, Outcome y) { return counts_[index(a, b, x, y)]; }

  void add(const CandidateEvent& event) {
    ++at(event.setting_a, event.setting_b, event.outcome_x, event.outcome_y);
  }

  std::uint64_t total(int a, int b) const;
  std::uint64_t total() const;

  /// Builds a table for one setting pair from (N++, N+-, N-+, N--).
  static CountsTable for_pair(int a, int b, std::array<std::uint64_t, 4> cells);

  friend bool operator==(const CountsTable&, const CountsTable&) = default;

 private:
  static std::size_t index(int a, int b, Outcome x, Outcome y);

  std::array<std::uint64_t, 16> counts_{};
};

/// A point estimate with its propagated standard deviation.
struct Estimate {
  double value = 0.0;
  double sigma = 0.0;
};

/// An estimate tested against a null value.
struct StatWithSigma {
  double value = 0.0;
  double sigma = 0.0;
  double z = 0.0;
  double p = 1.0;
  /// sigma is zero while value differs from the null; z is infinite, p is 0.
  bool degenerate = false;
};

/// The four signaling statistics S_{A->B0}, S_{A->B1}, S_{B->A0}, S_{B->A1}.
struct NoSignalSet {
  StatWithSigma ab0;
  StatWithSigma ab1;
  StatWithSigma ba0;
  StatWithSigma ba1;
};

struct Chi2Result {
  double chi2 = 0.0;
  int dof = 4;
  double p = 1.0;
};

/// Every statistic computed for one selected sample. chi2 is absent when a
/// no-signaling sigma vanishes.
struct SampleStats {
  StatWithSigma chsh;
  double p_chsh_binomial = 1.0;
  NoSignalSet nosig;
  std::optional<Chi2Result> chi2;
};

/// One grid point of the sample-space scan. stats is absent when a setting
/// pair in the selected sample is empty.
struct ScanResult {
  Picoseconds start_offset_ps = 0;
  std::uint32_t invalid_threshold = 0;
  std::uint64_t sample_size = 0;
  std::optional<SampleStats> stats;
};

}  // namespace bellscan
