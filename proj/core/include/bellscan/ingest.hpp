#pragma once

// CSV event files and scan-result tables.
//
// Event file: header `run_id,sync_index,click1_ps,click2_ps,clean_attempts,a,b,x,y`
// followed by one comma-separated integer record per line, outcomes written
// as `+1`/`-1`, LF line endings.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bellscan/model.hpp"

namespace bellscan {

inline constexpr std::string_view kEventHeader =
    "run_id,sync_index,click1_ps,click2_ps,clean_attempts,a,b,x,y";

inline constexpr std::string_view kScanHeader =
    "start_offset_ps,invalid_threshold,N,S_chsh,sigma_chsh,p_chsh_gauss,p_chsh_binom,"
    "S_AB0,sig_AB0,S_AB1,sig_AB1,S_BA0,sig_BA0,S_BA1,sig_BA1,chi2,p_chi2";

/// Malformed input. line() is 1-based; 0 when no line applies.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A sink rejected output.
class WriteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads an event file. A zero-byte stream is an empty sequence; otherwise the
/// first line must be kEventHeader. Trailing blank lines are ignored and CRLF
/// endings are accepted.
std::vector<CandidateEvent> read_events(std::istream& in);

void write_events(std::ostream& out, std::span<const CandidateEvent> events);

/// Renders a real with 6 significant digits ("%.6g").
std::string format_real(double v);

/// One row per result under kScanHeader. Undefined statistics are empty cells.
void write_scan_csv(std::ostream& out, std::span<const ScanResult> results);

/// Parses a table produced by write_scan_csv. Values come back at the 6-digit
/// precision they were written with; z and the no-signaling p-values are
/// recomputed from the stored value/sigma pairs.
std::vector<ScanResult> read_scan_csv(std::istream& in);

}  // namespace bellscan
