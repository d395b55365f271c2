#include "bellscan/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <string>

#include "bellscan/stats.hpp"

namespace bellscan {

namespace {

constexpr std::size_t kEventFields = 9;
constexpr std::size_t kScanFields = 17;

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t begin = 0;
  while (true) {
    const auto comma = line.find(',', begin);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(begin));
      return cells;
    }
    cells.push_back(line.substr(begin, comma - begin));
    begin = comma + 1;
  }
}

bool parse_int(std::string_view cell, std::int64_t& out) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty() || cell.front() == '+') return false;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size();
}

/// Reads lines, dropping a trailing CR. Returns false at end of stream.
bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

/// Collects non-header lines; blank lines are allowed only at the end.
std::vector<std::pair<std::size_t, std::string>> body_lines(std::istream& in,
                                                            std::string_view header) {
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string line;
  if (!next_line(in, line)) return lines;
  if (line != header) {
    throw ParseError(1, "header mismatch: expected '" + std::string(header) + "', got '" + line + "'");
  }
  std::size_t line_no = 1;
  std::size_t first_blank = 0;
  while (next_line(in, line)) {
    ++line_no;
    if (line.empty()) {
      if (first_blank == 0) first_blank = line_no;
      continue;
    }
    if (first_blank != 0) throw ParseError(first_blank, "blank line inside records");
    lines.emplace_back(line_no, line);
  }
  if (in.bad()) throw ParseError(line_no, "stream read failure");
  return lines;
}

void check_sink(std::ostream& out) {
  if (!out) throw WriteError("output stream rejected write");
}

void put_real(std::string& row, double v) {
  row += ',';
  row += format_real(v);
}

void put_empty(std::string& row, std::size_t cells) { row.append(cells, ','); }

std::optional<double> parse_real(std::string_view cell, std::size_t line_no, std::string_view col) {
  if (cell.empty()) return std::nullopt;
  const std::string text(cell);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size()) {
    throw ParseError(line_no, "column " + std::string(col) + ": not a number: '" + text + "'");
  }
  return v;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
      line_(line) {}

std::vector<CandidateEvent> read_events(std::istream& in) {
  std::vector<CandidateEvent> events;
  for (const auto& [line_no, line] : body_lines(in, kEventHeader)) {
    const auto cells = split(line);
    if (cells.size() != kEventFields) {
      throw ParseError(line_no, "expected " + std::to_string(kEventFields) + " fields, got " +
                                    std::to_string(cells.size()));
    }
    std::array<std::int64_t, kEventFields> v{};
    for (std::size_t i = 0; i < kEventFields; ++i) {
      if (!parse_int(cells[i], v[i])) {
        throw ParseError(line_no, "field " + std::to_string(i + 1) + " is not an integer: '" +
                                      std::string(cells[i]) + "'");
      }
    }
    try {
      events.push_back(validate_event(RawEvent{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]}));
    } catch (const DomainError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return events;
}

void write_events(std::ostream& out, std::span<const CandidateEvent> events) {
  std::string buffer;
  buffer.reserve(64 * (events.size() + 1));
  buffer += kEventHeader;
  buffer += '\n';
  for (const auto& e : events) {
    buffer += std::to_string(e.run_id);
    buffer += ',';
    buffer += std::to_string(e.sync_index);
    buffer += ',';
    buffer += std::to_string(e.click1_ps);
    buffer += ',';
    buffer += std::to_string(e.click2_ps);
    buffer += ',';
    buffer += std::to_string(e.clean_attempts);
    buffer += ',';
    buffer += std::to_string(e.setting_a);
    buffer += ',';
    buffer += std::to_string(e.setting_b);
    buffer += e.outcome_x == Outcome::plus ? ",+1" : ",-1";
    buffer += e.outcome_y == Outcome::plus ? ",+1" : ",-1";
    buffer += '\n';
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  check_sink(out);
}

std::string format_real(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  std::array<char, 32> buf{};
  const int n = std::snprintf(buf.data(), buf.size(), "%.6g", v);
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

void write_scan_csv(std::ostream& out, std::span<const ScanResult> results) {
  std::string buffer;
  buffer += kScanHeader;
  buffer += '\n';
  for (const auto& r : results) {
    std::string row = std::to_string(r.start_offset_ps) + ',' + std::to_string(r.invalid_threshold) +
                      ',' + std::to_string(r.sample_size);
    if (r.stats) {
      const auto& s = *r.stats;
      put_real(row, s.chsh.value);
      put_real(row, s.chsh.sigma);
      put_real(row, s.chsh.p);
      put_real(row, s.p_chsh_binomial);
      for (const auto* ns : {&s.nosig.ab0, &s.nosig.ab1, &s.nosig.ba0, &s.nosig.ba1}) {
        put_real(row, ns->value);
        put_real(row, ns->sigma);
      }
      if (s.chi2) {
        put_real(row, s.chi2->chi2);
        put_real(row, s.chi2->p);
      } else {
        put_empty(row, 2);
      }
    } else {
      put_empty(row, kScanFields - 3);
    }
    buffer += row;
    buffer += '\n';
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  check_sink(out);
}

std::vector<ScanResult> read_scan_csv(std::istream& in) {
  std::vector<ScanResult> results;
  for (const auto& [line_no, line] : body_lines(in, kScanHeader)) {
    const auto cells = split(line);
    if (cells.size() != kScanFields) {
      throw ParseError(line_no, "expected " + std::to_string(kScanFields) + " fields, got " +
                                    std::to_string(cells.size()));
    }
    std::int64_t offset = 0, threshold = 0, n = 0;
    if (!parse_int(cells[0], offset) || !parse_int(cells[1], threshold) ||
        !parse_int(cells[2], n) || threshold < 0 || n < 0) {
      throw ParseError(line_no, "bad start_offset_ps, invalid_threshold or N");
    }
    ScanResult r;
    r.start_offset_ps = offset;
    r.invalid_threshold = static_cast<std::uint32_t>(threshold);
    r.sample_size = static_cast<std::uint64_t>(n);

    static constexpr std::array<std::string_view, kScanFields> kColumns = {
        "start_offset_ps", "invalid_threshold", "N", "S_chsh", "sigma_chsh", "p_chsh_gauss",
        "p_chsh_binom", "S_AB0", "sig_AB0", "S_AB1", "sig_AB1", "S_BA0", "sig_BA0", "S_BA1",
        "sig_BA1", "chi2", "p_chi2"};
    std::array<std::optional<double>, kScanFields> v;
    for (std::size_t i = 3; i < kScanFields; ++i) v[i] = parse_real(cells[i], line_no, kColumns[i]);

    const bool any_stat = std::any_of(v.begin() + 3, v.begin() + 15, [](auto& o) { return o.has_value(); });
    const bool all_stat = std::all_of(v.begin() + 3, v.begin() + 15, [](auto& o) { return o.has_value(); });
    if (any_stat != all_stat || v[15].has_value() != v[16].has_value() || (v[15] && !all_stat)) {
      throw ParseError(line_no, "partially empty statistics row");
    }
    if (all_stat) {
      SampleStats s;
      s.chsh.value = *v[3];
      s.chsh.sigma = *v[4];
      s.chsh.p = *v[5];
      s.chsh.z = s.chsh.sigma > 0.0 ? std::max(0.0, (s.chsh.value - kChshBound) / s.chsh.sigma) : 0.0;
      s.p_chsh_binomial = *v[6];
      s.nosig.ab0 = two_tailed_stat(*v[7], *v[8]);
      s.nosig.ab1 = two_tailed_stat(*v[9], *v[10]);
      s.nosig.ba0 = two_tailed_stat(*v[11], *v[12]);
      s.nosig.ba1 = two_tailed_stat(*v[13], *v[14]);
      if (v[15]) s.chi2 = Chi2Result{*v[15], 4, *v[16]};
      r.stats = s;
    }
    results.push_back(r);
  }
  return results;
}

}  // namespace bellscan
