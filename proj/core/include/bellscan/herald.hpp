#pragma once

#include <span>
#include <vector>

#include "bellscan/model.hpp"

namespace bellscan {

/// True when both heralding clicks fall inside the inclusive window
/// [window_start + start_offset, window_stop] and the event is preceded by at
/// least invalid_threshold clean attempts.
bool passes(const CandidateEvent& event, const HeraldFilter& filter) noexcept;

/// The event-ready sample: every event that passes the filter, in input order.
/// A degenerate window selects nothing.
std::vector<CandidateEvent> select_sample(std::span<const CandidateEvent> events,
                                          const HeraldFilter& filter);

/// Counts of the selected sample without materializing it.
CountsTable tabulate_selected(std::span<const CandidateEvent> events, const HeraldFilter& filter);

}  // namespace bellscan
