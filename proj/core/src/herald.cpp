#include "bellscan/herald.hpp"

namespace bellscan {

bool passes(const CandidateEvent& event, const HeraldFilter& filter) noexcept {
  const Picoseconds open = filter.effective_start();
  const Picoseconds close = filter.window_stop_ps;
  return open < close &&
         event.click1_ps >= open && event.click2_ps >= open &&
         event.click1_ps <= close && event.click2_ps <= close &&
         event.clean_attempts >= filter.invalid_threshold;
}

std::vector<CandidateEvent> select_sample(std::span<const CandidateEvent> events,
                                          const HeraldFilter& filter) {
  std::vector<CandidateEvent> selected;
  if (filter.degenerate()) return selected;
  for (const auto& e : events) {
    if (passes(e, filter)) selected.push_back(e);
  }
  return selected;
}

CountsTable tabulate_selected(std::span<const CandidateEvent> events, const HeraldFilter& filter) {
  CountsTable table;
  if (filter.degenerate()) return table;
  for (const auto& e : events) {
    if (passes(e, filter)) table.add(e);
  }
  return table;
}

}  // namespace bellscan
