#pragma once

// Seedable generator of heralding candidates.
//
// Entangled trials follow p(xy|ab) = (1 + x y V c_ab) / 4 with
// c00 = c01 = c10 = 1/sqrt2 and c11 = -1/sqrt2, so E[S] = 2 sqrt2 V. Their
// clicks are exponential with decay tau_nv from t = 0. Contaminated trials
// (laser reflections, probability w_ref) click from t = lead with decay
// tau_ref; Alice's outcome is a fair coin and Bob's is +1 with probability
// 1/2 + epsilon (2a - 1) / 2, an A->B signal of size -epsilon in S_{A->B}.
//
// Random numbers come from std::mt19937_64 (fully specified by the C++
// standard, so output is identical across conforming platforms), mapped to
// doubles with the top 53 bits. Draw order per attempt is fixed: a, b, class,
// click1, click2, clean_attempts, then outcomes. Changing any of this changes
// every generated file.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bellscan/model.hpp"

namespace bellscan {

struct SynthConfig {
  std::uint64_t n_attempts = 10'000;
  std::uint64_t seed = 1;
  double visibility = 0.9;
  double tau_nv_ps = 12'000.0;
  double tau_ref_ps = 3'000.0;
  double reflection_lead_ps = -8'000.0;
  double w_ref = 0.1;
  double epsilon = 0.0;
  double invalid_rate = 0.002;

  /// Throws DomainError naming the first out-of-range field.
  void validate() const;
};

/// Reads `key = value` lines ('#' starts a comment). Keys: n, seed,
/// visibility, tau_nv, tau_ref, lead, wref, epsilon, invalid_rate. Unset keys
/// keep the values already in `base`.
SynthConfig parse_synth_config(std::istream& in, SynthConfig base = {});

struct LabeledEvent {
  CandidateEvent event;
  bool contaminated = false;
};

std::vector<LabeledEvent> generate_labeled(const SynthConfig& config);
std::vector<CandidateEvent> generate(const SynthConfig& config);

}  // namespace bellscan
