#include "bellscan/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <random>
#include <string>
#include <string_view>

namespace bellscan {

namespace {

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool coin(double p_true) { return uniform() < p_true; }

  Picoseconds exponential_click(double origin_ps, double tau_ps) {
    return std::llround(origin_ps - tau_ps * std::log1p(-uniform()));
  }

  /// Clean attempts before the first invalid one, looking backwards.
  std::uint32_t clean_run(double invalid_rate) {
    if (invalid_rate <= 0.0) return kMaxCleanAttempts;
    if (invalid_rate >= 1.0) return 0;
    const double k = std::floor(std::log1p(-uniform()) / std::log1p(-invalid_rate));
    return static_cast<std::uint32_t>(std::min(k, static_cast<double>(kMaxCleanAttempts)));
  }

 private:
  std::mt19937_64 engine_;
};

Outcome to_outcome(bool plus) { return plus ? Outcome::plus : Outcome::minus; }

void check_unit(double v, const char* field) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError(std::string(field) + " must lie in [0,1], got " + std::to_string(v));
  }
}

double parse_double(std::string_view key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw DomainError("config key '" + std::string(key) + "': not a number: '" + text + "'");
  }
  return v;
}

std::uint64_t parse_u64(std::string_view key, const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DomainError("config key '" + std::string(key) + "': not a non-negative integer: '" +
                      text + "'");
  }
  return v;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

void SynthConfig::validate() const {
  if (n_attempts == 0) throw DomainError("n_attempts must be positive");
  check_unit(visibility, "visibility");
  check_unit(w_ref, "w_ref");
  check_unit(invalid_rate, "invalid_rate");
  if (!(epsilon >= -1.0 && epsilon <= 1.0)) {
    throw DomainError("epsilon must lie in [-1,1], got " + std::to_string(epsilon));
  }
  if (!(tau_nv_ps > 0.0)) throw DomainError("tau_nv must be positive");
  if (!(tau_ref_ps > 0.0)) throw DomainError("tau_ref must be positive");
  if (!std::isfinite(reflection_lead_ps)) throw DomainError("lead must be finite");
}

SynthConfig parse_synth_config(std::istream& in, SynthConfig base) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw DomainError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key == "n") base.n_attempts = parse_u64(key, value);
    else if (key == "seed") base.seed = parse_u64(key, value);
    else if (key == "visibility") base.visibility = parse_double(key, value);
    else if (key == "tau_nv") base.tau_nv_ps = parse_double(key, value);
    else if (key == "tau_ref") base.tau_ref_ps = parse_double(key, value);
    else if (key == "lead") base.reflection_lead_ps = parse_double(key, value);
    else if (key == "wref") base.w_ref = parse_double(key, value);
    else if (key == "epsilon") base.epsilon = parse_double(key, value);
    else if (key == "invalid_rate") base.invalid_rate = parse_double(key, value);
    else {
      throw DomainError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return base;
}

std::vector<LabeledEvent> generate_labeled(const SynthConfig& config) {
  config.validate();
  constexpr double c = std::numbers::sqrt2 / 2.0;

  Stream rng(config.seed);
  std::vector<LabeledEvent> out;
  out.reserve(config.n_attempts);
  for (std::uint64_t i = 0; i < config.n_attempts; ++i) {
    LabeledEvent le;
    CandidateEvent& e = le.event;
    e.run_id = 0;
    e.sync_index = i;
    e.setting_a = rng.coin(0.5) ? 1 : 0;
    e.setting_b = rng.coin(0.5) ? 1 : 0;
    le.contaminated = rng.coin(config.w_ref);

    const double origin = le.contaminated ? config.reflection_lead_ps : 0.0;
    const double tau = le.contaminated ? config.tau_ref_ps : config.tau_nv_ps;
    e.click1_ps = rng.exponential_click(origin, tau);
    e.click2_ps = rng.exponential_click(origin, tau);
    e.clean_attempts = rng.clean_run(config.invalid_rate);

    if (le.contaminated) {
      e.outcome_x = to_outcome(rng.coin(0.5));
      const double p_plus = 0.5 + config.epsilon * (2.0 * e.setting_a - 1.0) / 2.0;
      e.outcome_y = to_outcome(rng.coin(p_plus));
    } else {
      const double c_ab = (e.setting_a == 1 && e.setting_b == 1) ? -c : c;
      const bool same = rng.coin((1.0 + config.visibility * c_ab) / 2.0);
      const bool x_plus = rng.coin(0.5);
      e.outcome_x = to_outcome(x_plus);
      e.outcome_y = to_outcome(same ? x_plus : !x_plus);
    }
    out.push_back(le);
  }
  return out;
}

std::vector<CandidateEvent> generate(const SynthConfig& config) {
  const auto labeled = generate_labeled(config);
  std::vector<CandidateEvent> out;
  out.reserve(labeled.size());
  for (const auto& le : labeled) out.push_back(le.event);
  return out;
}

}  // namespace bellscan
