#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "bellscan/herald.hpp"
#include "bellscan/ingest.hpp"
#include "bellscan/scan.hpp"
#include "bellscan/stats.hpp"
#include "bellscan/synth.hpp"

namespace bellscan::cli {

namespace {

/// A file or data problem that maps to kExitUsage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WindowFlags {
  Picoseconds window_start = 0;
  Picoseconds window_stop = HeraldFilter{}.window_stop_ps;

  void attach(CLI::App& cmd) {
    cmd.add_option("--window-start", window_start, "Nominal window start (offset origin), ps");
    cmd.add_option("--window-stop", window_stop, "Window stop, ps");
  }

  HeraldFilter filter(Picoseconds offset, std::uint32_t threshold) const {
    HeraldFilter f{window_start, offset, window_stop, threshold};
    f.validate();
    return f;
  }
};

std::vector<CandidateEvent> load_events(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open input file '" + path + "'");
  return read_events(in);
}

/// Writes to `path`, or to `fallback` when path is empty or "-".
template <typename Writer>
void emit(const std::string& path, std::ostream& fallback, Writer&& write) {
  if (path.empty() || path == "-") {
    write(fallback);
    fallback.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw UsageError("cannot open output file '" + path + "'");
  write(file);
  file.flush();
  if (!file) throw UsageError("failed writing '" + path + "'");
}

nlohmann::ordered_json to_json(const ScanResult& r) {
  nlohmann::ordered_json j;
  j["start_offset_ps"] = r.start_offset_ps;
  j["invalid_threshold"] = r.invalid_threshold;
  j["N"] = r.sample_size;
  const auto put = [&j](const char* key, std::optional<double> v) {
    j[key] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  const SampleStats* s = r.stats ? &*r.stats : nullptr;
  const auto field = [s](auto get) -> std::optional<double> {
    if (s == nullptr) return std::nullopt;
    return get(*s);
  };
  put("S_chsh", field([](const SampleStats& x) { return x.chsh.value; }));
  put("sigma_chsh", field([](const SampleStats& x) { return x.chsh.sigma; }));
  put("p_chsh_gauss", field([](const SampleStats& x) { return x.chsh.p; }));
  put("p_chsh_binom", field([](const SampleStats& x) { return x.p_chsh_binomial; }));
  put("S_AB0", field([](const SampleStats& x) { return x.nosig.ab0.value; }));
  put("sig_AB0", field([](const SampleStats& x) { return x.nosig.ab0.sigma; }));
  put("S_AB1", field([](const SampleStats& x) { return x.nosig.ab1.value; }));
  put("sig_AB1", field([](const SampleStats& x) { return x.nosig.ab1.sigma; }));
  put("S_BA0", field([](const SampleStats& x) { return x.nosig.ba0.value; }));
  put("sig_BA0", field([](const SampleStats& x) { return x.nosig.ba0.sigma; }));
  put("S_BA1", field([](const SampleStats& x) { return x.nosig.ba1.value; }));
  put("sig_BA1", field([](const SampleStats& x) { return x.nosig.ba1.sigma; }));
  const auto chi2 = s != nullptr ? s->chi2 : std::nullopt;
  put("chi2", chi2 ? std::optional<double>(chi2->chi2) : std::nullopt);
  put("p_chi2", chi2 ? std::optional<double>(chi2->p) : std::nullopt);
  return j;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void print_stat_line(std::ostream& out, const char* label, const StatWithSigma& s) {
  out << label << "  S = " << fixed(s.value, 4) << "  sigma = " << fixed(s.sigma, 4)
      << "  z = " << fixed(s.z, 2) << "  p = " << format_real(s.p)
      << (s.degenerate ? "  (degenerate: zero sigma)" : "") << '\n';
}

void print_text_report(std::ostream& out, const ScanResult& r, const HeraldFilter& f) {
  out << "window        [" << f.effective_start() << ", " << f.window_stop_ps << "] ps (offset "
      << f.start_offset_ps << " ps), invalid-marker threshold " << f.invalid_threshold << '\n';
  out << "N             " << r.sample_size << '\n';
  if (!r.stats) {
    out << "statistics    undefined (a setting pair has no trials)\n";
    return;
  }
  const auto& s = *r.stats;
  out << "CHSH          S = " << fixed(s.chsh.value, 4) << "  sigma = " << fixed(s.chsh.sigma, 4)
      << "  z = " << fixed(s.chsh.z, 2) << '\n';
  out << "              p (gaussian, one-tailed) = " << format_real(s.chsh.p)
      << "  p (binomial bound) = " << format_real(s.p_chsh_binomial) << '\n';
  print_stat_line(out, "A->B0       ", s.nosig.ab0);
  print_stat_line(out, "A->B1       ", s.nosig.ab1);
  print_stat_line(out, "B->A0       ", s.nosig.ba0);
  print_stat_line(out, "B->A1       ", s.nosig.ba1);
  if (s.chi2) {
    out << "chi2          " << fixed(s.chi2->chi2, 3) << " (dof 4)  p = " << format_real(s.chi2->p)
        << '\n';
  } else {
    out << "chi2          undefined (a no-signaling sigma is zero)\n";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Joint CHSH / no-signaling analysis of event-ready Bell-test data"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  // analyze
  WindowFlags analyze_window;
  std::string analyze_input;
  Picoseconds analyze_offset = 0;
  std::uint32_t analyze_threshold = kMaxCleanAttempts;
  std::string analyze_format = "text";
  auto* analyze = app.add_subcommand("analyze", "Analyze one event-ready sample");
  analyze->add_option("--input", analyze_input, "Event file")->required();
  analyze->add_option("--offset", analyze_offset, "Window-start offset, ps (-20 ns = -20000)");
  analyze->add_option("--threshold", analyze_threshold, "Minimum clean attempts (0..250)");
  analyze->add_option("--format", analyze_format, "Report format")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  analyze_window.attach(*analyze);

  // scan
  WindowFlags scan_window;
  std::string scan_input, scan_output;
  Picoseconds scan_min = -50'000, scan_max = 20'000, scan_step = 1'000;
  std::uint32_t scan_threshold = kMaxCleanAttempts;
  unsigned scan_jobs = 1;
  auto* scan = app.add_subcommand("scan", "Sweep the window-start offset at one threshold");
  scan->add_option("--input", scan_input, "Event file")->required();
  scan->add_option("--offset-min", scan_min, "First offset, ps");
  scan->add_option("--offset-max", scan_max, "Last offset (inclusive), ps");
  scan->add_option("--step", scan_step, "Offset step, ps");
  scan->add_option("--threshold", scan_threshold, "Minimum clean attempts (0..250)");
  scan->add_option("--output", scan_output, "Scan CSV (stdout when omitted)");
  scan->add_option("--jobs", scan_jobs, "Worker threads")->check(CLI::PositiveNumber);
  scan_window.attach(*scan);

  // scan2d
  WindowFlags scan2d_window;
  std::string scan2d_input, scan2d_output;
  Picoseconds s2_min = -50'000, s2_max = 20'000, s2_step = 1'000;
  std::uint32_t t_min = 0, t_max = kMaxCleanAttempts, t_step = 10;
  unsigned scan2d_jobs = 1;
  auto* scan2d = app.add_subcommand("scan2d", "Sweep offset x invalid-marker threshold");
  scan2d->add_option("--input", scan2d_input, "Event file")->required();
  scan2d->add_option("--offset-min", s2_min, "First offset, ps");
  scan2d->add_option("--offset-max", s2_max, "Last offset (inclusive), ps");
  scan2d->add_option("--offset-step", s2_step, "Offset step, ps");
  scan2d->add_option("--threshold-min", t_min, "First threshold");
  scan2d->add_option("--threshold-max", t_max, "Last threshold (inclusive, <= 250)");
  scan2d->add_option("--threshold-step", t_step, "Threshold step");
  scan2d->add_option("--output", scan2d_output, "Scan CSV (stdout when omitted)");
  scan2d->add_option("--jobs", scan2d_jobs, "Worker threads")->check(CLI::PositiveNumber);
  scan2d_window.attach(*scan2d);

  // hist
  std::string hist_scan, hist_output, hist_which = "nosig";
  auto* hist = app.add_subcommand("hist", "Histogram the p-values of a scan CSV");
  hist->add_option("--scan", hist_scan, "Scan CSV")->required();
  hist->add_option("--which", hist_which, "p-value to histogram")
      ->check(CLI::IsMember({"nosig", "chsh"}));
  hist->add_option("--output", hist_output, "Histogram CSV (stdout when omitted)");

  // synth
  SynthConfig synth_cfg;
  std::string synth_out, synth_config_file;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic event file");
  synth->add_option("--out", synth_out, "Event file (stdout when omitted)");
  synth->add_option("--config", synth_config_file, "key = value config; flags override it");
  auto* o_n = synth->add_option("--n", synth_cfg.n_attempts, "Heralding candidates to emit");
  auto* o_seed = synth->add_option("--seed", synth_cfg.seed, "mt19937_64 seed");
  auto* o_vis = synth->add_option("--visibility", synth_cfg.visibility, "Entangled visibility V");
  auto* o_wref = synth->add_option("--wref", synth_cfg.w_ref, "Contaminated (reflection) weight");
  auto* o_eps = synth->add_option("--epsilon", synth_cfg.epsilon, "Signaling strength in contaminated trials");
  auto* o_tnv = synth->add_option("--tau-nv", synth_cfg.tau_nv_ps, "NV emission decay, ps");
  auto* o_tref = synth->add_option("--tau-ref", synth_cfg.tau_ref_ps, "Reflection decay, ps");
  auto* o_lead = synth->add_option("--lead", synth_cfg.reflection_lead_ps, "Reflection onset, ps");
  auto* o_inv = synth->add_option("--invalid-rate", synth_cfg.invalid_rate, "Per-attempt invalid-marker probability");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("bellscan");

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (analyze->parsed()) {
      const auto events = load_events(analyze_input);
      const auto filter = analyze_window.filter(analyze_offset, analyze_threshold);
      const ScanResult r = analyze_sample(events, filter);
      if (analyze_format == "json") {
        out << to_json(r).dump(2) << '\n';
      } else if (analyze_format == "csv") {
        write_scan_csv(out, std::span(&r, 1));
      } else {
        print_text_report(out, r, filter);
      }
    } else if (scan->parsed()) {
      const auto events = load_events(scan_input);
      const auto base = scan_window.filter(0, scan_threshold);
      const auto grid = scan_1d(events, base, scan_min, scan_max, scan_step, scan_jobs);
      emit(scan_output, out, [&](std::ostream& s) { write_scan_csv(s, grid.results); });
    } else if (scan2d->parsed()) {
      const auto events = load_events(scan2d_input);
      const auto base = scan2d_window.filter(0, 0);
      const auto offsets = offset_range(s2_min, s2_max, s2_step);
      const auto thresholds = threshold_range(t_min, t_max, t_step);
      const auto grid = scan_2d(events, base, offsets, thresholds, scan2d_jobs);
      emit(scan2d_output, out, [&](std::ostream& s) { write_scan_csv(s, grid.results); });
    } else if (hist->parsed()) {
      std::ifstream in(hist_scan, std::ios::binary);
      if (!in) throw UsageError("cannot open scan file '" + hist_scan + "'");
      const auto results = read_scan_csv(in);
      const auto which = hist_which == "chsh" ? PValueKind::chsh : PValueKind::nosig_chi2;
      const auto h = pvalue_histogram(results, which);
      emit(hist_output, out, [&](std::ostream& s) {
        std::string text = "bin_low,count\n";
        for (std::size_t i = 0; i < kHistogramBins; ++i) {
          text += format_real(h.bin_edges[i]) + ',' + std::to_string(h.counts[i]) + '\n';
        }
        s << text;
      });
    } else if (synth->parsed()) {
      SynthConfig cfg;
      if (!synth_config_file.empty()) {
        std::ifstream in(synth_config_file);
        if (!in) throw UsageError("cannot open config file '" + synth_config_file + "'");
        cfg = parse_synth_config(in);
      }
      if (o_n->count() > 0) cfg.n_attempts = synth_cfg.n_attempts;
      if (o_seed->count() > 0) cfg.seed = synth_cfg.seed;
      if (o_vis->count() > 0) cfg.visibility = synth_cfg.visibility;
      if (o_wref->count() > 0) cfg.w_ref = synth_cfg.w_ref;
      if (o_eps->count() > 0) cfg.epsilon = synth_cfg.epsilon;
      if (o_tnv->count() > 0) cfg.tau_nv_ps = synth_cfg.tau_nv_ps;
      if (o_tref->count() > 0) cfg.tau_ref_ps = synth_cfg.tau_ref_ps;
      if (o_lead->count() > 0) cfg.reflection_lead_ps = synth_cfg.reflection_lead_ps;
      if (o_inv->count() > 0) cfg.invalid_rate = synth_cfg.invalid_rate;
      const auto events = generate(cfg);
      emit(synth_out, out, [&](std::ostream& s) { write_events(s, events); });
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace bellscan::cli
