#include "fsopc/commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <algorithm>

#include "json.hpp"

#include "fsopc/csv.hpp"
#include "fsopc/error.hpp"

namespace fsopc {

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json point_record(const BerPoint& p) {
  nlohmann::json j = {
      {"event", "point"},   {"time", utc_timestamp()}, {"receiver", p.receiver}, {"param", p.param},
      {"n_s", p.n_s},       {"n_b", p.n_b},            {"snr_db", p.snr_db},     {"bits", p.bits},
      {"errors", p.errors}, {"ber", p.ber},            {"ci95", p.ci95},         {"seed", p.seed},
      {"shards", p.shards},
  };
  if (p.trellis) {
    j["mean_d"] = p.trellis->mean_d();
    j["forced_merges"] = p.trellis->forced_merges;
    j["d_histogram"] = p.trellis->d_histogram;
    j["mean_detected_span"] = p.trellis->mean_detected_span();
    j["mean_window"] = p.trellis->mean_window();
    j["metric_evaluations"] = p.trellis->metric_evaluations;
  }
  return j;
}

// Output stream for a path; "-" selects the provided stdout stream.
class Output {
 public:
  Output(const std::string& path, std::ostream& stdout_stream) {
    if (path == "-") {
      stream_ = &stdout_stream;
    } else {
      file_.open(path, std::ios::out | std::ios::trunc);
      if (file_) stream_ = &file_;
    }
  }
  explicit operator bool() const { return stream_ != nullptr; }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

}  // namespace

int command_sweep(const RunConfig& cfg, std::ostream& diag) {
  std::ofstream csv(cfg.out_path, std::ios::out | std::ios::trunc);
  if (!csv) {
    diag << "error: cannot write output '" << cfg.out_path << "'\n";
    return kExitRuntime;
  }
  const std::string log_path = cfg.effective_log_path();
  std::ofstream log(log_path, std::ios::out | std::ios::trunc);
  if (!log) {
    diag << "error: cannot write run log '" << log_path << "'\n";
    return kExitRuntime;
  }

  try {
    const SweepConfig& sweep = cfg.sweep;
    sweep.validate();
    nlohmann::json start = {
        {"event", "start"},  {"time", utc_timestamp()},         {"model", sweep.model.describe()},
        {"n_b", sweep.base.n_b}, {"coherence_length", sweep.base.coherence_length}, {"seed", sweep.seed},
        {"shards", sweep.shards}, {"min_errors", sweep.stopping.min_errors}, {"max_bits", sweep.stopping.max_bits},
    };
    log << start.dump() << '\n';

    csv << kCsvHeader << '\n';
    std::vector<double> grid = sweep.n_s_grid;
    std::sort(grid.begin(), grid.end());
    for (const ReceiverSpec& receiver : sweep.receivers) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        ChannelSpec channel{sweep.model, sweep.base};
        channel.params.n_s = grid[i];
        const BerPoint p = run_ber_point(receiver, channel, sweep.stopping, sweep.seed,
                                         sweep.shards, sweep.snr_mapping);
        csv << format_row(to_row(p)) << '\n';
        csv.flush();
        log << point_record(p).dump() << '\n';
        log.flush();
        if (cfg.verbosity > 0)
          diag << p.receiver << (p.param.empty() ? "" : ":" + p.param) << " n_s=" << p.n_s << " bits=" << p.bits
               << " errors=" << p.errors << " ber=" << p.ber << '\n';
      }
    }
    log << nlohmann::json{{"event", "end"}, {"time", utc_timestamp()}}.dump() << '\n';
  } catch (const ParameterError& e) {
    diag << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  if (!csv || !log) {
    diag << "error: write failed\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int command_genie_bound(const RunConfig& cfg, std::ostream& stdout_stream, std::ostream& diag) {
  Output out(cfg.out_path, stdout_stream);
  if (!out) {
    diag << "error: cannot write output '" << cfg.out_path << "'\n";
    return kExitRuntime;
  }
  try {
    const SweepConfig& sweep = cfg.sweep;
    const std::uint64_t samples = cfg.quick ? std::min<std::uint64_t>(cfg.gain_samples, 20000) : cfg.gain_samples;
    out.get() << "n_s,n_b,snr_db,genie_bep,std_error\n";
    std::vector<double> grid = sweep.n_s_grid;
    std::sort(grid.begin(), grid.end());
    for (double n_s : grid) {
      ChannelParams params = sweep.base;
      params.n_s = n_s;
      const GenieBound g = genie_bound(sweep.model, params, samples, derive_seed(sweep.seed, {0x6e}));
      char buf[160];
      std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.5e,%.5e\n", n_s, params.n_b,
                    snr_db(n_s, params.n_b, sweep.snr_mapping), g.bep, g.std_error);
      out.get() << buf;
    }
  } catch (const ParameterError& e) {
    diag << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int command_fading_stats(const RunConfig& cfg, std::ostream& stdout_stream, std::ostream& diag) {
  Output out(cfg.out_path, stdout_stream);
  if (!out) {
    diag << "error: cannot write output '" << cfg.out_path << "'\n";
    return kExitRuntime;
  }
  const FadingModel& model = cfg.sweep.model;
  const std::uint64_t n = cfg.quick ? std::min<std::uint64_t>(cfg.fading_samples, 100000) : cfg.fading_samples;
  Rng rng(derive_seed(cfg.sweep.seed, {0xfad}));
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t i = 1; i <= n; ++i) {
    const double h = model.draw(rng);
    const double delta = h - mean;
    mean += delta / static_cast<double>(i);
    m2 += delta * (h - mean);
  }
  const double var = m2 / static_cast<double>(n - 1);
  char buf[256];
  std::snprintf(buf, sizeof buf, "%llu,%.6g,%.6g,%.6g,%.6g\n", static_cast<unsigned long long>(n), mean,
                std::sqrt(var / static_cast<double>(n)), var / (mean * mean), model.scintillation_index());
  out.get() << "model,samples,mean,mean_std_error,si_sample,si_target\n"
            << '"' << model.describe() << '"' << ',' << buf;
  return kExitOk;
}

int command_validate(const ValidateOptions& options, std::ostream& out) {
  const auto results = run_validation(options);
  const CheckResult* first_failure = nullptr;
  for (const auto& r : results) {
    out << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(28) << r.name << r.detail << '\n';
    if (!r.passed && !first_failure) first_failure = &r;
  }
  if (first_failure) {
    out << "validation failed: " << first_failure->name << '\n';
    return kExitRuntime;
  }
  out << "all " << results.size() << " checks passed\n";
  return kExitOk;
}

}  // namespace fsopc
