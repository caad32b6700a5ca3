#include "fsopc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "fsopc/error.hpp"

namespace fsopc {

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
};

const std::set<std::string, std::less<>>& known_keys() {
  static const std::set<std::string, std::less<>> keys = {
      "model", "h",        "si",         "alpha",    "beta", "wave",         "ns",      "snr_db",
      "snr_mapping", "nb", "lc",         "receivers", "lm",  "l",            "min_errors", "max_bits",
      "seed",  "shards",   "out",        "log",      "gain_samples", "samples",
  };
  return keys;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    const auto item = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry, std::less<>> entries) : entries_(std::move(entries)) {}

  bool has(std::string_view key) const { return entries_.find(key) != entries_.end(); }

  const Entry& entry(std::string_view key) const { return entries_.find(key)->second; }

  [[noreturn]] void fail(std::string_view key, const std::string& message) const {
    const std::size_t line = has(key) ? entry(key).line : 0;
    throw ConfigError(std::string(key), line, message);
  }

  static double to_double(std::string_view key, const Entry& e, std::string_view text) {
    double v = 0.0;
    const auto* begin = text.data();
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v))
      throw ConfigError(std::string(key), e.line, "type mismatch: expected a number, got '" + std::string(text) + "'");
    return v;
  }

  double number(std::string_view key, double fallback) const {
    if (!has(key)) return fallback;
    return to_double(key, entry(key), entry(key).value);
  }

  std::vector<double> numbers(std::string_view key) const {
    std::vector<double> out;
    for (const auto& item : split_list(entry(key).value)) out.push_back(to_double(key, entry(key), item));
    return out;
  }

  // Accepts plain integers and integral scientific notation such as 1e8.
  std::uint64_t count(std::string_view key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const Entry& e = entry(key);
    std::uint64_t v = 0;
    const auto* end = e.value.data() + e.value.size();
    const auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
    if (ec == std::errc{} && ptr == end) return v;
    const double d = to_double(key, e, e.value);
    if (d < 0.0 || d != std::floor(d) || d > 9.2e18)
      throw ConfigError(std::string(key), e.line, "out of range: expected a nonnegative integer");
    return static_cast<std::uint64_t>(d);
  }

  std::string text(std::string_view key, std::string fallback) const {
    return has(key) ? entry(key).value : std::move(fallback);
  }

 private:
  std::map<std::string, Entry, std::less<>> entries_;
};

FadingModel build_model(const Reader& r) {
  const std::string model = r.text("model", "constant");
  auto reject = [&](std::string_view key) {
    if (r.has(key)) r.fail(key, "not applicable to model '" + model + "'");
  };
  auto positive = [&](std::string_view key, double fallback) {
    const double v = r.number(key, fallback);
    if (!(v > 0.0)) r.fail(key, "out of range: must be > 0");
    return v;
  };

  if (model == "constant") {
    for (auto k : {"si", "alpha", "beta", "wave"}) reject(k);
    return FadingModel::constant(positive("h", 1.0));
  }
  if (model == "lognormal") {
    for (auto k : {"h", "alpha", "beta", "wave"}) reject(k);
    if (!r.has("si")) r.fail("si", "required for model 'lognormal'");
    return lognormal_from_si(positive("si", 0.0));
  }
  if (model == "gammagamma") {
    reject("h");
    const std::string wave_text = r.text("wave", "spherical");
    RytovWave wave = RytovWave::Spherical;
    if (wave_text == "plane")
      wave = RytovWave::Plane;
    else if (wave_text != "spherical")
      r.fail("wave", "unknown value '" + wave_text + "' (expected plane or spherical)");
    if (r.has("si")) {
      if (r.has("alpha") || r.has("beta")) r.fail("si", "give either si or alpha/beta, not both");
      const double si = positive("si", 0.0);
      try {
        return gammagamma_from_si(si, wave);
      } catch (const UnattainableError& e) {
        r.fail("si", e.what());
      }
    }
    if (!r.has("alpha") || !r.has("beta")) r.fail("si", "model 'gammagamma' needs si or both alpha and beta");
    reject("wave");
    return FadingModel::gamma_gamma(positive("alpha", 0.0), positive("beta", 0.0));
  }
  r.fail("model", "unknown value '" + model + "' (expected constant, lognormal or gammagamma)");
}

}  // namespace

ReceiverSpec parse_receiver(std::string_view token, std::size_t default_memory_length, std::size_t buffer_length) {
  const auto colon = token.find(':');
  const std::string kind(trim(token.substr(0, colon)));
  const std::string arg = colon == std::string_view::npos ? std::string() : std::string(trim(token.substr(colon + 1)));
  auto number = [&]() {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), v);
    if (arg.empty() || ec != std::errc{} || ptr != arg.data() + arg.size())
      throw ParameterError("receiver '" + std::string(token) + "': expected a numeric parameter");
    return v;
  };

  ReceiverSpec spec;
  if (kind == "genie") {
    if (!arg.empty()) throw ParameterError("receiver 'genie' takes no parameter");
    spec = ReceiverSpec::genie();
  } else if (kind == "msd") {
    spec = {ReceiverKind::Msd, number()};
  } else if (kind == "brute") {
    spec = {ReceiverKind::Brute, number()};
  } else if (kind == "fixed") {
    spec = {ReceiverKind::Fixed, number()};
  } else if (kind == "trellis") {
    spec = {ReceiverKind::Trellis, arg.empty() ? static_cast<double>(default_memory_length) : number(), buffer_length};
  } else {
    throw ParameterError("unknown receiver '" + std::string(token) + "'");
  }
  spec.buffer_length = buffer_length;
  spec.validate();
  return spec;
}

RunConfig parse_config(std::string_view text, const ConfigOverrides& overrides) {
  std::map<std::string, Entry, std::less<>> entries;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(std::string(line), line_no, "syntax error: expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (!known_keys().contains(key)) throw ConfigError(key, line_no, "unknown key");
    if (value.empty()) throw ConfigError(key, line_no, "missing value");
    if (entries.contains(key)) throw ConfigError(key, line_no, "duplicate key");
    entries[key] = {std::move(value), line_no};
  }
  for (const auto& [key, value] : overrides) {
    if (!known_keys().contains(key)) throw ConfigError(key, 0, "unknown key");
    entries[key] = {value, 0};
  }

  const Reader r(std::move(entries));
  RunConfig cfg;
  SweepConfig& sweep = cfg.sweep;

  try {
    sweep.model = build_model(r);
  } catch (const ParameterError& e) {
    r.fail("model", e.what());
  }

  sweep.base.n_b = r.number("nb", 1.0);
  if (!(sweep.base.n_b > 0.0)) r.fail("nb", "out of range: must be > 0");
  sweep.base.coherence_length = r.count("lc", 10000);
  if (sweep.base.coherence_length < 1) r.fail("lc", "out of range: must be >= 1");

  const std::string mapping = r.text("snr_mapping", "ratio");
  if (mapping == "ratio")
    sweep.snr_mapping = SnrMapping::SignalToBackground;
  else if (mapping == "signal")
    sweep.snr_mapping = SnrMapping::SignalCount;
  else
    r.fail("snr_mapping", "unknown value '" + mapping + "' (expected ratio or signal)");

  if (r.has("ns") && r.has("snr_db")) r.fail("snr_db", "give either ns or snr_db, not both");
  if (r.has("snr_db")) {
    for (double snr : r.numbers("snr_db")) sweep.n_s_grid.push_back(n_s_from_snr_db(snr, sweep.base.n_b, sweep.snr_mapping));
  } else if (r.has("ns")) {
    sweep.n_s_grid = r.numbers("ns");
    for (double v : sweep.n_s_grid)
      if (!(v >= 0.0)) r.fail("ns", "out of range: values must be >= 0");
  } else {
    sweep.n_s_grid = {10.0};
  }
  std::sort(sweep.n_s_grid.begin(), sweep.n_s_grid.end());
  sweep.base.n_s = sweep.n_s_grid.front();

  const std::uint64_t lm = r.count("lm", 1);
  if (lm < 1) r.fail("lm", "out of range: must be >= 1");
  const std::uint64_t l = r.count("l", 20);
  if (l < 2) r.fail("l", "out of range: must be >= 2");
  for (const auto& token : split_list(r.text("receivers", "genie"))) {
    try {
      sweep.receivers.push_back(parse_receiver(token, lm, l));
    } catch (const ParameterError& e) {
      r.fail("receivers", e.what());
    }
  }

  sweep.stopping.min_errors = r.count("min_errors", 100);
  sweep.stopping.max_bits = r.count("max_bits", 100'000'000);
  if (sweep.stopping.min_errors == 0 && sweep.stopping.max_bits == 0)
    r.fail(r.has("max_bits") ? "max_bits" : "min_errors", "out of range: min_errors and max_bits cannot both be 0");
  sweep.seed = r.count("seed", 1);
  sweep.shards = r.count("shards", 1);
  if (sweep.shards < 1 || sweep.shards > 1024) r.fail("shards", "out of range: must be in [1, 1024]");

  cfg.out_path = r.text("out", "ber.csv");
  cfg.log_path = r.text("log", "");
  cfg.gain_samples = r.count("gain_samples", cfg.gain_samples);
  if (cfg.gain_samples < 1) r.fail("gain_samples", "out of range: must be >= 1");
  cfg.fading_samples = r.count("samples", cfg.fading_samples);
  if (cfg.fading_samples < 2) r.fail("samples", "out of range: must be >= 2");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", 0, "cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

}  // namespace fsopc
