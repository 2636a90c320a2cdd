#ifndef JDR_EXPERIMENTS_HPP
#define JDR_EXPERIMENTS_HPP

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "jdr/capacity.hpp"
#include "jdr/core_model.hpp"
#include "jdr/detection.hpp"
#include "jdr/noise.hpp"
#include "jdr/rng.hpp"

namespace jdr {

inline constexpr std::string_view kToolVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Configuration

struct ThresholdMode {
  enum class Kind { Optimized, HalfMean, Fixed };
  Kind kind = Kind::Optimized;
  double value = 0.0;  // Fixed only

  friend bool operator==(const ThresholdMode&, const ThresholdMode&) = default;
};

inline std::vector<double> default_baud_grid() {
  std::vector<double> grid;
  for (int g = 50; g <= 400; g += 25) grid.push_back(g * 1e9);
  return grid;
}

struct ExperimentConfig {
  double attenuation_a = 0.046;
  double fiber_length_L = 250.0;
  double photon_flux_N = 1e16;
  std::vector<double> baud_grid = default_baud_grid();
  std::vector<std::size_t> orders = {4, 32};
  std::vector<NoiseKind> noise_model_kinds = {NoiseKind::VonMises};
  std::size_t phase_samples = 1000;
  std::size_t mi_samples = 100000;
  std::size_t repetitions = 10;
  std::uint64_t seed = 1;
  ThresholdMode threshold_mode{};

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

  LinkParams link(double b) const { return {attenuation_a, fiber_length_L, b, photon_flux_N}; }

  void validate() const {
    if (baud_grid.empty() || orders.empty() || noise_model_kinds.empty())
      throw std::invalid_argument("config: baud_grid, orders and noise_model_kinds must be nonempty");
    for (double b : baud_grid)
      if (!(b > 0.0)) throw std::invalid_argument("config: baud rates must be > 0");
    for (auto n : orders) (void)HadamardOrder::from_size(n);
    if (repetitions < 1) throw std::invalid_argument("config: repetitions must be >= 1");
    if (phase_samples < 1) throw std::invalid_argument("config: phase_samples must be >= 1");
    if (mi_samples < 2) throw std::invalid_argument("config: mi_samples must be >= 2");
    if (!(photon_flux_N >= 0.0) || !(attenuation_a >= 0.0) || !(fiber_length_L >= 0.0))
      throw std::invalid_argument("config: link parameters must be >= 0");
    if (threshold_mode.kind == ThresholdMode::Kind::Fixed && !(threshold_mode.value >= 0.0))
      throw std::invalid_argument("config: fixed threshold must be >= 0");
  }
};

/// Shortest decimal text that reads back to the same double.
inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto pos = s.find(',', start);
    auto item = trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + v + "'");
  }
  if (used != v.size() || !std::isfinite(out))
    throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + v + "'");
  return out;
}

inline std::uint64_t parse_unsigned(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw std::invalid_argument("config: key '" + key + "' expects a non-negative integer, got '" + v + "'");
  return out;
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += fmt(xs[i]);
  }
  return out;
}

}  // namespace detail

inline std::string format_threshold_mode(const ThresholdMode& m) {
  switch (m.kind) {
    case ThresholdMode::Kind::Optimized: return "optimized";
    case ThresholdMode::Kind::HalfMean: return "half-mean";
    case ThresholdMode::Kind::Fixed: return format_number(m.value);
  }
  return {};
}

inline ThresholdMode parse_threshold_mode(const std::string& v) {
  if (v == "optimized") return {ThresholdMode::Kind::Optimized, 0.0};
  if (v == "half-mean") return {ThresholdMode::Kind::HalfMean, 0.0};
  return {ThresholdMode::Kind::Fixed, detail::parse_double("threshold_mode", v)};
}

/// Sets one config key from its text value. Unknown keys are an error.
inline void apply_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  using namespace detail;
  if (key == "attenuation_a") cfg.attenuation_a = parse_double(key, value);
  else if (key == "fiber_length_L") cfg.fiber_length_L = parse_double(key, value);
  else if (key == "photon_flux_N") cfg.photon_flux_N = parse_double(key, value);
  else if (key == "baud_grid") {
    cfg.baud_grid.clear();
    for (const auto& s : split_list(value)) cfg.baud_grid.push_back(parse_double(key, s));
  } else if (key == "orders") {
    cfg.orders.clear();
    for (const auto& s : split_list(value)) cfg.orders.push_back(parse_unsigned(key, s));
  } else if (key == "noise_model_kinds") {
    cfg.noise_model_kinds.clear();
    for (const auto& s : split_list(value)) cfg.noise_model_kinds.push_back(parse_noise_kind(s));
  } else if (key == "phase_samples") cfg.phase_samples = parse_unsigned(key, value);
  else if (key == "mi_samples") cfg.mi_samples = parse_unsigned(key, value);
  else if (key == "repetitions") cfg.repetitions = parse_unsigned(key, value);
  else if (key == "seed") cfg.seed = parse_unsigned(key, value);
  else if (key == "threshold_mode") cfg.threshold_mode = parse_threshold_mode(value);
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

/// Flat `key = value` text, one key per line, `#` starts a comment.
inline ExperimentConfig parse_config(std::string_view text, ExperimentConfig cfg = {}) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    apply_config_value(cfg, detail::trim(body.substr(0, eq)), detail::trim(body.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

inline std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg) {
  auto num = [](double v) { return format_number(v); };
  auto uint = [](std::uint64_t v) { return std::to_string(v); };
  return {
      {"attenuation_a", num(cfg.attenuation_a)},
      {"fiber_length_L", num(cfg.fiber_length_L)},
      {"photon_flux_N", num(cfg.photon_flux_N)},
      {"baud_grid", detail::join(cfg.baud_grid, num)},
      {"orders", detail::join(cfg.orders, [](std::size_t n) { return std::to_string(n); })},
      {"noise_model_kinds", detail::join(cfg.noise_model_kinds, [](NoiseKind k) { return std::string(to_string(k)); })},
      {"phase_samples", uint(cfg.phase_samples)},
      {"mi_samples", uint(cfg.mi_samples)},
      {"repetitions", uint(cfg.repetitions)},
      {"seed", uint(cfg.seed)},
      {"threshold_mode", format_threshold_mode(cfg.threshold_mode)},
  };
}

inline std::string format_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : config_entries(cfg)) out += k + " = " + v + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Records

/// Order sentinel for classical-baseline rows.
inline constexpr std::size_t kClassicalOrder = 1;

struct SweepResultRecord {
  double baud_rate = 0.0;
  std::size_t order_n = kClassicalOrder;
  NoiseKind model_kind = NoiseKind::VonMises;
  double sigma2_or_kappa = 0.0;
  double alpha_rx = 0.0;
  double epsilon = 0.0;  // 0 on classical rows
  double mi_bits_per_use = 0.0;
  double capacity_bits_per_s = 0.0;
  double std_error = 0.0;  // of mi_bits_per_use
  std::size_t phase_samples = 0;
  std::size_t mi_samples = 0;
  std::size_t repetition_index = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";

  bool classical() const { return order_n == kClassicalOrder; }
};

inline const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols = {
      "baud_rate", "order_n", "model_kind", "sigma2_or_kappa", "alpha_rx", "epsilon", "mi_bits_per_use",
      "capacity_bits_per_s", "std_error", "phase_samples", "mi_samples", "repetition_index", "seed", "status"};
  return cols;
}

/// RFC 4180 field quoting.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline constexpr std::string_view kCsvEol = "\r\n";

inline std::string csv_header() {
  std::string out;
  const auto& cols = sweep_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  return out + std::string(kCsvEol);
}

inline std::string csv_row(const SweepResultRecord& r) {
  auto num = [](double v) { return format_number(std::isfinite(v) ? v : 0.0); };
  std::string out;
  out += num(r.baud_rate) + ',';
  out += std::to_string(r.order_n) + ',';
  out += csv_field(to_string(r.model_kind)) + ',';
  out += num(r.sigma2_or_kappa) + ',';
  out += num(r.alpha_rx) + ',';
  out += num(r.epsilon) + ',';
  out += num(r.mi_bits_per_use) + ',';
  out += num(r.capacity_bits_per_s) + ',';
  out += num(r.std_error) + ',';
  out += std::to_string(r.phase_samples) + ',';
  out += std::to_string(r.mi_samples) + ',';
  out += std::to_string(r.repetition_index) + ',';
  out += std::to_string(r.seed) + ',';
  out += csv_field(r.status);
  return out + std::string(kCsvEol);
}

inline std::string csv_body(const std::vector<SweepResultRecord>& rows) {
  std::string out;
  for (const auto& r : rows) out += csv_row(r);
  return out;
}

/// Splits one CSV line (without terminator) into fields, honouring quotes.
inline std::vector<std::string> parse_csv_line(std::string_view line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Execution

/// Runs fn(i) for i in [0, count) on `workers` threads. Results must be
/// written to per-index slots; exceptions propagate after all threads join.
inline void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct RunOptions {
  std::size_t workers = 1;
  std::size_t repetition_offset = 0;  // first repetition index, for appending
};

inline double choose_threshold(const ThresholdMode& mode, std::size_t n, double alpha_rx,
                               const CircularMoments& moments) {
  switch (mode.kind) {
    case ThresholdMode::Kind::Fixed: return mode.value;
    case ThresholdMode::Kind::HalfMean: return half_mean_threshold(n, alpha_rx, moments);
    case ThresholdMode::Kind::Optimized: break;
  }
  if (!(alpha_rx > 0.0)) return 0.0;
  return optimize_threshold(n, alpha_rx, moments).epsilon;
}

/// One receiver (order_n >= 2) or classical (order_n == 1) grid point.
inline SweepResultRecord run_point(const ExperimentConfig& cfg, double b, std::size_t order_n, NoiseKind kind,
                                   std::size_t repetition, std::uint64_t seed) {
  SweepResultRecord r;
  r.baud_rate = b;
  r.order_n = order_n;
  r.model_kind = kind;
  r.repetition_index = repetition;
  r.seed = seed;
  r.phase_samples = cfg.phase_samples;
  try {
    const auto model = model_for_baudrate(kind, b);
    r.sigma2_or_kappa = noise_parameter(model);
    r.alpha_rx = link_budget(cfg.link(b)).alpha_rx;
    Rng rng = make_rng(seed);
    if (order_n == kClassicalOrder) {
      const auto est = classical_bpsk_capacity(b, r.alpha_rx, model, rng, cfg.phase_samples);
      r.mi_bits_per_use = est.mi_bits_per_use;
      r.capacity_bits_per_s = est.capacity_bits_per_s;
      r.std_error = est.std_error;
    } else {
      const auto moments = circular_moments(model);
      r.epsilon = choose_threshold(cfg.threshold_mode, order_n, r.alpha_rx, moments);
      const auto law = estimate_port_laws(order_n, r.alpha_rx, model, r.epsilon, cfg.phase_samples, rng);
      const auto mi = mi_product_channel(law, order_n, cfg.mi_samples, rng);
      const auto cap = hadamard_capacity(b, mi, order_n);
      r.mi_samples = cfg.mi_samples;
      r.mi_bits_per_use = cap.mi_bits_per_use;
      r.capacity_bits_per_s = cap.capacity_bits_per_s;
      r.std_error = cap.std_error;
    }
    for (double v : {r.sigma2_or_kappa, r.alpha_rx, r.epsilon, r.mi_bits_per_use, r.capacity_bits_per_s, r.std_error})
      if (!std::isfinite(v)) throw numeric_error("non-finite result");
  } catch (const std::exception& e) {
    r.status = std::string("error: ") + e.what();
    r.epsilon = r.mi_bits_per_use = r.capacity_bits_per_s = r.std_error = 0.0;
  }
  return r;
}

namespace detail {

struct PointTask {
  double baud;
  std::size_t baud_index;
  std::size_t order_n;
  std::size_t row_slot;  // 0 classical, 1 + order index
  NoiseKind kind;
  std::size_t repetition;
};

// Seeds ignore the noise model so that model comparisons at the same grid
// point and repetition use common random numbers.
inline std::uint64_t task_seed(std::uint64_t master, std::uint64_t sweep_tag, const PointTask& t) {
  return substream_seed(master, {sweep_tag, t.baud_index, t.row_slot, t.order_n, t.repetition});
}

inline std::vector<SweepResultRecord> run_tasks(const ExperimentConfig& cfg, std::uint64_t sweep_tag,
                                                const std::vector<PointTask>& tasks, const RunOptions& opts) {
  std::vector<SweepResultRecord> out(tasks.size());
  parallel_for(tasks.size(), opts.workers, [&](std::size_t i) {
    const auto& t = tasks[i];
    out[i] = run_point(cfg, t.baud, t.order_n, t.kind, t.repetition, task_seed(cfg.seed, sweep_tag, t));
  });
  return out;
}

inline constexpr std::uint64_t kBaudSweepTag = 1;
inline constexpr std::uint64_t kOrderSweepTag = 2;

}  // namespace detail

/// Capacity versus baud rate: per grid point, model and repetition one
/// classical row followed by one row per receiver order.
inline std::vector<SweepResultRecord> run_fig1_sweep(const ExperimentConfig& cfg, const RunOptions& opts = {}) {
  cfg.validate();
  std::vector<detail::PointTask> tasks;
  for (std::size_t bi = 0; bi < cfg.baud_grid.size(); ++bi)
    for (auto kind : cfg.noise_model_kinds)
      for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
        const std::size_t r = rep + opts.repetition_offset;
        tasks.push_back({cfg.baud_grid[bi], bi, kClassicalOrder, 0, kind, r});
        for (std::size_t oi = 0; oi < cfg.orders.size(); ++oi)
          tasks.push_back({cfg.baud_grid[bi], bi, cfg.orders[oi], oi + 1, kind, r});
      }
  return detail::run_tasks(cfg, detail::kBaudSweepTag, tasks, opts);
}

/// Mutual information and capacity versus receiver order at a fixed baud rate.
inline std::vector<SweepResultRecord> run_order_sweep(const ExperimentConfig& cfg, double fixed_b,
                                                      const RunOptions& opts = {}) {
  cfg.validate();
  if (!(fixed_b > 0.0)) throw std::invalid_argument("run_order_sweep: baud rate must be > 0");
  std::vector<detail::PointTask> tasks;
  for (std::size_t oi = 0; oi < cfg.orders.size(); ++oi)
    for (auto kind : cfg.noise_model_kinds)
      for (std::size_t rep = 0; rep < cfg.repetitions; ++rep)
        tasks.push_back({fixed_b, 0, cfg.orders[oi], oi + 1, kind, rep + opts.repetition_offset});
  return detail::run_tasks(cfg, detail::kOrderSweepTag, tasks, opts);
}

// ---------------------------------------------------------------------------
// Concentration of the receiver output

struct ConcentrationSettings {
  std::size_t order_n = 16;
  std::vector<double> t_grid = {4.0, 8.0, 16.0};
  PhaseNoiseModel model = VonMises{1e5};
  double alpha = 1.0;
  std::size_t trials = 100000;
  std::uint64_t seed = 1;
  std::size_t chunk = 10000;  // partition plan; fixed independently of worker count
};

struct ConcentrationRecord {
  std::size_t order_n = 0;
  NoiseKind model_kind = NoiseKind::VonMises;
  double noise_parameter = 0.0;
  double t = 0.0;
  std::string port;  // "on" or "off"
  std::size_t trials = 0;
  double empirical = 0.0;
  double mc_std_error = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// Tail frequency of |Lambda_{0,k'} - sqrt(n) alpha delta(0,k') m1| >= t alpha / sqrt(n)
/// for the signal port (k' = 0) and one idle port (k' = 1), against 4 exp(-t^2/n).
inline std::vector<ConcentrationRecord> run_concentration_experiment(const ConcentrationSettings& s,
                                                                     std::size_t workers = 1) {
  const auto order = HadamardOrder::from_size(s.order_n);
  if (s.trials < 1 || s.chunk < 1) throw std::invalid_argument("concentration: trials and chunk must be >= 1");
  const std::size_t n = order.size();
  const double m1 = circular_moments(s.model).m1;
  const double on_center = std::sqrt(static_cast<double>(n)) * s.alpha * m1;
  const std::size_t nt = s.t_grid.size();
  const std::size_t chunks = (s.trials + s.chunk - 1) / s.chunk;
  std::vector<std::vector<std::size_t>> counts(chunks, std::vector<std::size_t>(2 * nt, 0));

  parallel_for(chunks, workers, [&](std::size_t c) {
    Rng rng = make_rng(substream_seed(s.seed, {3, c}));
    std::vector<double> phases(n);
    std::vector<ComplexAmplitude> amps(n);
    const std::size_t begin = c * s.chunk;
    const std::size_t end = std::min(s.trials, begin + s.chunk);
    for (std::size_t i = begin; i < end; ++i) {
      sample_phases(s.model, rng, phases);
      for (std::size_t m = 0; m < n; ++m) amps[m] = std::polar(s.alpha, phases[m]);
      apply_hadamard_receiver(amps);
      const double dev_on = std::abs(amps[0] - on_center);
      const double dev_off = std::abs(amps[1]);
      for (std::size_t j = 0; j < nt; ++j) {
        const double radius = s.t_grid[j] * std::abs(s.alpha) / std::sqrt(static_cast<double>(n));
        counts[c][j] += dev_on >= radius;
        counts[c][nt + j] += dev_off >= radius;
      }
    }
  });

  std::vector<ConcentrationRecord> out;
  for (int port = 0; port < 2; ++port)
    for (std::size_t j = 0; j < nt; ++j) {
      std::size_t hits = 0;
      for (const auto& cc : counts) hits += cc[port * nt + j];
      ConcentrationRecord r;
      r.order_n = n;
      r.model_kind = kind_of(s.model);
      r.noise_parameter = noise_parameter(s.model);
      r.t = s.t_grid[j];
      r.port = port == 0 ? "on" : "off";
      r.trials = s.trials;
      r.empirical = static_cast<double>(hits) / static_cast<double>(s.trials);
      r.mc_std_error = std::sqrt(r.empirical * (1.0 - r.empirical) / static_cast<double>(s.trials));
      r.bound = 4.0 * std::exp(-r.t * r.t / static_cast<double>(n));
      r.pass = r.empirical <= r.bound + 3.0 * r.mc_std_error;
      out.push_back(r);
    }
  return out;
}

inline std::string concentration_csv(const std::vector<ConcentrationRecord>& rows) {
  std::string out = "order_n,model_kind,noise_parameter,t,port,trials,empirical,mc_std_error,bound,pass";
  out += kCsvEol;
  for (const auto& r : rows) {
    out += std::to_string(r.order_n) + ',' + std::string(to_string(r.model_kind)) + ',' +
           format_number(r.noise_parameter) + ',' + format_number(r.t) + ',' + r.port + ',' +
           std::to_string(r.trials) + ',' + format_number(r.empirical) + ',' + format_number(r.mc_std_error) +
           ',' + format_number(r.bound) + ',' + (r.pass ? "pass" : "fail");
    out += kCsvEol;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Threshold report

struct ThresholdReport {
  double baud_rate = 0.0;
  std::size_t order_n = 0;
  NoiseKind model_kind = NoiseKind::VonMises;
  double sigma2_or_kappa = 0.0;
  double alpha_rx = 0.0;
  double epsilon_max = 0.0;
  double objective = 0.0;
  double half_mean = 0.0;  // sqrt(n) alpha m1 / 2
  double ratio = 0.0;      // epsilon_max / half_mean
};

inline ThresholdReport run_threshold_report(const ExperimentConfig& cfg, std::size_t n, double b,
                                            NoiseKind kind = NoiseKind::VonMises) {
  ThresholdReport r;
  r.baud_rate = b;
  r.order_n = HadamardOrder::from_size(n).size();
  r.model_kind = kind;
  const auto model = model_for_baudrate(kind, b);
  r.sigma2_or_kappa = noise_parameter(model);
  r.alpha_rx = link_budget(cfg.link(b)).alpha_rx;
  const auto moments = circular_moments(model);
  const auto opt = optimize_threshold(n, r.alpha_rx, moments);
  r.epsilon_max = opt.epsilon;
  r.objective = opt.objective;
  r.half_mean = half_mean_threshold(n, r.alpha_rx, moments);
  r.ratio = r.half_mean > 0.0 ? r.epsilon_max / r.half_mean : 0.0;
  return r;
}

}  // namespace jdr

#endif  // JDR_EXPERIMENTS_HPP
