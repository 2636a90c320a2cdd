// jdrsim: command-line driver for the Hadamard joint-detection receiver
// simulator.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "jdr/experiments.hpp"
#include "jdr/persistence.hpp"
#include "jdr/selftest.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
};

void add_config_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "Config file (flat key = value)")->check(CLI::ExistingFile);
  cmd->add_option("--set", f.overrides, "Override a config key, KEY=VALUE (repeatable)");
  cmd->add_option("--seed", f.seed, "Master seed, overrides the config");
  cmd->add_option("--workers", f.workers, "Worker threads; results do not depend on this")->check(CLI::PositiveNumber);
}

jdr::ExperimentConfig resolve_config(const CommonFlags& f) {
  jdr::ExperimentConfig cfg = f.config_path.empty() ? jdr::ExperimentConfig{} : jdr::load_config(f.config_path);
  for (const auto& kv : f.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects KEY=VALUE, got '" + kv + "'");
    jdr::apply_config_value(cfg, jdr::detail::trim(kv.substr(0, eq)), jdr::detail::trim(kv.substr(eq + 1)));
  }
  if (f.seed) cfg.seed = *f.seed;
  cfg.validate();
  return cfg;
}

int write_sweep(const std::string& command, const std::string& out_dir, bool append, const jdr::ExperimentConfig& cfg,
                std::size_t workers, std::optional<double> fixed_baud) {
  auto plan = jdr::prepare_output(out_dir, append);
  const jdr::RunOptions opts{workers, plan.repetition_offset};
  const auto rows = fixed_baud ? jdr::run_order_sweep(cfg, *fixed_baud, opts) : jdr::run_fig1_sweep(cfg, opts);
  jdr::write_results(plan, rows);
  nlohmann::json extra = nlohmann::json::object();
  if (fixed_baud) extra["fixed_baud"] = *fixed_baud;
  jdr::write_metadata(plan, command, cfg, extra);
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.status != "ok";
  std::cerr << command << ": wrote " << rows.size() << " records to " << plan.csv().string();
  if (failed) std::cerr << " (" << failed << " with error status)";
  std::cerr << '\n';
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hadamard joint-detection receiver simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(jdr::kToolVersion));

  CommonFlags baud_flags;
  std::string baud_out;
  bool baud_append = false;
  auto* sweep_baud = app.add_subcommand("sweep-baud", "Capacity versus baud rate (classical and receiver orders)");
  add_config_flags(sweep_baud, baud_flags);
  sweep_baud->add_option("--out", baud_out, "Output directory")->required();
  sweep_baud->add_flag("--append", baud_append, "Append repetitions to existing results");

  CommonFlags order_flags;
  std::string order_out;
  double order_baud = 0.0;
  bool order_append = false;
  auto* sweep_order = app.add_subcommand("sweep-order", "Mutual information and capacity versus receiver order");
  add_config_flags(sweep_order, order_flags);
  sweep_order->add_option("--baud", order_baud, "Baud rate in symbols/s")->required()->check(CLI::PositiveNumber);
  sweep_order->add_option("--out", order_out, "Output directory")->required();
  sweep_order->add_flag("--append", order_append, "Append repetitions to existing results");

  jdr::ConcentrationSettings conc;
  std::string conc_model = "von-mises";
  std::string conc_tgrid = "4,8,16";
  std::optional<double> conc_param;
  std::optional<double> conc_baud;
  std::string conc_out;
  std::size_t conc_workers = 1;
  auto* concentration = app.add_subcommand("concentration", "Tail frequencies of the receiver output against 4 exp(-t^2/n)");
  concentration->add_option("--order", conc.order_n, "Receiver order n")->required();
  concentration->add_option("--t-grid", conc_tgrid, "Comma-separated t values");
  concentration->add_option("--model", conc_model, "von-mises or wrapped-normal");
  auto* param_opt = concentration->add_option("--noise-param", conc_param, "kappa (von Mises) or sigma^2 (wrapped normal)");
  concentration->add_option("--baud", conc_baud, "Derive the noise parameter from a baud rate")->excludes(param_opt);
  concentration->add_option("--alpha", conc.alpha, "Transmitted amplitude");
  concentration->add_option("--trials", conc.trials, "Number of phase realizations");
  concentration->add_option("--seed", conc.seed, "Seed");
  concentration->add_option("--workers", conc_workers, "Worker threads")->check(CLI::PositiveNumber);
  concentration->add_option("--out", conc_out, "Write CSV here instead of stdout");

  CommonFlags thr_flags;
  std::size_t thr_order = 4;
  double thr_baud = 0.0;
  std::string thr_model = "von-mises";
  auto* threshold = app.add_subcommand("threshold", "Optimized homodyne threshold for one operating point");
  add_config_flags(threshold, thr_flags);
  threshold->add_option("--order", thr_order, "Receiver order n")->required();
  threshold->add_option("--baud", thr_baud, "Baud rate in symbols/s")->required()->check(CLI::PositiveNumber);
  threshold->add_option("--model", thr_model, "von-mises or wrapped-normal");

  bool inject_flip = false;
  auto* selftest = app.add_subcommand("selftest", "Run the fast invariant suite");
  selftest->add_flag("--inject-sign-flip", inject_flip, "Use a sign-flipped detection probability (must fail)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep_baud) return write_sweep("sweep-baud", baud_out, baud_append, resolve_config(baud_flags),
                                        baud_flags.workers, std::nullopt);
    if (*sweep_order) return write_sweep("sweep-order", order_out, order_append, resolve_config(order_flags),
                                         order_flags.workers, order_baud);
    if (*concentration) {
      const auto kind = jdr::parse_noise_kind(conc_model);
      conc.t_grid.clear();
      for (const auto& s : jdr::detail::split_list(conc_tgrid)) conc.t_grid.push_back(jdr::detail::parse_double("t-grid", s));
      if (conc_baud) conc.model = jdr::model_for_baudrate(kind, *conc_baud);
      else if (kind == jdr::NoiseKind::VonMises) conc.model = jdr::VonMises{conc_param.value_or(1e5)};
      else conc.model = jdr::WrappedNormal{conc_param.value_or(1e-5)};
      const auto rows = jdr::run_concentration_experiment(conc, conc_workers);
      const auto text = jdr::concentration_csv(rows);
      if (conc_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(conc_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + conc_out);
        out << text;
      }
      for (const auto& r : rows)
        if (!r.pass) return 1;
      return 0;
    }
    if (*threshold) {
      const auto cfg = resolve_config(thr_flags);
      const auto r = jdr::run_threshold_report(cfg, thr_order, thr_baud, jdr::parse_noise_kind(thr_model));
      std::cout << "baud_rate,order_n,model_kind,sigma2_or_kappa,alpha_rx,epsilon_max,objective,half_mean,ratio\n"
                << jdr::format_number(r.baud_rate) << ',' << r.order_n << ',' << jdr::to_string(r.model_kind) << ','
                << jdr::format_number(r.sigma2_or_kappa) << ',' << jdr::format_number(r.alpha_rx) << ','
                << jdr::format_number(r.epsilon_max) << ',' << jdr::format_number(r.objective) << ','
                << jdr::format_number(r.half_mean) << ',' << jdr::format_number(r.ratio) << '\n';
      return 0;
    }
    if (*selftest) {
      jdr::SelftestOptions opts;
      opts.inject_detection_sign_flip = inject_flip;
      const auto report = jdr::run_selftest(opts);
      for (const auto& s : report.suites)
        std::printf("%-28s %s  %7.3fs  %s\n", s.name.c_str(), s.passed ? "PASS" : "FAIL", s.seconds, s.detail.c_str());
      std::printf("selftest: %s\n", report.passed() ? "PASS" : "FAIL");
      return report.passed() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "jdrsim: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
