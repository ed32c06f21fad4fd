#include "precoder/cli.hpp"

#include "precoder/config.hpp"
#include "precoder/montecarlo.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <omp.h>

#ifndef PRECODER_VERSION
#define PRECODER_VERSION "dev"
#endif

namespace precoder::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config_path;
  std::string method;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool serial = false;
  int threads = 0;
};

std::string num(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// Undefined averages (no feasible trial) are left empty rather than written as nan.
std::string num_or_empty(double v) { return std::isnan(v) ? std::string() : num(v); }

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

class CsvFile {
 public:
  CsvFile(const fs::path& path, const std::string& header) : path_(path), out_(path) {
    if (!out_) throw std::runtime_error("cannot write '" + path.string() + "'");
    out_ << header << "\n";
  }
  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ",") << fields, first = false), ...);
    out_ << "\n";
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
  std::ofstream out_;
};

// Loads the config, applies flag overrides and prepares the output directory.
struct Prepared {
  RunConfig config;
  fs::path out_dir;
  mc::Execution execution;
  std::string started_at;
};

Prepared prepare(const Options& opt) {
  Prepared p;
  p.started_at = utc_now();
  p.config = load_config(opt.config_path);
  if (opt.seed) p.config.experiment.seed = *opt.seed;
  if (!opt.method.empty()) {
    const auto m = mc::parse_method(opt.method);
    if (!m) throw ConfigError("unknown --method '" + opt.method + "'");
    p.config.method = *m;
  }
  if (!opt.out_dir.empty()) {
    p.out_dir = opt.out_dir;
  } else if (const char* env = std::getenv(kOutputDirEnv); env && *env) {
    p.out_dir = env;
  } else {
    p.out_dir = ".";
  }
  std::error_code ec;
  fs::create_directories(p.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + p.out_dir.string() + "'");
  if (opt.threads > 0) omp_set_num_threads(opt.threads);
  p.execution = opt.serial ? mc::Execution::Serial : mc::Execution::Parallel;
  return p;
}

void write_manifest(const Prepared& p, const std::string& command,
                    const std::vector<fs::path>& outputs) {
  std::ofstream out(p.out_dir / "manifest.cfg");
  out << "# precoder run manifest; rerun with: precoder " << command << " manifest.cfg\n";
  out << "# tool_version = " << PRECODER_VERSION << "\n";
  out << "# command = " << command << "\n";
  out << "# started_at = " << p.started_at << "\n";
  out << "# finished_at = " << utc_now() << "\n";
  out << "# outputs =";
  for (const auto& o : outputs) out << " " << o.filename().string();
  out << "\n";
  out << format_config(p.config);
}

model::ChannelSet design_channels(const RunConfig& cfg) {
  if (cfg.channel) return model::ChannelSet(*cfg.channel);
  auto rng = model::make_rng(cfg.experiment.seed, mc::stream::kChannel, 0);
  return model::generate_channels(cfg.experiment.n_u, cfg.experiment.n_t, rng);
}

design::DesignResult run_design(const RunConfig& cfg, const model::ChannelSet& estimates) {
  const mc::ExperimentConfig& ex = cfg.experiment;
  if (cfg.method == mc::Method::Nominal) return design::design_nominal(estimates, ex.qos(), ex.solver);
  return design::design_robust(estimates, ex.qos(), ex.uncertainty(), ex.robust_options(), ex.solver);
}

int cmd_design(const Options& opt, std::ostream& out) {
  const Prepared p = prepare(opt);
  const mc::ExperimentConfig& ex = p.config.experiment;
  const model::ChannelSet estimates = design_channels(p.config);
  const design::DesignResult result = run_design(p.config, estimates);

  std::vector<fs::path> outputs;
  {
    CsvFile summary(p.out_dir / "design_summary.csv", "method,status,power,user,target_db,sinr_db");
    std::vector<double> sinr(static_cast<std::size_t>(ex.n_u), 0.0);
    if (result.precoder) sinr = model::achieved_sinr(estimates, *result.precoder, ex.sigma);
    for (int k = 0; k < ex.n_u; ++k) {
      summary.row(mc::to_string(p.config.method), conic::to_string(result.status), num(result.power),
                  k + 1, num(ex.gamma_db[static_cast<std::size_t>(k)]),
                  num(mc::floor_db(sinr[static_cast<std::size_t>(k)])));
    }
    outputs.push_back(summary.path());
  }
  if (result.precoder) {
    std::string header = "antenna";
    for (int k = 1; k <= ex.n_u; ++k) header += ",re_" + std::to_string(k) + ",im_" + std::to_string(k);
    std::ofstream csv(p.out_dir / "precoder.csv");
    csv << header << "\n";
    const Eigen::MatrixXcd& b = result.precoder->matrix();
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      csv << i + 1;
      for (Eigen::Index k = 0; k < b.cols(); ++k) csv << "," << num(b(i, k).real()) << "," << num(b(i, k).imag());
      csv << "\n";
    }
    outputs.push_back(p.out_dir / "precoder.csv");
  }
  write_manifest(p, "design", outputs);

  out << "status " << conic::to_string(result.status) << "\n";
  if (!result.optimal()) return kExitSolve;
  out << "power " << num(result.power) << "\n";
  return kExitOk;
}

int cmd_cdf(const Options& opt, std::ostream& out) {
  const Prepared p = prepare(opt);
  const mc::SimulationReport report = mc::sinr_cdf_experiment(p.config.experiment, p.execution);

  CsvFile cdf(p.out_dir / "cdf.csv", "method,sinr_db,cdf");
  CsvFile trials(p.out_dir / "trials.csv", "method,trial,status,power");
  bool any_feasible = false;
  for (const mc::MethodReport& m : report.methods) {
    for (const auto& [value, frac] : mc::empirical_cdf(m.sinr_db)) cdf.row(mc::to_string(m.method), num(value), num(frac));
    for (std::size_t t = 0; t < m.status.size(); ++t) {
      trials.row(mc::to_string(m.method), t, conic::to_string(m.status[t]), num(m.power[t]));
    }
    any_feasible = any_feasible || m.feasible_trials() > 0;
    const double target = *std::min_element(p.config.experiment.gamma_db.begin(),
                                            p.config.experiment.gamma_db.end());
    out << mc::to_string(m.method) << ": feasibility " << num(m.feasibility_rate) << ", mean power "
        << num(m.mean_power()) << ", below target " << num(m.fraction_below(target)) << "\n";
  }
  write_manifest(p, "cdf", {cdf.path(), trials.path()});
  return any_feasible ? kExitOk : kExitSolve;
}

int write_sweep(const Prepared& p, const std::string& command, const std::string& file,
                const mc::SweepTable& table, std::ostream& out) {
  CsvFile csv(p.out_dir / file, "method," + table.parameter +
                                    ",mean_power,mean_power_common,feasibility_rate,feasible_trials,common_trials,trials");
  bool exhausted = false;
  for (const mc::SweepRow& r : table.rows) {
    csv.row(mc::to_string(r.method), num(r.value), num_or_empty(r.mean_power),
            num_or_empty(r.mean_power_common),
            num(r.feasibility_rate), r.feasible_trials, r.common_trials, r.trials);
    if (r.feasible_trials == 0) {
      exhausted = true;
      out << mc::to_string(r.method) << ": no feasible design at " << table.parameter << " = "
          << num(r.value) << " (PrimalInfeasible)\n";
    }
  }
  write_manifest(p, command, {csv.path()});
  return exhausted ? kExitSolve : kExitOk;
}

int cmd_sweep_gamma(const Options& opt, std::ostream& out) {
  const Prepared p = prepare(opt);
  const auto table = mc::power_vs_gamma_sweep(p.config.experiment, p.config.gamma_grid_db, p.execution);
  return write_sweep(p, "sweep-gamma", "sweep_gamma.csv", table, out);
}

int cmd_sweep_delta(const Options& opt, std::ostream& out) {
  const Prepared p = prepare(opt);
  const auto table = mc::power_vs_delta_sweep(p.config.experiment, p.config.delta_grid, p.execution);
  return write_sweep(p, "sweep-delta", "sweep_delta.csv", table, out);
}

int cmd_verify(const Options& opt, std::ostream& out) {
  const Prepared p = prepare(opt);
  const mc::ExperimentConfig& ex = p.config.experiment;
  CsvFile csv(p.out_dir / "verify.csv", "trial,status,user,target_db,min_sinr_db,margin_db");
  int designed = 0, violations = 0;
  for (int t = 0; t < ex.n_channel_trials; ++t) {
    auto rng = model::make_rng(ex.seed, mc::stream::kChannel, static_cast<std::uint64_t>(t));
    const model::ChannelSet estimates = model::generate_channels(ex.n_u, ex.n_t, rng);
    const design::DesignResult result = run_design(p.config, estimates);
    if (!result.optimal()) {
      csv.row(t, conic::to_string(result.status), "", "", "", "");
      continue;
    }
    ++designed;
    const auto check = mc::worst_case_check(estimates, *result.precoder, ex.qos(), ex.delta,
                                            ex.n_error_samples, ex.seed + static_cast<std::uint64_t>(t),
                                            p.execution);
    for (int k = 0; k < ex.n_u; ++k) {
      const double target = ex.gamma_db[static_cast<std::size_t>(k)];
      const double got = check.min_sinr_db[static_cast<std::size_t>(k)];
      if (got < target) ++violations;
      csv.row(t, conic::to_string(result.status), k + 1, num(target), num(got), num(got - target));
    }
  }
  write_manifest(p, "verify", {csv.path()});
  out << "designed " << designed << "/" << ex.n_channel_trials << ", users below target "
      << violations << "\n";
  return designed > 0 ? kExitOk : kExitSolve;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimum-power SINR-constrained precoder design for the MISO downlink"};
  app.set_version_flag("--version", PRECODER_VERSION);
  app.require_subcommand(1);

  Options opt;
  std::string seed_text;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", opt.config_path, "Run configuration file")->required();
    sub->add_option("--seed", seed_text, "Override the configured seed");
    sub->add_option("--out", opt.out_dir,
                    std::string("Output directory (default: $") + kOutputDirEnv + " or .)");
    sub->add_flag("--serial", opt.serial, "Run the serial reference kernels");
    sub->add_option("--threads", opt.threads, "OpenMP thread count");
  };
  CLI::App* design = app.add_subcommand("design", "Design one precoder");
  design->add_option("--method", opt.method, "nominal or robust");
  add_common(design);
  CLI::App* cdf = app.add_subcommand("cdf", "Achieved-SINR distribution under channel errors");
  add_common(cdf);
  CLI::App* sweep_gamma = app.add_subcommand("sweep-gamma", "Transmit power versus SINR target");
  add_common(sweep_gamma);
  CLI::App* sweep_delta = app.add_subcommand("sweep-delta", "Transmit power versus uncertainty size");
  add_common(sweep_delta);
  CLI::App* verify = app.add_subcommand("verify", "Worst-case SINR audit of designed precoders");
  verify->add_option("--method", opt.method, "nominal or robust");
  add_common(verify);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (!seed_text.empty()) {
      std::uint64_t s = 0;
      const auto [ptr, ec] = std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), s);
      if (ec != std::errc() || ptr != seed_text.data() + seed_text.size()) {
        throw ConfigError("--seed must be a nonnegative integer");
      }
      opt.seed = s;
    }
    if (design->parsed()) return cmd_design(opt, out);
    if (cdf->parsed()) return cmd_cdf(opt, out);
    if (sweep_gamma->parsed()) return cmd_sweep_gamma(opt, out);
    if (sweep_delta->parsed()) return cmd_sweep_delta(opt, out);
    if (verify->parsed()) return cmd_verify(opt, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolve;
  }
  return kExitConfig;
}

}  // namespace precoder::cli
