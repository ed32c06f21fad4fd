#include "precoder/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <omp.h>

namespace precoder::mc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs body(i) for i in [0, count). Parallel runs may finish in any order;
// callers write into slot i only, so the result is schedule independent.
template <typename Body>
void for_each_index(int count, Execution execution, Body&& body) {
  if (execution == Execution::Serial) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(precoder_mc_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

model::ChannelSet trial_channels(const ExperimentConfig& config, int trial) {
  auto rng = model::make_rng(config.seed, stream::kChannel, static_cast<std::uint64_t>(trial));
  return model::generate_channels(config.n_u, config.n_t, rng);
}

design::DesignResult run_method(Method method, const model::ChannelSet& estimates,
                                const model::QosSpec& qos, const design::UncertaintySpec& unc,
                                const ExperimentConfig& config) {
  if (method == Method::Nominal) return design::design_nominal(estimates, qos, config.solver);
  return design::design_robust(estimates, qos, unc, config.robust_options(), config.solver);
}

struct TrialOutcome {
  conic::SolveStatus status = conic::SolveStatus::NumericalFailure;
  double power = 0.0;
  std::vector<double> sinr_db;
};

TrialOutcome cdf_trial(const ExperimentConfig& config, Method method, int trial,
                       const model::QosSpec& qos, const design::UncertaintySpec& unc) {
  const model::ChannelSet estimates = trial_channels(config, trial);
  const design::DesignResult designed = run_method(method, estimates, qos, unc, config);
  TrialOutcome out;
  out.status = designed.status;
  if (!designed.optimal()) return out;
  out.power = designed.power;

  // same error stream for every method so designs are compared on equal draws
  auto rng = model::make_rng(config.seed, stream::kError, static_cast<std::uint64_t>(trial));
  const auto n_u = static_cast<std::size_t>(config.n_u);
  out.sinr_db.reserve(static_cast<std::size_t>(config.n_error_samples) * n_u);
  std::vector<model::ErrorVector> errors(n_u);
  for (int s = 0; s < config.n_error_samples; ++s) {
    for (std::size_t k = 0; k < n_u; ++k) {
      errors[k] = model::sample_error(config.n_t, config.delta[k], config.error_mode, rng);
    }
    const auto sinr = model::achieved_sinr(model::perturb(estimates, errors), *designed.precoder,
                                           qos.sigma);
    for (double v : sinr) out.sinr_db.push_back(floor_db(v));
  }
  return out;
}

MethodReport assemble(Method method, std::vector<TrialOutcome>&& trials) {
  MethodReport report;
  report.method = method;
  std::size_t total = 0;
  for (const auto& t : trials) total += t.sinr_db.size();
  report.sinr_db.reserve(total);
  for (auto& t : trials) {
    report.status.push_back(t.status);
    report.power.push_back(t.power);
    report.sinr_db.insert(report.sinr_db.end(), t.sinr_db.begin(), t.sinr_db.end());
  }
  std::sort(report.sinr_db.begin(), report.sinr_db.end());
  report.feasibility_rate = trials.empty() ? 0.0
                                           : static_cast<double>(report.feasible_trials()) /
                                                 static_cast<double>(trials.size());
  return report;
}

// power[g][t] for every grid point g and trial t; NaN marks non-optimal.
using PowerGrid = std::vector<std::vector<double>>;

SweepTable tabulate(std::string parameter, const std::vector<Method>& methods,
                    std::span<const double> grid, const std::vector<PowerGrid>& powers,
                    int trials) {
  SweepTable table;
  table.parameter = std::move(parameter);
  // trials feasible for every method at every grid point
  std::vector<bool> common(static_cast<std::size_t>(trials), true);
  for (const PowerGrid& pg : powers) {
    for (const auto& row : pg) {
      for (int t = 0; t < trials; ++t) {
        if (std::isnan(row[static_cast<std::size_t>(t)])) common[static_cast<std::size_t>(t)] = false;
      }
    }
  }
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    const PowerGrid& pg = powers[mi];
    for (std::size_t g = 0; g < grid.size(); ++g) {
      SweepRow r;
      r.method = methods[mi];
      r.value = grid[g];
      r.trials = trials;
      double sum = 0.0, sum_common = 0.0;
      int n_common = 0;
      for (int t = 0; t < trials; ++t) {
        const double p = pg[g][static_cast<std::size_t>(t)];
        if (std::isnan(p)) continue;
        sum += p;
        ++r.feasible_trials;
        if (common[static_cast<std::size_t>(t)]) {
          sum_common += p;
          ++n_common;
        }
      }
      r.feasibility_rate = static_cast<double>(r.feasible_trials) / static_cast<double>(trials);
      r.mean_power = r.feasible_trials ? sum / r.feasible_trials : kNaN;
      r.mean_power_common = n_common ? sum_common / n_common : kNaN;
      r.common_trials = n_common;
      table.rows.push_back(r);
    }
  }
  return table;
}

template <typename Adjust>
SweepTable run_sweep(const ExperimentConfig& config, std::string parameter,
                     std::span<const double> grid, Execution execution, Adjust&& adjust) {
  config.validate();
  const int trials = config.n_channel_trials;
  const auto points = static_cast<int>(grid.size());
  std::vector<ExperimentConfig> configs;
  for (double v : grid) {
    ExperimentConfig c = config;
    adjust(c, v);
    c.validate();
    configs.push_back(std::move(c));
  }

  std::vector<PowerGrid> powers(config.methods.size(),
                                PowerGrid(grid.size(), std::vector<double>(trials, kNaN)));
  // one task per (grid point, trial); channels depend on the trial only
  for_each_index(points * trials, execution, [&](int task) {
    const int g = task / trials;
    const int t = task % trials;
    const ExperimentConfig& c = configs[static_cast<std::size_t>(g)];
    const model::ChannelSet estimates = trial_channels(c, t);
    const model::QosSpec qos = c.qos();
    const design::UncertaintySpec unc = c.uncertainty();
    for (std::size_t mi = 0; mi < c.methods.size(); ++mi) {
      const auto designed = run_method(c.methods[mi], estimates, qos, unc, c);
      if (designed.optimal()) {
        powers[mi][static_cast<std::size_t>(g)][static_cast<std::size_t>(t)] = designed.power;
      }
    }
  });
  return tabulate(std::move(parameter), config.methods, grid, powers, trials);
}

}  // namespace

const char* to_string(Method method) {
  return method == Method::Nominal ? "nominal" : "robust";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "nominal") return Method::Nominal;
  if (name == "robust") return Method::Robust;
  return std::nullopt;
}

double floor_db(double linear_sinr) {
  if (!(linear_sinr > 0.0)) return kSinrFloorDb;
  return std::max(model::to_db(linear_sinr), kSinrFloorDb);
}

void ExperimentConfig::set_uniform(double gamma_db_all, double sigma_all, double delta_all) {
  const auto n = static_cast<std::size_t>(std::max(n_u, 0));
  gamma_db.assign(n, gamma_db_all);
  sigma.assign(n, sigma_all);
  delta.assign(n, delta_all);
}

void ExperimentConfig::validate() const {
  if (n_u < 1 || n_t < 1) throw std::invalid_argument("n_u and n_t must be >= 1");
  if (n_channel_trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (n_error_samples < 1) throw std::invalid_argument("error_samples must be >= 1");
  const auto n = static_cast<std::size_t>(n_u);
  if (gamma_db.size() != n) throw std::invalid_argument("gamma_db needs one entry per user");
  if (sigma.size() != n) throw std::invalid_argument("sigma needs one entry per user");
  if (delta.size() != n) throw std::invalid_argument("delta needs one entry per user");
  for (double g : gamma_db) {
    if (!std::isfinite(g)) throw std::invalid_argument("gamma_db must be finite");
  }
  if (methods.empty()) throw std::invalid_argument("at least one method is required");
  qos().validate(n);
  uncertainty().validate(n);
}

model::QosSpec ExperimentConfig::qos() const {
  model::QosSpec q;
  for (double g : gamma_db) q.gamma.push_back(model::from_db(g));
  q.sigma = sigma;
  return q;
}

design::UncertaintySpec ExperimentConfig::uncertainty() const { return {delta, kappa}; }

std::size_t MethodReport::feasible_trials() const {
  return static_cast<std::size_t>(
      std::count(status.begin(), status.end(), conic::SolveStatus::Optimal));
}

double MethodReport::mean_power() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t t = 0; t < status.size(); ++t) {
    if (status[t] != conic::SolveStatus::Optimal) continue;
    sum += power[t];
    ++n;
  }
  return n ? sum / static_cast<double>(n) : kNaN;
}

double MethodReport::fraction_below(double threshold_db) const {
  if (sinr_db.empty()) return 0.0;
  const auto it = std::lower_bound(sinr_db.begin(), sinr_db.end(), threshold_db);
  return static_cast<double>(it - sinr_db.begin()) / static_cast<double>(sinr_db.size());
}

const MethodReport& SimulationReport::at(Method method) const {
  for (const auto& m : methods) {
    if (m.method == method) return m;
  }
  throw std::out_of_range(std::string("report has no entry for method ") + to_string(method));
}

std::vector<std::pair<double, double>> empirical_cdf(std::span<const double> sorted) {
  std::vector<std::pair<double, double>> cdf;
  const auto n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    // collapse ties onto their last occurrence
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    cdf.emplace_back(sorted[i], static_cast<double>(i + 1) / n);
  }
  return cdf;
}

SimulationReport sinr_cdf_experiment(const ExperimentConfig& config, Execution execution) {
  config.validate();
  const model::QosSpec qos = config.qos();
  const design::UncertaintySpec unc = config.uncertainty();
  SimulationReport report;
  report.config = config;
  for (Method method : config.methods) {
    std::vector<TrialOutcome> trials(static_cast<std::size_t>(config.n_channel_trials));
    for_each_index(config.n_channel_trials, execution, [&](int t) {
      trials[static_cast<std::size_t>(t)] = cdf_trial(config, method, t, qos, unc);
    });
    report.methods.push_back(assemble(method, std::move(trials)));
  }
  return report;
}

SweepTable power_vs_gamma_sweep(const ExperimentConfig& config,
                                std::span<const double> gamma_grid_db, Execution execution) {
  return run_sweep(config, "gamma_db", gamma_grid_db, execution,
                   [](ExperimentConfig& c, double v) { c.gamma_db.assign(c.gamma_db.size(), v); });
}

SweepTable power_vs_delta_sweep(const ExperimentConfig& config, std::span<const double> delta_grid,
                                Execution execution) {
  return run_sweep(config, "delta", delta_grid, execution,
                   [](ExperimentConfig& c, double v) { c.delta.assign(c.delta.size(), v); });
}

WorstCaseResult worst_case_check(const model::ChannelSet& estimates,
                                 const model::Precoder& precoder, const model::QosSpec& qos,
                                 std::span<const double> delta, int n_samples, std::uint64_t seed,
                                 Execution execution) {
  const auto n_u = static_cast<std::size_t>(estimates.num_users());
  const Eigen::Index n_t = estimates.num_antennas();
  if (n_samples < 1) throw std::invalid_argument("worst_case_check: n_samples must be >= 1");
  if (delta.size() != n_u || qos.sigma.size() != n_u) {
    throw std::invalid_argument("worst_case_check: one delta and sigma per user required");
  }

  // sample 0 is the zero error; the rest lie on the sphere boundaries
  const int total = n_samples + 1;
  std::vector<std::vector<model::ErrorVector>> errors(static_cast<std::size_t>(total));
  std::vector<std::vector<double>> sinr(static_cast<std::size_t>(total));
  for_each_index(total, execution, [&](int s) {
    auto& e = errors[static_cast<std::size_t>(s)];
    e.resize(n_u);
    auto rng = model::make_rng(seed, stream::kWorstCase, static_cast<std::uint64_t>(s));
    for (std::size_t k = 0; k < n_u; ++k) {
      e[k] = s == 0 ? model::ErrorVector(model::ErrorVector::Zero(n_t))
                    : model::sample_error(n_t, delta[k], model::ErrorMode::Boundary, rng);
    }
    sinr[static_cast<std::size_t>(s)] =
        model::achieved_sinr(model::perturb(estimates, e), precoder, qos.sigma);
  });

  WorstCaseResult result;
  result.min_sinr_db.assign(n_u, std::numeric_limits<double>::infinity());
  result.argmin_errors.resize(n_u);
  std::vector<double> best(n_u, std::numeric_limits<double>::infinity());
  for (std::size_t s = 0; s < sinr.size(); ++s) {
    for (std::size_t k = 0; k < n_u; ++k) {
      if (sinr[s][k] < best[k]) {
        best[k] = sinr[s][k];
        result.argmin_errors[k] = errors[s][k];
      }
    }
  }
  for (std::size_t k = 0; k < n_u; ++k) result.min_sinr_db[k] = floor_db(best[k]);
  return result;
}

}  // namespace precoder::mc
