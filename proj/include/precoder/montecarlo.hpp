#pragma once

// Monte-Carlo experiments over random channel estimates and bounded channel
// errors: achieved-SINR distributions, power sweeps and worst-case audits.
//
// Every kernel exists in two execution flavours. Execution::Parallel spreads
// independent trials (or error samples) over OpenMP threads;
// Execution::Serial is the plain reference loop. Each trial draws from its
// own generator, keyed by (seed, stream, index), and results are assembled in
// index order, so both flavours return bit-identical reports.

#include "precoder/conic.hpp"
#include "precoder/design.hpp"
#include "precoder/model.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace precoder::mc {

enum class Method { Nominal, Robust };
enum class Execution { Serial, Parallel };

const char* to_string(Method method);
std::optional<Method> parse_method(std::string_view name);

/// SINR values of zero are reported at this floor instead of -inf dB.
inline constexpr double kSinrFloorDb = -100.0;
double floor_db(double linear_sinr);

struct ExperimentConfig {
  int n_u = 3;
  int n_t = 3;
  std::vector<double> gamma_db{5.0, 5.0, 5.0};
  std::vector<double> sigma{1.0, 1.0, 1.0};
  std::vector<double> delta{0.015, 0.015, 0.015};
  double kappa = 1.0;
  int n_channel_trials = 100;
  int n_error_samples = 1000;
  model::ErrorMode error_mode = model::ErrorMode::Ball;
  std::vector<Method> methods{Method::Nominal, Method::Robust};
  std::uint64_t seed = 1;
  design::PerturbationSigma perturbation_sigma = design::PerturbationSigma::Paper;
  conic::SolverSettings solver;

  /// Sets gamma_db, sigma and delta to the same value for every user.
  void set_uniform(double gamma_db_all, double sigma_all, double delta_all);
  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

  model::QosSpec qos() const;
  design::UncertaintySpec uncertainty() const;
  design::RobustOptions robust_options() const { return {perturbation_sigma}; }
};

struct MethodReport {
  Method method = Method::Nominal;
  std::vector<double> sinr_db;               // sorted ascending, feasible trials only
  std::vector<double> power;                 // per trial; 0 for non-optimal trials
  std::vector<conic::SolveStatus> status;    // per trial
  double feasibility_rate = 0.0;

  std::size_t feasible_trials() const;
  double mean_power() const;  // over feasible trials; NaN if none
  /// Fraction of SINR samples strictly below the threshold.
  double fraction_below(double threshold_db) const;
};

struct SimulationReport {
  ExperimentConfig config;
  std::vector<MethodReport> methods;

  const MethodReport& at(Method method) const;
};

/// (value, cumulative fraction) pairs of the empirical CDF of sorted samples.
std::vector<std::pair<double, double>> empirical_cdf(std::span<const double> sorted);

SimulationReport sinr_cdf_experiment(const ExperimentConfig& config,
                                     Execution execution = Execution::Parallel);

struct SweepRow {
  Method method = Method::Nominal;
  double value = 0.0;              // grid point (gamma in dB or delta)
  double mean_power = 0.0;         // over trials feasible at this point; NaN if none
  double mean_power_common = 0.0;  // over trials feasible for every method at every grid point; NaN if none
  double feasibility_rate = 0.0;
  int feasible_trials = 0;
  int common_trials = 0;  // size of the set behind mean_power_common
  int trials = 0;
};

struct SweepTable {
  std::string parameter;  // "gamma_db" or "delta"
  std::vector<SweepRow> rows;  // grouped by method, in grid order
};

SweepTable power_vs_gamma_sweep(const ExperimentConfig& config,
                                std::span<const double> gamma_grid_db,
                                Execution execution = Execution::Parallel);

SweepTable power_vs_delta_sweep(const ExperimentConfig& config, std::span<const double> delta_grid,
                                Execution execution = Execution::Parallel);

struct WorstCaseResult {
  std::vector<double> min_sinr_db;                 // per user, floored
  std::vector<model::ErrorVector> argmin_errors;   // minimizing error per user
};

/// Sampling audit of the worst case over the uncertainty spheres: evaluates
/// the zero error plus n_samples boundary errors per user.
WorstCaseResult worst_case_check(const model::ChannelSet& estimates,
                                 const model::Precoder& precoder, const model::QosSpec& qos,
                                 std::span<const double> delta, int n_samples, std::uint64_t seed,
                                 Execution execution = Execution::Parallel);

/// Generator streams; kept public so tests can reproduce samples.
namespace stream {
inline constexpr std::uint64_t kChannel = 1;
inline constexpr std::uint64_t kError = 2;
inline constexpr std::uint64_t kWorstCase = 3;
}  // namespace stream

}  // namespace precoder::mc
