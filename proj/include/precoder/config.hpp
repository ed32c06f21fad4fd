#pragma once

// Flat key = value run configuration.
//
//   # comment
//   n_t = 3
//   n_u = 3
//   gamma_db = 5              # one value per user, or a single value for all
//   sigma = 1
//   delta = 0.015
//   kappa = 1
//   trials = 100
//   error_samples = 1000
//   error_mode = ball         # ball | boundary
//   methods = nominal, robust
//   method = robust           # design / verify
//   seed = 1
//   perturbation_sigma = paper   # paper | zero
//   gamma_grid_db = 0, 2, 4, 6, 8, 10
//   delta_grid = 0.005, 0.01, 0.02
//   channel = (1,0) (0,0.5); (0.2,-0.1) (1,0)   # optional explicit estimates
//
// Rows of `channel` are users, separated by ';'; entries are complex numbers
// in (re,im) notation separated by whitespace.

#include "precoder/montecarlo.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace precoder::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  mc::ExperimentConfig experiment;
  mc::Method method = mc::Method::Robust;
  std::vector<double> gamma_grid_db{0.0, 2.0, 4.0, 6.0, 8.0, 10.0};
  std::vector<double> delta_grid{0.005, 0.01, 0.015, 0.02, 0.025,
                                 0.03,  0.035, 0.04, 0.045, 0.05};
  std::optional<Eigen::MatrixXcd> channel;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(format_config(c)) reproduces c exactly.
std::string format_config(const RunConfig& config);

}  // namespace precoder::cli
