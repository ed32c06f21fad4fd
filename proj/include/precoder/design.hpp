#pragma once

// Minimum-power precoder design as second-order cone programs.
//
// Both builders work over the real decision vector
//     [ vec(Re B) | vec(Im B) | tau | y_1..y_Nu | t_{1,1}..t_{Nu,2Nt} ]
// (the robust auxiliaries y and t are absent from the nominal program) and
// minimize tau subject to ||vec(B)|| <= tau. The per-user SINR requirement
// SINR_k >= gamma_k is written as the cone constraint
//     a_k h_bar_k . b_bar_k >= || [h_bar_k B_bar, sigma_k] ||,
//     a_k = sqrt(1 + 1/gamma_k),
// which holds with h_k b_k rotated onto the positive real axis.

#include "precoder/conic.hpp"
#include "precoder/model.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace precoder::design {

class DesignError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Relaxation factor giving a good power/robustness trade-off.
inline constexpr double kBalancedKappa = 0.25;

/// Per-user radii delta_k of the spherical channel uncertainty and the
/// relaxation factor kappa; the protected radius is kappa * delta_k.
struct UncertaintySpec {
  std::vector<double> delta;
  double kappa = 1.0;

  static UncertaintySpec uniform(std::size_t n_u, double delta, double kappa = 1.0);
  double effective_radius(std::size_t k) const { return kappa * delta[k]; }
  void validate(std::size_t n_u) const;
};

/// Noise entry of the per-direction perturbation cones. `Paper` keeps
/// sigma_k there (more conservative); `Zero` is the strict linearization.
enum class PerturbationSigma { Paper, Zero };

struct RobustOptions {
  PerturbationSigma perturbation_sigma = PerturbationSigma::Paper;
};

enum class ConstraintTag {
  ObjectiveEpigraph,   // ||vec(B)|| <= tau
  Sinr,                // per-user SINR cone, shrunk by kappa delta_k y_k when robust
  PerturbationPlus,    // ||[b_bar^i, sigma_k]|| - a_k B_bar(i,k) <= t_{k,i}
  PerturbationMinus,   // ||[b_bar^i, sigma_k]|| + a_k B_bar(i,k) <= t_{k,i}
  Aggregation,         // ||t_k|| <= y_k
};

const char* to_string(ConstraintTag tag);

struct ConstraintInfo {
  ConstraintTag tag;
  Eigen::Index user = -1;       // -1 for the objective epigraph
  Eigen::Index direction = -1;  // i in 0..2N_t-1 for perturbation cones
  std::size_t cone = 0;         // index into ConeProgram::cones
};

/// Maps named design variables onto ConeProgram variable indices.
class ProgramLayout {
 public:
  ProgramLayout(Eigen::Index n_t, Eigen::Index n_u, bool robust);

  Eigen::Index num_antennas() const { return n_t_; }
  Eigen::Index num_users() const { return n_u_; }
  bool robust() const { return robust_; }
  std::size_t num_vars() const;

  Eigen::Index re(Eigen::Index antenna, Eigen::Index user) const { return user * n_t_ + antenna; }
  Eigen::Index im(Eigen::Index antenna, Eigen::Index user) const {
    return n_t_ * n_u_ + user * n_t_ + antenna;
  }
  Eigen::Index tau() const { return 2 * n_t_ * n_u_; }
  Eigen::Index y(Eigen::Index user) const;
  Eigen::Index t(Eigen::Index user, Eigen::Index direction) const;

  /// Variable and sign of entry (row, col) of the real precoder B_bar, whose
  /// four blocks are [Re B, Im B; -Im B, Re B].
  std::pair<Eigen::Index, double> b_bar_entry(Eigen::Index row, Eigen::Index col) const;

  std::vector<ConstraintInfo> constraints;

 private:
  Eigen::Index n_t_;
  Eigen::Index n_u_;
  bool robust_;
};

struct BuiltProgram {
  conic::ConeProgram program;
  ProgramLayout layout;
};

BuiltProgram build_nominal(const model::ChannelSet& estimates, const model::QosSpec& qos);

BuiltProgram build_robust(const model::ChannelSet& estimates, const model::QosSpec& qos,
                          const UncertaintySpec& uncertainty, const RobustOptions& options = {});

/// Reassembles B from the Re/Im variable blocks of an optimal solution.
/// Throws DesignError for any other status.
model::Precoder extract_precoder(const conic::Solution& solution, const ProgramLayout& layout);

struct DesignResult {
  conic::SolveStatus status = conic::SolveStatus::NumericalFailure;
  std::optional<model::Precoder> precoder;  // set only when Optimal
  double power = 0.0;                       // Tr(B^H B), 0 when not Optimal
  int iterations = 0;

  bool optimal() const { return status == conic::SolveStatus::Optimal; }
};

DesignResult design_nominal(const model::ChannelSet& estimates, const model::QosSpec& qos,
                            const conic::SolverSettings& settings = {});

DesignResult design_robust(const model::ChannelSet& estimates, const model::QosSpec& qos,
                           const UncertaintySpec& uncertainty, const RobustOptions& options = {},
                           const conic::SolverSettings& settings = {});

}  // namespace precoder::design
