#pragma once

// Dense second-order cone programs in the standard form
//
//     minimize    c' x
//     subject to  h - G x  in  K = K_1 x K_2 x ... x K_m
//
// where every K_i is a zero cone, a nonnegative orthant or a second-order
// (Lorentz) cone { (s0, s1) : s0 >= ||s1|| }.

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace precoder::conic {

enum class ConeKind { Zero, Nonnegative, SecondOrder };

struct Cone {
  ConeKind kind;
  std::size_t dim;

  static Cone zero(std::size_t d) { return {ConeKind::Zero, d}; }
  static Cone nonnegative(std::size_t d) { return {ConeKind::Nonnegative, d}; }
  static Cone second_order(std::size_t d) { return {ConeKind::SecondOrder, d}; }
};

struct ConeProgram {
  std::size_t num_vars = 0;
  Eigen::VectorXd objective;
  Eigen::MatrixXd constraint_matrix;
  Eigen::VectorXd offset;
  std::vector<Cone> cones;

  std::size_t num_rows() const { return static_cast<std::size_t>(offset.size()); }
};

class ConicError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Checks the structural invariants of a program. Returns a message naming
/// the violated invariant, or nothing when the program is well formed.
std::optional<std::string> validate(const ConeProgram& program);

enum class SolveStatus {
  Optimal,
  PrimalInfeasible,
  DualInfeasible,
  MaxIterations,
  NumericalFailure,
};

const char* to_string(SolveStatus status);

struct SolverSettings {
  double feas_tol = 1e-8;
  double gap_tol = 1e-8;
  int max_iter = 200;
};

struct Solution {
  SolveStatus status = SolveStatus::NumericalFailure;
  Eigen::VectorXd x;
  double objective_value = 0.0;
  /// Complementarity gap relative to max(1, |objective|).
  double duality_gap = 0.0;
  /// Worst primal residual of h - G x over all blocks, measured the same way
  /// as ResidualReport::cone_violation bounds it.
  double primal_residual = 0.0;
  int iterations = 0;
};

/// Primal-dual interior-point method on the homogeneous self-dual embedding
/// with Nesterov-Todd scaling and a Mehrotra predictor-corrector.
/// Throws ConicError if validate() rejects the program; every numerical
/// outcome is reported through Solution::status.
Solution solve(const ConeProgram& program, const SolverSettings& settings = {});

struct ResidualReport {
  /// Largest violation of any slack block (h - G x restricted to one cone).
  /// A block's violation is the smallest shift t >= 0 along the cone's
  /// identity direction that moves it into the cone (for zero cones, the
  /// largest absolute entry).
  double cone_violation = 0.0;
  /// First row of the worst block.
  std::size_t worst_row = 0;
};

/// Independent feasibility audit of a candidate point.
ResidualReport residuals(const ConeProgram& program, const Eigen::VectorXd& x);

double block_violation(ConeKind kind, const Eigen::Ref<const Eigen::VectorXd>& v);

}  // namespace precoder::conic
