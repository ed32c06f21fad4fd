#include "precoder/conic.hpp"

#include <cmath>
#include <sstream>

namespace precoder::conic {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::PrimalInfeasible: return "PrimalInfeasible";
    case SolveStatus::DualInfeasible: return "DualInfeasible";
    case SolveStatus::MaxIterations: return "MaxIterations";
    case SolveStatus::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

std::optional<std::string> validate(const ConeProgram& program) {
  std::ostringstream msg;
  if (program.num_vars == 0) {
    return std::string("empty problem: num_vars must be positive");
  }
  const auto n = static_cast<Eigen::Index>(program.num_vars);
  if (program.objective.size() != n) {
    msg << "objective has length " << program.objective.size() << ", expected num_vars = " << n;
    return msg.str();
  }
  if (program.constraint_matrix.cols() != n) {
    msg << "constraint_matrix has " << program.constraint_matrix.cols()
        << " columns, expected num_vars = " << n;
    return msg.str();
  }
  if (program.constraint_matrix.rows() != program.offset.size()) {
    msg << "constraint_matrix has " << program.constraint_matrix.rows()
        << " rows but offset has length " << program.offset.size();
    return msg.str();
  }
  std::size_t total = 0;
  for (const Cone& cone : program.cones) total += cone.dim;  // empty cones are allowed and skipped
  if (total != program.num_rows()) {
    msg << "dimension mismatch: cone dims sum to " << total << " but there are "
        << program.num_rows() << " constraint rows";
    return msg.str();
  }
  if (!program.objective.allFinite()) return std::string("objective contains a non-finite entry");
  if (!program.constraint_matrix.allFinite()) {
    return std::string("constraint_matrix contains a non-finite entry");
  }
  if (!program.offset.allFinite()) return std::string("offset contains a non-finite entry");
  return std::nullopt;
}

double block_violation(ConeKind kind, const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() == 0) return 0.0;
  switch (kind) {
    case ConeKind::Zero:
      return v.cwiseAbs().maxCoeff();
    case ConeKind::Nonnegative:
      return std::max(0.0, -v.minCoeff());
    case ConeKind::SecondOrder:
      return std::max(0.0, v.tail(v.size() - 1).norm() - v(0));
  }
  return 0.0;
}

ResidualReport residuals(const ConeProgram& program, const Eigen::VectorXd& x) {
  if (x.size() != static_cast<Eigen::Index>(program.num_vars) ||
      program.constraint_matrix.cols() != x.size()) {
    throw ConicError("residuals: x has length " + std::to_string(x.size()) + ", expected " +
                     std::to_string(program.num_vars));
  }
  const Eigen::VectorXd slack = program.offset - program.constraint_matrix * x;
  ResidualReport report;
  Eigen::Index row = 0;
  for (const Cone& cone : program.cones) {
    const auto d = static_cast<Eigen::Index>(cone.dim);
    const double v = block_violation(cone.kind, slack.segment(row, d));
    if (v > report.cone_violation) {
      report.cone_violation = v;
      report.worst_row = static_cast<std::size_t>(row);
    }
    row += d;
  }
  return report;
}

}  // namespace precoder::conic
