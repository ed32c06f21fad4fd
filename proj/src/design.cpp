#include "precoder/design.hpp"

#include <cmath>
#include <string>

namespace precoder::design {
namespace {

using Eigen::Index;

// Accumulates cone blocks row by row. Each slack entry is written as an
// affine expression  constant + sum_j coeff_j x_j ; the program stores it as
// offset - M x, so coefficients are negated on the way in.
class ConeWriter {
 public:
  explicit ConeWriter(std::size_t num_vars) : num_vars_(num_vars) {}

  std::size_t open_second_order(Index dim) {
    cones_.push_back(conic::Cone::second_order(static_cast<std::size_t>(dim)));
    row_base_ = rows_;
    rows_ += dim;
    offset_.resize(static_cast<std::size_t>(rows_), 0.0);
    return cones_.size() - 1;
  }

  void add(Index entry, Index var, double coeff) {
    if (coeff != 0.0) triplets_.push_back({row_base_ + entry, var, -coeff});
  }
  void constant(Index entry, double value) {
    offset_[static_cast<std::size_t>(row_base_ + entry)] += value;
  }

  conic::ConeProgram finish(Eigen::VectorXd objective) && {
    conic::ConeProgram p;
    p.num_vars = num_vars_;
    p.objective = std::move(objective);
    p.constraint_matrix = Eigen::MatrixXd::Zero(rows_, static_cast<Index>(num_vars_));
    for (const Entry& e : triplets_) p.constraint_matrix(e.row, e.col) += e.value;
    p.offset = Eigen::Map<const Eigen::VectorXd>(offset_.data(), rows_);
    p.cones = std::move(cones_);
    return p;
  }

 private:
  std::size_t num_vars_;
  Index rows_ = 0;
  Index row_base_ = 0;
  std::vector<double> offset_;
  struct Entry {
    Index row, col;
    double value;
  };
  std::vector<Entry> triplets_;
  std::vector<conic::Cone> cones_;
};

void check_dimensions(const model::ChannelSet& estimates, const model::QosSpec& qos) {
  try {
    qos.validate(static_cast<std::size_t>(estimates.num_users()));
  } catch (const model::ModelError& e) {
    throw DesignError(e.what());
  }
}

// ||vec(B)|| <= tau
void write_epigraph(ConeWriter& w, ProgramLayout& layout) {
  const Index n_t = layout.num_antennas();
  const Index n_u = layout.num_users();
  const std::size_t cone = w.open_second_order(1 + 2 * n_t * n_u);
  w.add(0, layout.tau(), 1.0);
  for (Index v = 0; v < 2 * n_t * n_u; ++v) w.add(1 + v, v, 1.0);
  layout.constraints.push_back({ConstraintTag::ObjectiveEpigraph, -1, -1, cone});
}

// a_k h_bar_k . b_bar_k - radius y_k >= ||[h_bar_k B_bar, sigma_k]||
void write_sinr(ConeWriter& w, ProgramLayout& layout, const Eigen::RowVectorXd& h_bar, Index user,
                double a, double sigma, double radius) {
  const Index n_u = layout.num_users();
  const Index cols = 2 * n_u;
  const std::size_t cone = w.open_second_order(2 + cols);
  for (Index r = 0; r < h_bar.size(); ++r) {
    const auto [var, sign] = layout.b_bar_entry(r, user);
    w.add(0, var, a * sign * h_bar(r));
  }
  if (layout.robust()) w.add(0, layout.y(user), -radius);
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < h_bar.size(); ++r) {
      const auto [var, sign] = layout.b_bar_entry(r, c);
      w.add(1 + c, var, sign * h_bar(r));
    }
  }
  w.constant(1 + cols, sigma);
  layout.constraints.push_back({ConstraintTag::Sinr, user, -1, cone});
}

// t_{k,i} + sign a_k B_bar(i,k) >= ||[b_bar^i, noise]||
void write_perturbation(ConeWriter& w, ProgramLayout& layout, Index user, Index direction,
                        double a, double noise, bool plus) {
  const Index cols = 2 * layout.num_users();
  const std::size_t cone = w.open_second_order(2 + cols);
  const double side = plus ? 1.0 : -1.0;
  w.add(0, layout.t(user, direction), 1.0);
  {
    const auto [var, sign] = layout.b_bar_entry(direction, user);
    w.add(0, var, side * a * sign);
  }
  for (Index c = 0; c < cols; ++c) {
    const auto [var, sign] = layout.b_bar_entry(direction, c);
    w.add(1 + c, var, sign);
  }
  w.constant(1 + cols, noise);
  layout.constraints.push_back(
      {plus ? ConstraintTag::PerturbationPlus : ConstraintTag::PerturbationMinus, user, direction,
       cone});
}

// y_k >= ||t_k||
void write_aggregation(ConeWriter& w, ProgramLayout& layout, Index user) {
  const Index dirs = 2 * layout.num_antennas();
  const std::size_t cone = w.open_second_order(1 + dirs);
  w.add(0, layout.y(user), 1.0);
  for (Index i = 0; i < dirs; ++i) w.add(1 + i, layout.t(user, i), 1.0);
  layout.constraints.push_back({ConstraintTag::Aggregation, user, -1, cone});
}

Eigen::VectorXd tau_objective(const ProgramLayout& layout) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Index>(layout.num_vars()));
  c(layout.tau()) = 1.0;
  return c;
}

double sinr_weight(double gamma) { return std::sqrt(1.0 + 1.0 / gamma); }

}  // namespace

const char* to_string(ConstraintTag tag) {
  switch (tag) {
    case ConstraintTag::ObjectiveEpigraph: return "objective-epigraph";
    case ConstraintTag::Sinr: return "sinr";
    case ConstraintTag::PerturbationPlus: return "perturbation-plus";
    case ConstraintTag::PerturbationMinus: return "perturbation-minus";
    case ConstraintTag::Aggregation: return "aggregation";
  }
  return "unknown";
}

UncertaintySpec UncertaintySpec::uniform(std::size_t n_u, double delta, double kappa) {
  return {std::vector<double>(n_u, delta), kappa};
}

void UncertaintySpec::validate(std::size_t n_u) const {
  if (delta.size() != n_u) {
    throw DesignError("UncertaintySpec has " + std::to_string(delta.size()) + " radii for " +
                      std::to_string(n_u) + " users");
  }
  for (std::size_t k = 0; k < n_u; ++k) {
    if (!(delta[k] >= 0.0) || !std::isfinite(delta[k])) {
      throw DesignError("uncertainty radius of user " + std::to_string(k) + " must be >= 0");
    }
  }
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw DesignError("kappa must lie in [0, 1]");
}

ProgramLayout::ProgramLayout(Index n_t, Index n_u, bool robust)
    : n_t_(n_t), n_u_(n_u), robust_(robust) {}

std::size_t ProgramLayout::num_vars() const {
  const Index base = 2 * n_t_ * n_u_ + 1;
  return static_cast<std::size_t>(robust_ ? base + n_u_ + 2 * n_t_ * n_u_ : base);
}

Index ProgramLayout::y(Index user) const {
  if (!robust_) throw DesignError("nominal layout has no y variables");
  return tau() + 1 + user;
}

Index ProgramLayout::t(Index user, Index direction) const {
  if (!robust_) throw DesignError("nominal layout has no t variables");
  return tau() + 1 + n_u_ + user * 2 * n_t_ + direction;
}

std::pair<Index, double> ProgramLayout::b_bar_entry(Index row, Index col) const {
  const bool top = row < n_t_;
  const bool left = col < n_u_;
  const Index i = top ? row : row - n_t_;
  const Index k = left ? col : col - n_u_;
  if (top && left) return {re(i, k), 1.0};
  if (top) return {im(i, k), 1.0};
  if (left) return {im(i, k), -1.0};
  return {re(i, k), 1.0};
}

BuiltProgram build_nominal(const model::ChannelSet& estimates, const model::QosSpec& qos) {
  check_dimensions(estimates, qos);
  const Index n_t = estimates.num_antennas();
  const Index n_u = estimates.num_users();
  ProgramLayout layout(n_t, n_u, false);
  ConeWriter w(layout.num_vars());
  write_epigraph(w, layout);
  for (Index k = 0; k < n_u; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    write_sinr(w, layout, model::embed_row(estimates.row(k)), k, sinr_weight(qos.gamma[uk]),
               qos.sigma[uk], 0.0);
  }
  auto program = std::move(w).finish(tau_objective(layout));
  return {std::move(program), std::move(layout)};
}

BuiltProgram build_robust(const model::ChannelSet& estimates, const model::QosSpec& qos,
                          const UncertaintySpec& uncertainty, const RobustOptions& options) {
  check_dimensions(estimates, qos);
  const Index n_t = estimates.num_antennas();
  const Index n_u = estimates.num_users();
  uncertainty.validate(static_cast<std::size_t>(n_u));

  ProgramLayout layout(n_t, n_u, true);
  ConeWriter w(layout.num_vars());
  write_epigraph(w, layout);
  for (Index k = 0; k < n_u; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    write_sinr(w, layout, model::embed_row(estimates.row(k)), k, sinr_weight(qos.gamma[uk]),
               qos.sigma[uk], uncertainty.effective_radius(uk));
  }
  for (Index k = 0; k < n_u; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const double a = sinr_weight(qos.gamma[uk]);
    const double noise =
        options.perturbation_sigma == PerturbationSigma::Paper ? qos.sigma[uk] : 0.0;
    for (Index i = 0; i < 2 * n_t; ++i) {
      write_perturbation(w, layout, k, i, a, noise, true);
      write_perturbation(w, layout, k, i, a, noise, false);
    }
  }
  for (Index k = 0; k < n_u; ++k) write_aggregation(w, layout, k);

  auto program = std::move(w).finish(tau_objective(layout));
  return {std::move(program), std::move(layout)};
}

model::Precoder extract_precoder(const conic::Solution& solution, const ProgramLayout& layout) {
  if (solution.status != conic::SolveStatus::Optimal) {
    throw DesignError(std::string("cannot extract a precoder from a ") +
                      conic::to_string(solution.status) + " solution");
  }
  if (solution.x.size() != static_cast<Index>(layout.num_vars())) {
    throw DesignError("solution length does not match the program layout");
  }
  Eigen::MatrixXcd b(layout.num_antennas(), layout.num_users());
  for (Index k = 0; k < layout.num_users(); ++k) {
    for (Index i = 0; i < layout.num_antennas(); ++i) {
      b(i, k) = {solution.x(layout.re(i, k)), solution.x(layout.im(i, k))};
    }
  }
  return model::Precoder(std::move(b));
}

namespace {

DesignResult run_design(const BuiltProgram& built, const conic::SolverSettings& settings) {
  const conic::Solution solution = conic::solve(built.program, settings);
  DesignResult result;
  result.status = solution.status;
  result.iterations = solution.iterations;
  if (solution.status == conic::SolveStatus::Optimal) {
    result.precoder = extract_precoder(solution, built.layout);
    result.power = model::transmit_power(*result.precoder);
  }
  return result;
}

}  // namespace

DesignResult design_nominal(const model::ChannelSet& estimates, const model::QosSpec& qos,
                            const conic::SolverSettings& settings) {
  return run_design(build_nominal(estimates, qos), settings);
}

DesignResult design_robust(const model::ChannelSet& estimates, const model::QosSpec& qos,
                           const UncertaintySpec& uncertainty, const RobustOptions& options,
                           const conic::SolverSettings& settings) {
  return run_design(build_robust(estimates, qos, uncertainty, options), settings);
}

}  // namespace precoder::design
