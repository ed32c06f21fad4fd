// Homogeneous self-dual interior-point method for dense SOCPs.
//
// The program  min c'x  s.t.  h - Gx in K,  b - Ax = 0  is embedded as
//
//     0 = A'y + G'z + c tau
//     0 = -Ax + b tau
//     s = -Gx + h tau
//     kappa = -c'x - b'y - h'z,        s, z in K,  tau, kappa >= 0
//
// and followed along the central path with Nesterov-Todd scaling. Each
// Newton system is reduced to the normal equations G'W^-2 G, factored once
// per iteration and reused for the predictor, corrector and the tau column.

#include "precoder/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace precoder::conic {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStepFraction = 0.99;
constexpr double kMinStep = 1e-10;
constexpr int kRefinementSteps = 3;

struct Block {
  ConeKind kind;  // Nonnegative or SecondOrder only
  Index start;
  Index dim;
};

// Nesterov-Todd scaling of one block. For nonnegative blocks `w` holds the
// diagonal sqrt(s/z); for second-order blocks it is the normalized scaling
// point with det(w) = 1.
struct BlockScaling {
  VectorXd w;
  double beta = 1.0;
};

double soc_det(const Eigen::Ref<const VectorXd>& v) {
  const double tail = v.tail(v.size() - 1).norm();
  return (v(0) - tail) * (v(0) + tail);
}

// Largest alpha such that v + alpha dv stays in the cone; v is interior.
double max_step_block(const Block& blk, const Eigen::Ref<const VectorXd>& v,
                      const Eigen::Ref<const VectorXd>& dv) {
  double alpha = kInf;
  if (blk.kind == ConeKind::Nonnegative) {
    for (Index i = 0; i < blk.dim; ++i) {
      if (dv(i) < 0.0) alpha = std::min(alpha, -v(i) / dv(i));
    }
    return alpha;
  }
  const Index tail = blk.dim - 1;
  const double a = dv(0) * dv(0) - dv.tail(tail).squaredNorm();
  const double b = v(0) * dv(0) - v.tail(tail).dot(dv.tail(tail));
  const double c = std::max(soc_det(v), 0.0);
  // f(alpha) = a alpha^2 + 2 b alpha + c, f(0) = c > 0
  if (std::abs(a) <= 1e-300) {
    if (b < 0.0) alpha = -c / (2.0 * b);
  } else {
    const double disc = b * b - a * c;
    if (disc >= 0.0) {
      const double root = std::sqrt(disc);
      const double q = -(b + std::copysign(root, b));
      for (double r : {q / a, q != 0.0 ? c / q : kInf}) {
        if (r > 0.0) alpha = std::min(alpha, r);
      }
    }
  }
  // the head must stay nonnegative as well
  if (dv(0) < 0.0) alpha = std::min(alpha, -v(0) / dv(0));
  return alpha;
}

class InteriorPoint {
 public:
  InteriorPoint(const ConeProgram& program, const SolverSettings& settings)
      : settings_(settings), n_(static_cast<Index>(program.num_vars)) {
    split(program);
  }

  Solution run();

 private:
  void split(const ConeProgram& program);

  // cone algebra on the inequality part
  VectorXd identity() const;
  double degree() const { return degree_; }
  void shift_into_cone(VectorXd& v) const;
  double max_step(const VectorXd& v, const VectorXd& dv) const;
  VectorXd jordan_product(const VectorXd& u, const VectorXd& v) const;
  VectorXd jordan_divide(const VectorXd& lambda, const VectorXd& v) const;
  double block_residual(const VectorXd& r) const;

  // scaling
  bool update_scaling(const VectorXd& s, const VectorXd& z);
  VectorXd apply_w(const VectorXd& v) const;
  VectorXd apply_winv(const VectorXd& v) const;
  void apply_winv_rows_block(Eigen::Block<MatrixXd> m) const;

  // linear algebra
  bool factor();
  MatrixXd normal_solve(const MatrixXd& rhs) const;
  void solve_reduced(const VectorXd& bx, const VectorXd& by, const VectorXd& bz, VectorXd& dx,
                     VectorXd& dy, VectorXd& dz) const;
  void solve_kkt(const VectorXd& bx, const VectorXd& by, const VectorXd& bz, VectorXd& dx,
                 VectorXd& dy, VectorXd& dz) const;

  SolverSettings settings_;
  Index n_;
  MatrixXd A_, G_;
  VectorXd b_, h_, c_;
  std::vector<Block> blocks_;
  double degree_ = 0.0;

  std::vector<BlockScaling> scaling_;
  VectorXd lambda_;
  MatrixXd factor_;  // upper triangular R with R'R = G'W^-2 G + A'A
  Eigen::LLT<MatrixXd> schur_;
  MatrixXd schur_rhs_;  // M^-1 A'
};

void InteriorPoint::split(const ConeProgram& program) {
  Index eq_rows = 0, ineq_rows = 0;
  for (const Cone& cone : program.cones) {
    (cone.kind == ConeKind::Zero ? eq_rows : ineq_rows) += static_cast<Index>(cone.dim);
  }
  A_.resize(eq_rows, n_);
  b_.resize(eq_rows);
  G_.resize(ineq_rows, n_);
  h_.resize(ineq_rows);
  c_ = program.objective;

  Index src = 0, eq = 0, ineq = 0;
  for (const Cone& cone : program.cones) {
    const auto d = static_cast<Index>(cone.dim);
    if (d == 0) continue;
    if (cone.kind == ConeKind::Zero) {
      A_.middleRows(eq, d) = program.constraint_matrix.middleRows(src, d);
      b_.segment(eq, d) = program.offset.segment(src, d);
      eq += d;
    } else {
      G_.middleRows(ineq, d) = program.constraint_matrix.middleRows(src, d);
      h_.segment(ineq, d) = program.offset.segment(src, d);
      const ConeKind kind = (cone.kind == ConeKind::SecondOrder && d == 1)
                                ? ConeKind::Nonnegative
                                : cone.kind;
      blocks_.push_back({kind, ineq, d});
      degree_ += kind == ConeKind::Nonnegative ? static_cast<double>(d) : 1.0;
      ineq += d;
    }
    src += d;
  }
  scaling_.resize(blocks_.size());
}

VectorXd InteriorPoint::identity() const {
  VectorXd e = VectorXd::Zero(h_.size());
  for (const Block& blk : blocks_) {
    if (blk.kind == ConeKind::Nonnegative) {
      e.segment(blk.start, blk.dim).setOnes();
    } else {
      e(blk.start) = 1.0;
    }
  }
  return e;
}

void InteriorPoint::shift_into_cone(VectorXd& v) const {
  // most negative "eigenvalue" over all blocks
  double worst = -kInf;
  for (const Block& blk : blocks_) {
    auto seg = v.segment(blk.start, blk.dim);
    if (blk.kind == ConeKind::Nonnegative) {
      worst = std::max(worst, -seg.minCoeff());
    } else {
      worst = std::max(worst, seg.tail(blk.dim - 1).norm() - seg(0));
    }
  }
  if (blocks_.empty() || worst < -1e-8 * std::max(1.0, v.norm())) return;
  v += (1.0 + std::max(worst, 0.0)) * identity();
}

double InteriorPoint::max_step(const VectorXd& v, const VectorXd& dv) const {
  double alpha = kInf;
  for (const Block& blk : blocks_) {
    alpha = std::min(alpha, max_step_block(blk, v.segment(blk.start, blk.dim),
                                           dv.segment(blk.start, blk.dim)));
  }
  return alpha;
}

VectorXd InteriorPoint::jordan_product(const VectorXd& u, const VectorXd& v) const {
  VectorXd out(u.size());
  for (const Block& blk : blocks_) {
    auto us = u.segment(blk.start, blk.dim);
    auto vs = v.segment(blk.start, blk.dim);
    auto os = out.segment(blk.start, blk.dim);
    if (blk.kind == ConeKind::Nonnegative) {
      os = us.cwiseProduct(vs);
    } else {
      const Index t = blk.dim - 1;
      os(0) = us.dot(vs);
      os.tail(t) = us(0) * vs.tail(t) + vs(0) * us.tail(t);
    }
  }
  return out;
}

// Solves lambda o u = v for u.
VectorXd InteriorPoint::jordan_divide(const VectorXd& lambda, const VectorXd& v) const {
  VectorXd out(v.size());
  for (const Block& blk : blocks_) {
    auto ls = lambda.segment(blk.start, blk.dim);
    auto vs = v.segment(blk.start, blk.dim);
    auto os = out.segment(blk.start, blk.dim);
    if (blk.kind == ConeKind::Nonnegative) {
      os = vs.cwiseQuotient(ls);
    } else {
      const Index t = blk.dim - 1;
      const double det = soc_det(ls);
      const double u0 = (ls(0) * vs(0) - ls.tail(t).dot(vs.tail(t))) / det;
      os(0) = u0;
      os.tail(t) = (vs.tail(t) - u0 * ls.tail(t)) / ls(0);
    }
  }
  return out;
}

// Upper bound on the cone violation caused by perturbing a cone member by r.
double InteriorPoint::block_residual(const VectorXd& r) const {
  double worst = 0.0;
  for (const Block& blk : blocks_) {
    auto rs = r.segment(blk.start, blk.dim);
    if (blk.kind == ConeKind::Nonnegative) {
      worst = std::max(worst, rs.cwiseAbs().maxCoeff());
    } else {
      worst = std::max(worst, std::abs(rs(0)) + rs.tail(blk.dim - 1).norm());
    }
  }
  return worst;
}

bool InteriorPoint::update_scaling(const VectorXd& s, const VectorXd& z) {
  lambda_.resize(s.size());
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const Block& blk = blocks_[k];
    auto ss = s.segment(blk.start, blk.dim);
    auto zs = z.segment(blk.start, blk.dim);
    BlockScaling& sc = scaling_[k];
    if (blk.kind == ConeKind::Nonnegative) {
      if ((ss.array() <= 0.0).any() || (zs.array() <= 0.0).any()) return false;
      sc.w = (ss.array() / zs.array()).sqrt();
      lambda_.segment(blk.start, blk.dim) = (ss.array() * zs.array()).sqrt();
      continue;
    }
    const Index t = blk.dim - 1;
    const double sdet = soc_det(ss);
    const double zdet = soc_det(zs);
    if (!(sdet > 0.0) || !(zdet > 0.0) || ss(0) <= 0.0 || zs(0) <= 0.0) return false;
    const double snrm = std::sqrt(sdet);
    const double znrm = std::sqrt(zdet);
    const VectorXd sbar = ss / snrm;
    const VectorXd zbar = zs / znrm;
    const double gamma = std::sqrt(0.5 * (1.0 + sbar.dot(zbar)));
    sc.w.resize(blk.dim);
    sc.w(0) = (sbar(0) + zbar(0)) / (2.0 * gamma);
    sc.w.tail(t) = (sbar.tail(t) - zbar.tail(t)) / (2.0 * gamma);
    sc.beta = std::sqrt(snrm / znrm);

    auto ls = lambda_.segment(blk.start, blk.dim);
    const double scale = std::sqrt(snrm * znrm);
    ls(0) = gamma * scale;
    ls.tail(t) = scale * ((gamma + zbar(0)) * sbar.tail(t) + (gamma + sbar(0)) * zbar.tail(t)) /
                 (sbar(0) + zbar(0) + 2.0 * gamma);
  }
  return true;
}

// Second-order blocks: W = beta [w0, w1'; w1, I + w1 w1' / (1 + w0)] and
// W^-1 = J W J / beta^2 since det(w) = 1.
VectorXd InteriorPoint::apply_w(const VectorXd& v) const {
  VectorXd out(v.size());
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const Block& blk = blocks_[k];
    const BlockScaling& sc = scaling_[k];
    auto vs = v.segment(blk.start, blk.dim);
    auto os = out.segment(blk.start, blk.dim);
    if (blk.kind == ConeKind::Nonnegative) {
      os = sc.w.cwiseProduct(vs);
    } else {
      const Index t = blk.dim - 1;
      const auto w1 = sc.w.tail(t);
      const double w1v = w1.dot(vs.tail(t));
      os(0) = sc.w(0) * vs(0) + w1v;
      os.tail(t) = vs.tail(t) + (vs(0) + w1v / (1.0 + sc.w(0))) * w1;
      os *= sc.beta;
    }
  }
  return out;
}

VectorXd InteriorPoint::apply_winv(const VectorXd& v) const {
  VectorXd out(v.size());
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const Block& blk = blocks_[k];
    const BlockScaling& sc = scaling_[k];
    auto vs = v.segment(blk.start, blk.dim);
    auto os = out.segment(blk.start, blk.dim);
    if (blk.kind == ConeKind::Nonnegative) {
      os = vs.cwiseQuotient(sc.w);
    } else {
      const Index t = blk.dim - 1;
      const auto w1 = sc.w.tail(t);
      const double w1v = w1.dot(vs.tail(t));
      os(0) = sc.w(0) * vs(0) - w1v;
      os.tail(t) = vs.tail(t) + (-vs(0) + w1v / (1.0 + sc.w(0))) * w1;
      os /= sc.beta;
    }
  }
  return out;
}

void InteriorPoint::apply_winv_rows_block(Eigen::Block<MatrixXd> m) const {
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const Block& blk = blocks_[k];
    const BlockScaling& sc = scaling_[k];
    auto rows = m.middleRows(blk.start, blk.dim);
    if (blk.kind == ConeKind::Nonnegative) {
      rows = sc.w.cwiseInverse().asDiagonal() * rows;
    } else {
      const Index t = blk.dim - 1;
      const auto w1 = sc.w.tail(t);
      const Eigen::RowVectorXd w1v = w1.transpose() * rows.bottomRows(t);
      const Eigen::RowVectorXd head = rows.row(0);
      rows.row(0) = sc.w(0) * head - w1v;
      rows.bottomRows(t) += w1 * (-head + w1v / (1.0 + sc.w(0)));
      rows /= sc.beta;
    }
  }
}

// The normal matrix G'W^-2 G + A'A is never formed: its Cholesky factor is
// taken from a QR factorization of [W^-1 G; A], which keeps the conditioning
// at cond(W^-1 G) instead of its square.
bool InteriorPoint::factor() {
  const Index m = G_.rows();
  const Index p = A_.rows();
  MatrixXd stacked(m + p + n_, n_);
  stacked.topRows(m) = G_;
  apply_winv_rows_block(stacked.topRows(m));
  stacked.middleRows(m, p) = A_;
  stacked.bottomRows(n_).setZero();

  const double scale = std::max(1.0, stacked.topRows(m + p).cwiseAbs().maxCoeff());
  double reg = 0.0;
  for (int attempt = 0; attempt < 6; ++attempt) {
    stacked.bottomRows(n_).diagonal().setConstant(std::sqrt(reg));
    Eigen::HouseholderQR<MatrixXd> qr(stacked);
    factor_ = qr.matrixQR().topRows(n_).triangularView<Eigen::Upper>();
    const Eigen::ArrayXd diag = factor_.diagonal().cwiseAbs().array();
    if (diag.allFinite() && diag.minCoeff() > 1e-13 * std::max(1.0, diag.maxCoeff())) break;
    // rank deficient: static regularization, removed again by refinement
    reg = reg == 0.0 ? 1e-20 * scale * scale : reg * 1e4;
  }
  if (!factor_.allFinite()) return false;

  if (p > 0) {
    schur_rhs_ = normal_solve(A_.transpose());
    const MatrixXd schur = A_ * schur_rhs_;
    schur_.compute(schur);
    if (schur_.info() != Eigen::Success) return false;
  }
  return true;
}

MatrixXd InteriorPoint::normal_solve(const MatrixXd& rhs) const {
  const auto r = factor_.triangularView<Eigen::Upper>();
  return r.solve(r.transpose().solve(rhs));
}

// One pass of the reduced solve (no refinement).
void InteriorPoint::solve_reduced(const VectorXd& bx, const VectorXd& by, const VectorXd& bz,
                                  VectorXd& dx, VectorXd& dy, VectorXd& dz) const {
  // dz = W^-2 (G dx - bz)
  const VectorXd wz = apply_winv(apply_winv(bz));
  VectorXd rhs = bx + G_.transpose() * wz;
  if (A_.rows() > 0) {
    rhs += A_.transpose() * by;
    const VectorXd base = normal_solve(rhs);
    dy = schur_.solve(A_ * base - by);
    dx = base - schur_rhs_ * dy;
  } else {
    dy.resize(0);
    dx = normal_solve(rhs);
  }
  dz = apply_winv(apply_winv(G_ * dx)) - wz;
}

//  [ 0  A'  G'  ] [dx]   [bx]
//  [ A  0   0   ] [dy] = [by]
//  [ G  0  -W^2 ] [dz]   [bz]
void InteriorPoint::solve_kkt(const VectorXd& bx, const VectorXd& by, const VectorXd& bz,
                              VectorXd& dx, VectorXd& dy, VectorXd& dz) const {
  solve_reduced(bx, by, bz, dx, dy, dz);
  const double scale = 1.0 + std::max({bx.lpNorm<Eigen::Infinity>(),
                                       by.size() ? by.lpNorm<Eigen::Infinity>() : 0.0,
                                       bz.lpNorm<Eigen::Infinity>()});
  for (int step = 0; step < kRefinementSteps; ++step) {
    VectorXd ex = bx - G_.transpose() * dz;
    if (A_.rows() > 0) ex -= A_.transpose() * dy;
    const VectorXd ey = A_.rows() > 0 ? VectorXd(by - A_ * dx) : VectorXd(0);
    const VectorXd ez = bz - G_ * dx + apply_w(apply_w(dz));
    const double err = std::max({ex.lpNorm<Eigen::Infinity>(),
                                 ey.size() ? ey.lpNorm<Eigen::Infinity>() : 0.0,
                                 ez.lpNorm<Eigen::Infinity>()});
    if (!(err > 1e-14 * scale)) break;
    VectorXd cx, cy, cz;
    solve_reduced(ex, ey, ez, cx, cy, cz);
    dx += cx;
    if (cy.size()) dy += cy;
    dz += cz;
  }
}

Solution InteriorPoint::run() {
  Solution result;
  const Index m = h_.size();
  const Index p = b_.size();

  VectorXd x(n_), y(p), z(m), s(m);
  double tau = 1.0, kappa = 1.0;

  // Starting point from the identity scaling: least-squares primal and dual
  // points pushed into the cone interior.
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const Block& blk = blocks_[k];
    scaling_[k].beta = 1.0;
    if (blk.kind == ConeKind::Nonnegative) {
      scaling_[k].w = VectorXd::Ones(blk.dim);
    } else {
      scaling_[k].w = VectorXd::Unit(blk.dim, 0);
    }
  }
  if (!factor()) {
    result.status = SolveStatus::NumericalFailure;
    return result;
  }
  {
    VectorXd dx, dy, dz;
    solve_kkt(VectorXd::Zero(n_), b_, h_, dx, dy, dz);
    x = dx;
    s = -dz;
    solve_kkt(-c_, VectorXd::Zero(p), VectorXd::Zero(m), dx, dy, dz);
    y = dy;
    z = dz;
  }
  shift_into_cone(s);
  shift_into_cone(z);
  if (m == 0) {
    s.resize(0);
    z.resize(0);
  }

  const double c_norm = std::max(1.0, c_.lpNorm<Eigen::Infinity>());
  const VectorXd e = identity();

  for (int iter = 0; iter <= settings_.max_iter; ++iter) {
    result.iterations = iter;

    const VectorXd rx = (p ? VectorXd(A_.transpose() * y) : VectorXd::Zero(n_)) +
                        G_.transpose() * z + c_ * tau;
    const VectorXd ry = p ? VectorXd(A_ * x - b_ * tau) : VectorXd(0);
    const VectorXd rz = s + G_ * x - h_ * tau;
    const double cx = c_.dot(x);
    const double by_hz = (p ? b_.dot(y) : 0.0) + h_.dot(z);
    const double rt = kappa + cx + by_hz;
    const double sz = s.dot(z);
    const double mu = (sz + tau * kappa) / (degree() + 1.0);

    // convergence and certificates
    const double pres = std::max(p ? ry.lpNorm<Eigen::Infinity>() : 0.0, block_residual(rz)) / tau;
    const double dres = rx.lpNorm<Eigen::Infinity>() / tau / c_norm;
    const double pcost = cx / tau;
    const double dcost = -by_hz / tau;
    const double gap = std::max(sz / (tau * tau), std::abs(pcost - dcost)) /
                       std::max(1.0, std::abs(pcost));
    result.x = x / tau;
    result.objective_value = pcost;
    result.duality_gap = gap;
    result.primal_residual = pres;
    if (pres <= settings_.feas_tol && dres <= settings_.feas_tol && gap <= settings_.gap_tol) {
      result.status = SolveStatus::Optimal;
      return result;
    }
    if (by_hz < 0.0) {
      const VectorXd dual_ray = rx - c_ * tau;
      if (dual_ray.lpNorm<Eigen::Infinity>() / -by_hz <= settings_.feas_tol) {
        result.status = SolveStatus::PrimalInfeasible;
        return result;
      }
    }
    if (cx < 0.0) {
      const VectorXd ax = p ? VectorXd(A_ * x) : VectorXd(0);
      const double ray_res =
          std::max(p ? ax.lpNorm<Eigen::Infinity>() : 0.0, block_residual(G_ * x + s));
      if (ray_res / -cx <= settings_.feas_tol) {
        result.status = SolveStatus::DualInfeasible;
        return result;
      }
    }
    if (iter == settings_.max_iter) break;
    if (!std::isfinite(mu)) {
      result.status = SolveStatus::NumericalFailure;
      return result;
    }

    if (m > 0 && !update_scaling(s, z)) {
      result.status = SolveStatus::NumericalFailure;
      return result;
    }
    if (!factor()) {
      result.status = SolveStatus::NumericalFailure;
      return result;
    }

    // column of the Newton system multiplying d tau
    VectorXd x1, y1, z1;
    solve_kkt(-c_, b_, h_, x1, y1, z1);
    const double denom = c_.dot(x1) + (p ? b_.dot(y1) : 0.0) + h_.dot(z1) - kappa / tau;

    struct Direction {
      VectorXd dx, dy, dz, ds;
      double dtau = 0.0, dkappa = 0.0;
    };
    auto direction = [&](double eta, const VectorXd& dsc, double dkc) {
      Direction d;
      const VectorXd scaled_dsc = m ? apply_w(jordan_divide(lambda_, dsc)) : VectorXd(0);
      VectorXd x2, y2, z2;
      solve_kkt(-eta * rx, -eta * ry, -eta * rz - scaled_dsc, x2, y2, z2);
      const double num = -eta * rt - dkc / tau - c_.dot(x2) - (p ? b_.dot(y2) : 0.0) - h_.dot(z2);
      d.dtau = num / denom;
      d.dx = x2 + d.dtau * x1;
      d.dy = p ? VectorXd(y2 + d.dtau * y1) : VectorXd(0);
      d.dz = z2 + d.dtau * z1;
      // from the linearized primal equation rather than W(lambda \ dsc) - W^2 dz,
      // which cancels badly on blocks with extreme scaling
      d.ds = m ? VectorXd(-eta * rz - G_ * d.dx + h_ * d.dtau) : VectorXd(0);
      d.dkappa = (dkc - kappa * d.dtau) / tau;
      return d;
    };
    auto step_length = [&](const Direction& d) {
      double alpha = std::min(max_step(s, d.ds), max_step(z, d.dz));
      if (d.dtau < 0.0) alpha = std::min(alpha, -tau / d.dtau);
      if (d.dkappa < 0.0) alpha = std::min(alpha, -kappa / d.dkappa);
      return alpha;
    };

    // predictor
    const VectorXd lambda_sq = m ? jordan_product(lambda_, lambda_) : VectorXd(0);
    const Direction affine = direction(1.0, -lambda_sq, -tau * kappa);
    const double alpha_aff = std::min(1.0, step_length(affine));
    const double sigma = std::clamp(std::pow(1.0 - alpha_aff, 3), 0.0, 1.0);

    // corrector with second-order term
    VectorXd dsc(m);
    if (m) {
      const VectorXd ds_scaled = apply_winv(affine.ds);
      const VectorXd dz_scaled = apply_w(affine.dz);
      dsc = -lambda_sq + sigma * mu * e - jordan_product(ds_scaled, dz_scaled);
    }
    const double dkc = -tau * kappa + sigma * mu - affine.dtau * affine.dkappa;
    const Direction comb = direction(1.0 - sigma, dsc, dkc);
    const double alpha = std::min(1.0, kStepFraction * step_length(comb));
    if (!(alpha > kMinStep)) {
      result.status = SolveStatus::NumericalFailure;
      return result;
    }

    x += alpha * comb.dx;
    if (p) y += alpha * comb.dy;
    if (m) {
      z += alpha * comb.dz;
      s += alpha * comb.ds;
    }
    tau += alpha * comb.dtau;
    kappa += alpha * comb.dkappa;
  }
  result.status = SolveStatus::MaxIterations;
  return result;
}

}  // namespace

Solution solve(const ConeProgram& program, const SolverSettings& settings) {
  if (auto err = validate(program)) throw ConicError("invalid cone program: " + *err);
  InteriorPoint ipm(program, settings);
  return ipm.run();
}

}  // namespace precoder::conic
