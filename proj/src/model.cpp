#include "precoder/model.hpp"

#include <cmath>
#include <string>

namespace precoder::model {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng make_rng(std::uint64_t seed, std::uint64_t stream_a, std::uint64_t stream_b) {
  const std::uint64_t mixed = splitmix64(splitmix64(splitmix64(seed) ^ stream_a) ^ stream_b);
  std::seed_seq seq{static_cast<std::uint32_t>(mixed), static_cast<std::uint32_t>(mixed >> 32),
                    static_cast<std::uint32_t>(stream_a), static_cast<std::uint32_t>(stream_b)};
  return Rng(seq);
}

ChannelSet::ChannelSet(Eigen::MatrixXcd rows) : rows_(std::move(rows)) {
  if (rows_.rows() < 1 || rows_.cols() < 1) {
    throw ModelError("ChannelSet needs at least one user and one antenna");
  }
  if (!rows_.allFinite()) throw ModelError("ChannelSet contains a non-finite entry");
}

Precoder::Precoder(Eigen::MatrixXcd b) : b_(std::move(b)) {
  if (!b_.allFinite()) throw ModelError("Precoder contains a non-finite entry");
}

Precoder Precoder::zero(Eigen::Index n_t, Eigen::Index n_u) {
  return Precoder(Eigen::MatrixXcd::Zero(n_t, n_u));
}

QosSpec QosSpec::uniform(std::size_t n_u, double gamma, double sigma) {
  return {std::vector<double>(n_u, gamma), std::vector<double>(n_u, sigma)};
}

QosSpec QosSpec::uniform_db(std::size_t n_u, double gamma_db, double sigma) {
  return uniform(n_u, from_db(gamma_db), sigma);
}

void QosSpec::validate(std::size_t n_u) const {
  if (gamma.size() != n_u || sigma.size() != n_u) {
    throw ModelError("QosSpec has " + std::to_string(gamma.size()) + " targets and " +
                     std::to_string(sigma.size()) + " noise levels for " + std::to_string(n_u) +
                     " users");
  }
  for (std::size_t k = 0; k < n_u; ++k) {
    if (!(gamma[k] > 0.0) || !std::isfinite(gamma[k])) {
      throw ModelError("SINR target of user " + std::to_string(k) + " must be positive");
    }
    if (!(sigma[k] > 0.0) || !std::isfinite(sigma[k])) {
      throw ModelError("noise level of user " + std::to_string(k) + " must be positive");
    }
  }
}

const char* to_string(ErrorMode mode) {
  return mode == ErrorMode::Boundary ? "boundary" : "ball";
}

ChannelSet generate_channels(Eigen::Index n_u, Eigen::Index n_t, Rng& rng) {
  if (n_u < 1 || n_t < 1) throw ModelError("generate_channels: n_u and n_t must be >= 1");
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Eigen::MatrixXcd h(n_u, n_t);
  for (Eigen::Index k = 0; k < n_u; ++k) {
    for (Eigen::Index i = 0; i < n_t; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      h(k, i) = {re, im};
    }
  }
  return ChannelSet(std::move(h));
}

ErrorVector sample_error(Eigen::Index n_t, double delta, ErrorMode mode, Rng& rng) {
  if (!(delta >= 0.0)) throw ModelError("sample_error: delta must be nonnegative");
  ErrorVector e = ErrorVector::Zero(n_t);
  if (delta == 0.0) return e;
  std::normal_distribution<double> normal(0.0, 1.0);
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < n_t; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      e(i) = {re, im};
    }
    norm = e.norm();
  } while (norm == 0.0);
  double radius = delta;
  if (mode == ErrorMode::Ball) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    radius *= std::pow(unif(rng), 1.0 / (2.0 * static_cast<double>(n_t)));
  }
  return e * (radius / norm);
}

std::vector<double> achieved_sinr(const ChannelSet& channels, const Precoder& precoder,
                                  std::span<const double> sigma) {
  const Eigen::Index n_u = channels.num_users();
  if (channels.num_antennas() != precoder.num_antennas() || precoder.num_users() != n_u ||
      static_cast<Eigen::Index>(sigma.size()) != n_u) {
    throw ModelError("achieved_sinr: dimension mismatch");
  }
  // row k of hb holds h_k b_j for every j
  const Eigen::MatrixXcd hb = channels.matrix() * precoder.matrix();
  std::vector<double> sinr(static_cast<std::size_t>(n_u));
  for (Eigen::Index k = 0; k < n_u; ++k) {
    const double signal = std::norm(hb(k, k));
    const double interference = hb.row(k).squaredNorm() - signal;
    const double s2 = sigma[static_cast<std::size_t>(k)] * sigma[static_cast<std::size_t>(k)];
    sinr[static_cast<std::size_t>(k)] = signal / (std::max(interference, 0.0) + s2);
  }
  return sinr;
}

double transmit_power(const Precoder& precoder) { return precoder.matrix().squaredNorm(); }

Eigen::RowVectorXd embed_row(const Eigen::RowVectorXcd& h) {
  Eigen::RowVectorXd out(2 * h.size());
  out << h.real(), h.imag();
  return out;
}

Eigen::MatrixXd embed_precoder(const Eigen::MatrixXcd& b) {
  const Eigen::Index n_t = b.rows();
  const Eigen::Index n_u = b.cols();
  Eigen::MatrixXd out(2 * n_t, 2 * n_u);
  out.topLeftCorner(n_t, n_u) = b.real();
  out.topRightCorner(n_t, n_u) = b.imag();
  out.bottomLeftCorner(n_t, n_u) = -b.imag();
  out.bottomRightCorner(n_t, n_u) = b.real();
  return out;
}

RealEmbedding real_embedding(const ChannelSet& channels, const Precoder& precoder) {
  RealEmbedding emb;
  emb.h_bar.resize(channels.num_users(), 2 * channels.num_antennas());
  for (Eigen::Index k = 0; k < channels.num_users(); ++k) {
    emb.h_bar.row(k) = embed_row(channels.row(k));
  }
  emb.b_bar = embed_precoder(precoder.matrix());
  return emb;
}

ChannelSet perturb(const ChannelSet& estimates, const std::vector<ErrorVector>& errors) {
  if (static_cast<Eigen::Index>(errors.size()) != estimates.num_users()) {
    throw ModelError("perturb: one error vector per user required");
  }
  Eigen::MatrixXcd h = estimates.matrix();
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    if (errors[static_cast<std::size_t>(k)].size() != h.cols()) {
      throw ModelError("perturb: error vector length differs from N_t");
    }
    h.row(k) += errors[static_cast<std::size_t>(k)];
  }
  return ChannelSet(std::move(h));
}

double to_db(double linear) { return 10.0 * std::log10(linear); }
double from_db(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace precoder::model
