#pragma once

// Multiuser MISO downlink: channels, precoders, SINR and power evaluation,
// and the complex-to-real embedding used by the cone program builders.

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace precoder::model {

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Rng = std::mt19937_64;

/// Independent, reproducible generator for a (seed, stream...) tuple.
Rng make_rng(std::uint64_t seed, std::uint64_t stream_a = 0, std::uint64_t stream_b = 0);

/// One complex row vector per user; row k holds the gains from the N_t
/// transmit antennas to user k.
class ChannelSet {
 public:
  ChannelSet() = default;
  explicit ChannelSet(Eigen::MatrixXcd rows);

  Eigen::Index num_users() const { return rows_.rows(); }
  Eigen::Index num_antennas() const { return rows_.cols(); }
  const Eigen::MatrixXcd& matrix() const { return rows_; }
  Eigen::RowVectorXcd row(Eigen::Index k) const { return rows_.row(k); }

 private:
  Eigen::MatrixXcd rows_;
};

using ErrorVector = Eigen::RowVectorXcd;

/// N_t x N_u complex beamforming matrix; column k serves user k.
class Precoder {
 public:
  Precoder() = default;
  explicit Precoder(Eigen::MatrixXcd b);

  static Precoder zero(Eigen::Index n_t, Eigen::Index n_u);

  Eigen::Index num_antennas() const { return b_.rows(); }
  Eigen::Index num_users() const { return b_.cols(); }
  const Eigen::MatrixXcd& matrix() const { return b_; }
  Eigen::VectorXcd column(Eigen::Index k) const { return b_.col(k); }

 private:
  Eigen::MatrixXcd b_;
};

/// Per-user SINR targets (linear scale) and noise standard deviations.
struct QosSpec {
  std::vector<double> gamma;
  std::vector<double> sigma;

  static QosSpec uniform(std::size_t n_u, double gamma, double sigma);
  static QosSpec uniform_db(std::size_t n_u, double gamma_db, double sigma);
  std::size_t num_users() const { return gamma.size(); }
  /// Throws ModelError unless gamma_k > 0 and sigma_k > 0 for n_u users.
  void validate(std::size_t n_u) const;
};

enum class ErrorMode { Boundary, Ball };

const char* to_string(ErrorMode mode);

/// Real-valued view of a channel/precoder pair:
///   h_bar_k = [Re h_k, Im h_k]
///   B_bar   = [Re B, Im B; -Im B, Re B]
///   b_bar_k = [Re b_k; -Im b_k]  (column k of B_bar)
struct RealEmbedding {
  Eigen::MatrixXd h_bar;  // N_u x 2 N_t
  Eigen::MatrixXd b_bar;  // 2 N_t x 2 N_u

  Eigen::VectorXd b_bar_column(Eigen::Index k) const { return b_bar.col(k); }
};

// Draws every entry as a proper complex Gaussian with unit total variance.
ChannelSet generate_channels(Eigen::Index n_u, Eigen::Index n_t, Rng& rng);

/// Error vector of length n_t with norm exactly delta (Boundary) or drawn
/// uniformly from the ball of radius delta in C^n_t ~ R^(2 n_t) (Ball).
ErrorVector sample_error(Eigen::Index n_t, double delta, ErrorMode mode, Rng& rng);

/// SINR_k = |h_k b_k|^2 / (sum_{j != k} |h_k b_j|^2 + sigma_k^2), linear scale.
std::vector<double> achieved_sinr(const ChannelSet& channels, const Precoder& precoder,
                                  std::span<const double> sigma);

/// Tr(B^H B).
double transmit_power(const Precoder& precoder);

RealEmbedding real_embedding(const ChannelSet& channels, const Precoder& precoder);
Eigen::MatrixXd embed_precoder(const Eigen::MatrixXcd& b);
Eigen::RowVectorXd embed_row(const Eigen::RowVectorXcd& h);

/// Adds one error row per user to the estimates.
ChannelSet perturb(const ChannelSet& estimates, const std::vector<ErrorVector>& errors);

double to_db(double linear);
double from_db(double db);

}  // namespace precoder::model
