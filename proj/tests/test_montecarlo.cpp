#include "precoder/montecarlo.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace {

using namespace precoder;
using namespace precoder::mc;

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.n_channel_trials = 6;
  c.n_error_samples = 200;
  c.seed = 17;
  return c;
}

TEST(Config, ValidateRejectsBadValues) {
  ExperimentConfig c = small_config();
  c.gamma_db.pop_back();
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_config();
  c.kappa = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_config();
  c.n_error_samples = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_config();
  c.methods.clear();
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Method, ParseRoundTrip) {
  for (Method m : {Method::Nominal, Method::Robust}) EXPECT_EQ(parse_method(to_string(m)), m);
  EXPECT_FALSE(parse_method("zf").has_value());
}

TEST(Floor, ZeroSinrIsFloored) {
  EXPECT_EQ(floor_db(0.0), kSinrFloorDb);
  EXPECT_DOUBLE_EQ(floor_db(10.0), 10.0);
}

TEST(CdfExperiment, SerialAndParallelAreIdentical) {
  const ExperimentConfig c = small_config();
  const SimulationReport a = sinr_cdf_experiment(c, Execution::Serial);
  const SimulationReport b = sinr_cdf_experiment(c, Execution::Parallel);
  ASSERT_EQ(a.methods.size(), b.methods.size());
  for (std::size_t m = 0; m < a.methods.size(); ++m) {
    EXPECT_EQ(a.methods[m].sinr_db, b.methods[m].sinr_db);
    EXPECT_EQ(a.methods[m].power, b.methods[m].power);
    EXPECT_EQ(a.methods[m].status, b.methods[m].status);
  }
}

TEST(CdfExperiment, RepeatRunsAreIdentical) {
  const ExperimentConfig c = small_config();
  EXPECT_EQ(sinr_cdf_experiment(c).at(Method::Robust).sinr_db, sinr_cdf_experiment(c).at(Method::Robust).sinr_db);
}

TEST(CdfExperiment, CdfIsMonotoneOverUnitInterval) {
  const SimulationReport r = sinr_cdf_experiment(small_config());
  for (const MethodReport& m : r.methods) {
    const auto cdf = empirical_cdf(m.sinr_db);
    ASSERT_FALSE(cdf.empty());
    EXPECT_GT(cdf.front().second, 0.0);
    EXPECT_DOUBLE_EQ(cdf.back().second, 1.0);
    for (std::size_t i = 1; i < cdf.size(); ++i) {
      EXPECT_GE(cdf[i].second, cdf[i - 1].second);
      EXPECT_GE(cdf[i].first, cdf[i - 1].first);
    }
  }
}

TEST(CdfExperiment, ZeroRadiusIsAStepAtTheTarget) {
  ExperimentConfig c = small_config();
  c.set_uniform(5.0, 1.0, 0.0);
  const SimulationReport r = sinr_cdf_experiment(c);
  for (const MethodReport& m : r.methods) {
    ASSERT_EQ(m.feasible_trials(), 6u);
    EXPECT_NEAR(m.sinr_db.front(), 5.0, 1e-3);
    EXPECT_NEAR(m.sinr_db.back(), 5.0, 1e-3);
  }
  for (std::size_t t = 0; t < 6; ++t) {
    EXPECT_NEAR(r.at(Method::Robust).power[t], r.at(Method::Nominal).power[t], 1e-6 * r.at(Method::Nominal).power[t]);
  }
}

TEST(CdfExperiment, RobustMeetsTargetNominalDoesNot) {
  ExperimentConfig c = small_config();
  c.n_channel_trials = 10;
  const SimulationReport r = sinr_cdf_experiment(c);
  const MethodReport& robust = r.at(Method::Robust);
  ASSERT_GT(robust.feasible_trials(), 0u);
  EXPECT_GE(robust.sinr_db.front(), 5.0 - 0.02);
  EXPECT_EQ(robust.fraction_below(5.0 - 0.02), 0.0);
  EXPECT_GT(r.at(Method::Nominal).fraction_below(5.0), 0.0);
  EXPECT_GE(robust.mean_power(), 0.0);
}

TEST(CdfExperiment, PowersMatchRedesign) {
  // every reported power is reproducible from the seed chain
  const ExperimentConfig c = small_config();
  const SimulationReport r = sinr_cdf_experiment(c);
  for (int t = 0; t < c.n_channel_trials; ++t) {
    auto rng = model::make_rng(c.seed, stream::kChannel, static_cast<std::uint64_t>(t));
    const model::ChannelSet h = model::generate_channels(c.n_u, c.n_t, rng);
    const design::DesignResult d = design::design_nominal(h, c.qos(), c.solver);
    EXPECT_NEAR(r.at(Method::Nominal).power[static_cast<std::size_t>(t)],
                model::transmit_power(*d.precoder), 1e-9);
  }
}

TEST(MethodReport, SummaryStatistics) {
  MethodReport m;
  m.sinr_db = {1.0, 2.0, 3.0, 4.0};
  m.power = {2.0, 0.0, 4.0};
  m.status = {conic::SolveStatus::Optimal, conic::SolveStatus::PrimalInfeasible, conic::SolveStatus::Optimal};
  EXPECT_EQ(m.feasible_trials(), 2u);
  EXPECT_DOUBLE_EQ(m.mean_power(), 3.0);
  EXPECT_DOUBLE_EQ(m.fraction_below(3.0), 0.5);
  MethodReport none;
  EXPECT_TRUE(std::isnan(none.mean_power()));
}

TEST(Sweeps, GammaSweepShapeAndOrdering) {
  ExperimentConfig c = small_config();
  c.set_uniform(5.0, 1.0, 0.02);
  c.n_channel_trials = 20;
  const std::vector<double> grid{0.0, 2.0, 4.0};
  const SweepTable t = power_vs_gamma_sweep(c, grid);
  EXPECT_EQ(t.parameter, "gamma_db");
  ASSERT_EQ(t.rows.size(), 6u);
  for (std::size_t m = 0; m < 2; ++m) {
    for (std::size_t g = 1; g < 3; ++g) {
      EXPECT_GE(t.rows[3 * m + g].mean_power_common, t.rows[3 * m + g - 1].mean_power_common - 1e-6);
      EXPECT_LE(t.rows[3 * m + g].feasibility_rate, t.rows[3 * m + g - 1].feasibility_rate);
    }
  }
  for (std::size_t g = 0; g < 3; ++g) {
    EXPECT_GE(t.rows[3 + g].mean_power_common, t.rows[g].mean_power_common - 1e-6);
    EXPECT_EQ(t.rows[3 + g].common_trials, t.rows[g].common_trials);
  }
}

TEST(Sweeps, SinglePointGridGivesOneRowPerMethod) {
  const std::vector<double> grid{3.0};
  const SweepTable t = power_vs_gamma_sweep(small_config(), grid);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0].method, Method::Nominal);
  EXPECT_EQ(t.rows[1].method, Method::Robust);
}

TEST(Sweeps, DeltaSweepReportsInfeasibility) {
  ExperimentConfig c = small_config();
  const std::vector<double> grid{0.0, 0.01, 0.5};
  const SweepTable t = power_vs_delta_sweep(c, grid, Execution::Serial);
  EXPECT_EQ(t.parameter, "delta");
  const SweepRow& nominal0 = t.rows[0];
  const SweepRow& robust0 = t.rows[3];
  EXPECT_NEAR(robust0.mean_power, nominal0.mean_power, 1e-6 * nominal0.mean_power);
  EXPECT_DOUBLE_EQ(robust0.feasibility_rate, 1.0);
  EXPECT_EQ(t.rows[5].feasible_trials, 0);
  EXPECT_TRUE(std::isnan(t.rows[5].mean_power));
  EXPECT_EQ(t.rows[5].trials, 6);
}

TEST(Sweeps, SerialAndParallelAreIdentical) {
  const std::vector<double> grid{0.0, 0.02};
  const SweepTable a = power_vs_delta_sweep(small_config(), grid, Execution::Serial);
  const SweepTable b = power_vs_delta_sweep(small_config(), grid, Execution::Parallel);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].feasible_trials, b.rows[i].feasible_trials);
    EXPECT_TRUE(a.rows[i].mean_power == b.rows[i].mean_power ||
                (std::isnan(a.rows[i].mean_power) && std::isnan(b.rows[i].mean_power)));
  }
}

class WorstCase : public ::testing::Test {
 protected:
  model::ChannelSet h{Eigen::MatrixXcd::Identity(2, 2)};
  model::QosSpec q = model::QosSpec::uniform(2, 1.0, 1.0);
  std::vector<double> delta{0.1, 0.1};
};

TEST_F(WorstCase, ZeroPrecoderIsFloored) {
  const auto r = worst_case_check(h, model::Precoder::zero(2, 2), q, delta, 50, 1);
  for (double s : r.min_sinr_db) EXPECT_EQ(s, kSinrFloorDb);
}

TEST_F(WorstCase, ZeroRadiusIsSinrAtEstimate) {
  const model::Precoder b(Eigen::MatrixXcd::Identity(2, 2) * 1.3);
  const std::vector<double> none{0.0, 0.0};
  const auto r = worst_case_check(h, b, q, none, 50, 1);
  const auto at_estimate = model::achieved_sinr(h, b, q.sigma);
  for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(r.min_sinr_db[k], model::to_db(at_estimate[k]));
}

TEST_F(WorstCase, ArgminReproducesMinimum) {
  const model::Precoder b(Eigen::MatrixXcd::Identity(2, 2));
  const auto r = worst_case_check(h, b, q, delta, 500, 3);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_NEAR(r.argmin_errors[k].norm(), 0.1, 1e-12);
    std::vector<model::ErrorVector> e(2, model::ErrorVector::Zero(2));
    e[k] = r.argmin_errors[k];
    const auto s = model::achieved_sinr(model::perturb(h, e), b, q.sigma);
    EXPECT_DOUBLE_EQ(model::to_db(s[k]), r.min_sinr_db[k]);
    EXPECT_LT(r.min_sinr_db[k], 0.0);  // a unit target loses margin under errors
  }
}

TEST_F(WorstCase, SerialAndParallelAreIdentical) {
  const model::Precoder b(Eigen::MatrixXcd::Identity(2, 2));
  const auto a = worst_case_check(h, b, q, delta, 300, 5, Execution::Serial);
  const auto p = worst_case_check(h, b, q, delta, 300, 5, Execution::Parallel);
  EXPECT_EQ(a.min_sinr_db, p.min_sinr_db);
}

TEST_F(WorstCase, RejectsBadArguments) {
  const model::Precoder b(Eigen::MatrixXcd::Identity(2, 2));
  EXPECT_THROW(worst_case_check(h, b, q, delta, 0, 1), std::invalid_argument);
  const std::vector<double> one{0.1};
  EXPECT_THROW(worst_case_check(h, b, q, one, 10, 1), std::invalid_argument);
}

}  // namespace
