#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "effcost/footprint.hpp"

using namespace effcost;

TEST(Carbon, Examples) {
  EXPECT_DOUBLE_EQ(carbon_footprint({100.0, 0.0, 0.0, 0.5}), 50.0);
  EXPECT_DOUBLE_EQ(carbon_footprint({0.0, 0.001, 1e6, 0.4}), 400.0);
  EXPECT_DOUBLE_EQ(carbon_footprint({}), 0.0);
}

TEST(Carbon, RejectsNegativeAndNonFinite) {
  EXPECT_THROW((void)carbon_footprint({-1.0, 0.0, 0.0, 0.5}), std::invalid_argument);
  EXPECT_THROW((void)carbon_footprint({1.0, 0.0, std::nan(""), 0.5}), std::invalid_argument);
  EXPECT_THROW((void)carbon_footprint({1.0, 0.0, 0.0, std::numeric_limits<double>::infinity()}),
               std::invalid_argument);
}

TEST(Cost, Examples) {
  EXPECT_DOUBLE_EQ(monetary_cost({100.0, 64.0, 2.0}), 12800.0);
  EXPECT_DOUBLE_EQ(monetary_cost({0.0, 64.0, 2.0}), 0.0);
  EXPECT_DOUBLE_EQ(monetary_cost({1.0, 1.0, 1.0}), 1.0);
  EXPECT_THROW((void)monetary_cost({1.0, -1.0, 1.0}), std::invalid_argument);
}

TEST(Energy, FromPower) {
  EXPECT_DOUBLE_EQ(energy_from_power(250.0, 10.0, 8.0), 20.0);
  EXPECT_THROW((void)energy_from_power(-1.0, 1.0, 1.0), std::invalid_argument);
}

TEST(Carbon, LinearInQueriesAndIntensity) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  for (int i = 0; i < 50; ++i) {
    EnergyProfile e{u(rng), u(rng) / 1000, u(rng), u(rng) / 1000};
    EnergyProfile doubled = e;
    doubled.co2e_kg_per_kwh *= 2;
    EXPECT_NEAR(carbon_footprint(doubled), 2 * carbon_footprint(e), 1e-9 * carbon_footprint(doubled) + 1e-300);
    EnergyProfile more = e;
    more.queries += 10;
    EXPECT_NEAR(carbon_footprint(more) - carbon_footprint(e), 10 * e.ee_inference_kwh * e.co2e_kg_per_kwh,
                1e-9 * carbon_footprint(more));
  }
}
