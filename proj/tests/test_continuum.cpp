#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bellcc/continuum.hpp"
#include "bellcc/errors.hpp"

using namespace bellcc;
using namespace bellcc::continuum;

namespace {

constexpr double kPi = std::numbers::pi;

ContinuumScenario scenario(int n, int m) {
  ContinuumScenario s;
  s.parties = n;
  s.grid_points = m;
  return s;
}

}  // namespace

TEST(FunctionalLhs, GhzIntegralOfCosSquared) {
  EXPECT_NEAR(functional_lhs(scenario(2, 64)), std::pow(2 * kPi, 2) / 2, 1e-9);
  EXPECT_NEAR(functional_lhs(scenario(3, 32)), std::pow(2 * kPi, 3) / 2, 1e-8);
}

TEST(FunctionalLhs, ZeroVisibility) {
  auto s = scenario(2, 16);
  s.visibility = 0.0;
  EXPECT_EQ(functional_lhs(s), 0.0);
}

TEST(FunctionalLhs, SimulatorPathAgreesWithClosedFormPath) {
  // A global phase hides the state from the GHZ fast path.
  for (int n : {1, 2, 3}) {
    const auto reference = qsim::ghz(n);
    std::vector<qsim::Complex> amps(reference.amplitudes().begin(), reference.amplitudes().end());
    for (auto& a : amps) a *= std::polar(1.0, 0.7);
    auto s = scenario(n, 16);
    s.state = qsim::PureState(n, amps);
    EXPECT_NEAR(functional_lhs(s), functional_lhs(scenario(n, 16)), 1e-10) << n;
  }
}

TEST(FunctionalLhs, GridRefinementIsStable) {
  RngStream rng(12);
  for (int n : {2, 3}) {
    auto coarse = scenario(n, 8);
    coarse.state = qsim::random_state(n, rng);
    auto fine = coarse;
    fine.grid_points = 16;
    EXPECT_NEAR(functional_lhs(coarse), functional_lhs(fine), 1e-9);
    // Any state obeys |E| <= 1, so |lhs| <= integral |cos| = W.
    EXPECT_LE(std::abs(functional_lhs(fine)), kernel_weight(n));
  }
  EXPECT_NEAR(functional_lhs(scenario(2, 32)), functional_lhs(scenario(2, 64)), 1e-9);
}

TEST(KernelWeight, MatchesSumVariableReduction) {
  for (int n : {1, 2, 3, 4}) {
    EXPECT_NEAR(kernel_weight(n), 4.0 * std::pow(2 * kPi, n - 1), 1e-12 * std::pow(2 * kPi, n - 1));
  }
}

TEST(KernelWeight, BruteForceGridConvergesToSameValue) {
  // Midpoint sums over a 2-D grid are only O(h^2) accurate because of the
  // kinks in |cos|, but they approach the same value.
  const int m = 2000;
  const double h = 2 * kPi / m;
  double sum = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) sum += std::abs(std::cos((i + 0.5) * h + (j + 0.3) * h));
  EXPECT_NEAR(sum * h * h, kernel_weight(2), 1e-3);
}

TEST(ContinuumSuccess, TwoParties) {
  const auto r = continuum_success(scenario(2, 64));
  EXPECT_NEAR(r.quantum, 0.5 * (1 + kPi / 4), 1e-9);
  EXPECT_NEAR(r.classical_max, 0.5 * (1 + 2 / kPi), 1e-12);
  EXPECT_EQ(r.bound, 16.0);
  EXPECT_TRUE(r.advantage);
}

TEST(ContinuumSuccess, ThreeParties) {
  const auto r = continuum_success(scenario(3, 32));
  EXPECT_NEAR(r.classical_max, 0.5 * (1 + std::pow(2 / kPi, 2)), 1e-12);
  EXPECT_NEAR(r.classical_max, 0.7026424, 1e-7);
}

TEST(ContinuumSuccess, QuantumIndependentOfPartyCount) {
  double previous_classical = 1.0;
  for (int n : {2, 3, 4}) {
    const auto r = continuum_success(scenario(n, 16));
    EXPECT_NEAR(r.quantum, 0.5 * (1 + kPi / 4), 1e-9) << n;
    EXPECT_LT(r.classical_max, previous_classical);
    EXPECT_NEAR(r.classical_max - 0.5, 0.5 * std::pow(2 / kPi, n - 1), 1e-12);
    previous_classical = r.classical_max;
  }
}

TEST(ContinuumScenario, Validation) {
  EXPECT_THROW(functional_lhs(scenario(2, 7)), SizeError);
  EXPECT_THROW(functional_lhs(scenario(2, 6)), SizeError);
  EXPECT_THROW(functional_lhs(scenario(5, 8)), CapacityError);
  auto s = scenario(2, 8);
  s.state = qsim::ghz(3);
  EXPECT_THROW(functional_lhs(s), DimensionError);
}
