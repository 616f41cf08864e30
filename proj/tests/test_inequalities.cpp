#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bellcc/errors.hpp"
#include "bellcc/inequalities.hpp"
#include "oracles.hpp"

using namespace bellcc;
using namespace bellcc::ineq;

namespace {

std::vector<double> to_vector(const GTable& g) { return {g.values().begin(), g.values().end()}; }

qsim::CorrelationTensor mermin_tensor(int n, double visibility = 1.0) {
  const auto settings = qsim::MeasurementSettings::uniform(n, qsim::BlochObservable::pauli_x(),
                                                           qsim::BlochObservable::pauli_y());
  return qsim::correlation_tensor(qsim::ghz(n), settings, visibility);
}

}  // namespace

TEST(GTable, Invariants) {
  EXPECT_THROW(GTable(2, {0, 0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(GTable(2, {1, 2, 3}), SizeError);
  const GTable g(2, {1.5, -2, 0, 3});
  EXPECT_DOUBLE_EQ(g.total_weight(), 6.5);
  EXPECT_EQ(g.sign(0), 1);
  EXPECT_EQ(g.sign(1), -1);
  EXPECT_EQ(g.sign(2), 0);
  EXPECT_FALSE(g.is_integral());
  EXPECT_TRUE(GTable(1, {2, -3}).is_integral());
}

TEST(SignFunction, MaskAndHex) {
  const auto s = SignFunction::from_mask(2, 0b0110);
  EXPECT_EQ(s[0], -1);
  EXPECT_EQ(s[1], 1);
  EXPECT_EQ(s[2], 1);
  EXPECT_EQ(s[3], -1);
  EXPECT_EQ(s.to_hex(), "0x6");
  const auto h = SignFunction::from_hex(2, "0x6");
  EXPECT_TRUE(std::ranges::equal(h.entries(), s.entries()));
  EXPECT_EQ(s.at(std::vector<int>{-1, 1}), 1);
  EXPECT_THROW(SignFunction::from_hex(2, "0x1f"), ParseError);
  EXPECT_THROW(SignFunction::from_hex(2, "0xg"), ParseError);
  EXPECT_THROW(SignFunction(1, {1, 0}), std::invalid_argument);
}

TEST(Wwzb, SingleParty) {
  // S(s) = s: S(-1) = -1 at index 0, S(+1) = +1 at index 1.
  const auto g = wwzb_g(SignFunction(1, {-1, 1}));
  EXPECT_EQ(to_vector(g), (std::vector<double>{0, 2}));
}

TEST(Wwzb, MerminOddSignFunction) {
  const auto coeffs = mermin_coefficients(3);
  std::vector<int> entries(coeffs.begin(), coeffs.end());
  const auto g = wwzb_g(SignFunction(3, entries));
  EXPECT_EQ(to_vector(g), (std::vector<double>{4, 0, 0, -4, 0, -4, -4, 0}));
  EXPECT_EQ(g, mermin_g(3));
}

TEST(Wwzb, ArdehaliTwoParties) {
  const auto g = wwzb_g(ardehali_sign(2));
  EXPECT_EQ(to_vector(g), (std::vector<double>{2, -2, -2, -2}));
  EXPECT_EQ(g, ardehali_g(2));
}

TEST(Wwzb, ClosedFormsMatchSynthesisExactly) {
  for (int n : {2, 3, 4}) {
    EXPECT_EQ(mermin_g(n), walsh_synthesis(n, mermin_coefficients(n))) << n;
    if (n % 2 == 1) {
      const auto c = mermin_coefficients(n);
      EXPECT_EQ(mermin_g(n), wwzb_g(SignFunction(n, std::vector<int>(c.begin(), c.end()))));
    } else {
      EXPECT_EQ(ardehali_g(n), wwzb_g(ardehali_sign(n))) << n;
    }
  }
  // Even-n Mermin coefficients contain zeros, so they are not a sign function.
  const auto even = mermin_coefficients(2);
  EXPECT_EQ(even, (std::vector<double>{0, 1, 1, 0}));
}

TEST(Mermin, SupportAndValues) {
  const auto g3 = mermin_g(3);
  for (std::uint32_t x = 0; x < 8; ++x) {
    EXPECT_EQ(g3[x] != 0.0, std::popcount(x) % 2 == 0) << x;
  }
  const auto g4 = mermin_g(4);
  for (std::uint32_t x = 0; x < 16; ++x) {
    const int w = std::popcount(x);
    const double expected = w % 2 ? 0.0 : (w % 4 == 0 ? 4.0 : -4.0);
    EXPECT_EQ(g4[x], expected) << x;
  }
  EXPECT_THROW(mermin_g(1), SizeError);
}

TEST(Ardehali, TotalWeightByDirectSummation) {
  double total = 0.0;
  for (int x = 0; x < 16; ++x) {
    total += std::abs(std::sqrt(32.0) *
                      std::cos(std::numbers::pi / 2 * std::popcount(static_cast<unsigned>(x)) + std::numbers::pi / 4));
  }
  EXPECT_NEAR(total, 64.0, 1e-12);
  EXPECT_EQ(ardehali_g(4).total_weight(), 64.0);
  EXPECT_THROW(ardehali_g(3), std::invalid_argument);
}

TEST(LhvBound, Examples) {
  EXPECT_EQ(lhv_bound(mermin_g(3)).bound, 8.0);
  EXPECT_EQ(lhv_bound(ardehali_g(2)).bound, 4.0);
  EXPECT_EQ(lhv_bound(GTable(3, {0, 0, 0, 0, 0, -7, 0, 0})).bound, 7.0);
  EXPECT_EQ(lhv_bound(GTable(2, {0, 2.5, 0, 0})).bound, 2.5);
}

TEST(LhvBound, ArgmaxAchievesBound) {
  for (const auto& g : {mermin_g(3), ardehali_g(2), mermin_g(4)}) {
    const auto result = lhv_bound(g);
    EXPECT_EQ(bell_lhs(g, result.argmax.tensor()), result.bound);
  }
}

TEST(LhvBound, TieBreakIsLowestIndex) {
  // Every strategy with a_1(0) = +1 attains the maximum; index 0 is lowest.
  const auto result = lhv_bound(GTable(1, {5, 0}));
  EXPECT_EQ(result.argmax.index(), 0u);
}

TEST(LhvBound, MatchesRecursiveOracleOnRandomTables) {
  RngStream rng(17);
  for (int n = 1; n <= 5; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> values(std::size_t{1} << n);
      for (auto& v : values) v = rng.normal();
      const GTable g(n, values);
      EXPECT_NEAR(lhv_bound(g).bound, oracle::brute_lhv(values, n), 1e-12);

      std::vector<double> ints(values.size());
      for (auto& v : ints) v = std::floor(rng.uniform() * 21) - 10;
      ints[0] = 1;  // never all zero
      const GTable gi(n, ints);
      EXPECT_EQ(lhv_bound(gi).bound, oracle::brute_lhv(ints, n));
    }
  }
}

TEST(LhvBound, SymmetryInvariants) {
  RngStream rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 4;
    std::vector<double> values(std::size_t{1} << n);
    for (auto& v : values) v = std::round(rng.normal() * 5);
    values[0] = 3;
    const GTable g(n, values);
    const double b = lhv_bound(g).bound;
    EXPECT_EQ(lhv_bound(g.negated()).bound, b);
    for (int party = 0; party < n; ++party) EXPECT_EQ(lhv_bound(g.relabeled(party)).bound, b);
  }
}

TEST(LhvBound, ThreadCountDoesNotChangeResult) {
  RngStream rng(3);
  std::vector<double> values(64);
  for (auto& v : values) v = rng.normal();
  const GTable g(6, values);
  const auto one = lhv_bound(g, kDefaultLhvCap, 1);
  for (unsigned threads : {2u, 3u, 7u}) {
    const auto many = lhv_bound(g, kDefaultLhvCap, threads);
    EXPECT_EQ(many.bound, one.bound);
    EXPECT_EQ(many.argmax.index(), one.argmax.index());
  }
}

TEST(LhvBound, CapacityError) {
  std::vector<double> values(512, 1.0);
  const GTable g(9, values);
  EXPECT_THROW(lhv_bound(g), CapacityError);
  try {
    lhv_bound(g);
  } catch (const CapacityError& e) {
    EXPECT_NE(std::string(e.what()).find("--lhv-cap"), std::string::npos);
  }
}

TEST(LhvBound, WholeFamilyHasBoundTwoToTheN) {
  for (int n : {2, 3}) {
    const auto members = enumerate_wwzb(n);
    for (const auto& m : members) {
      ASSERT_EQ(lhv_bound(m.g).bound, std::ldexp(1.0, n)) << "n=" << n << " mask=" << m.index;
    }
  }
}

TEST(LhvBound, MixedStrategiesNeverExceedBound) {
  RngStream rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 3;
    std::vector<double> values(std::size_t{1} << n);
    for (auto& v : values) v = rng.normal();
    const GTable g(n, values);
    const double bound = lhv_bound(g).bound;
    std::vector<DeterministicStrategy> members;
    std::vector<double> weights;
    for (int k = 0; k < 5; ++k) {
      members.push_back(DeterministicStrategy::from_index(n, rng() % (1u << (2 * n))));
      weights.push_back(rng.uniform() + 1e-3);
    }
    EXPECT_LE(bell_value(g, StrategyEnsemble(members, weights)), bound + 1e-12);
  }
}

TEST(BellLhs, Examples) {
  const auto g = mermin_g(3);
  EXPECT_EQ(bell_lhs(g, qsim::CorrelationTensor(3, std::vector<double>(8, 0.0))), 0.0);
  EXPECT_NEAR(bell_lhs(g, mermin_tensor(3)), 16.0, 1e-12);
  const double bound = lhv_bound(g).bound;
  for (std::uint64_t s = 0; s < 64; ++s) {
    EXPECT_LE(bell_lhs(g, DeterministicStrategy::from_index(3, s).tensor()), bound);
  }
  EXPECT_THROW(bell_lhs(g, mermin_tensor(2)), DimensionError);
}

TEST(Violated, MerminExamples) {
  const auto ineq = BellInequality::from_enumeration(mermin_g(3));
  EXPECT_EQ(ineq.classical_bound, 8.0);
  const auto full = violated(ineq, mermin_tensor(3));
  EXPECT_TRUE(full.violated);
  EXPECT_NEAR(full.margin, 8.0, 1e-12);
  const auto half = violated(ineq, mermin_tensor(3, 0.5));
  EXPECT_FALSE(half.violated);
  EXPECT_NEAR(half.margin, 0.0, 1e-12);
  for (std::uint64_t s = 0; s < 64; ++s) {
    EXPECT_FALSE(violated(ineq, DeterministicStrategy::from_index(3, s).tensor()).violated);
  }
}

TEST(OptimizeSettings, MerminThreeParties) {
  const auto result = optimize_settings(qsim::ghz(3), mermin_g(3));
  EXPECT_NEAR(result.value, 16.0, 1e-6);
  EXPECT_NEAR(bell_lhs(mermin_g(3), qsim::correlation_tensor(qsim::ghz(3), result.settings)),
              result.value, 1e-12);
}

TEST(OptimizeSettings, ChshFormMatchesGridOracle) {
  // Dense grid over four equatorial angles, correlations from Kronecker
  // products. The grid contains the optimal angles.
  const int steps = 32;
  const double h = 2.0 * std::numbers::pi / steps;
  const auto ghz2 = qsim::ghz(2);
  const auto psi = ghz2.amplitudes();
  std::vector<double> table(steps * steps);
  for (int a = 0; a < steps; ++a) {
    for (int b = 0; b < steps; ++b) {
      const std::vector<oracle::Mat2> ops{oracle::bloch_matrix(std::cos(a * h), std::sin(a * h), 0),
                                          oracle::bloch_matrix(std::cos(b * h), std::sin(b * h), 0)};
      table[static_cast<std::size_t>(a * steps + b)] = oracle::dense_expectation(psi, ops).real();
    }
  }
  const auto g = ardehali_g(2);
  double grid_best = -1e300;
  for (int a0 = 0; a0 < steps; ++a0)
    for (int a1 = 0; a1 < steps; ++a1)
      for (int b0 = 0; b0 < steps; ++b0)
        for (int b1 = 0; b1 < steps; ++b1) {
          const double v = g[0] * table[static_cast<std::size_t>(a0 * steps + b0)] +
                           g[1] * table[static_cast<std::size_t>(a0 * steps + b1)] +
                           g[2] * table[static_cast<std::size_t>(a1 * steps + b0)] +
                           g[3] * table[static_cast<std::size_t>(a1 * steps + b1)];
          grid_best = std::max(grid_best, v);
        }
  EXPECT_NEAR(grid_best, 4.0 * std::sqrt(2.0), 1e-12);
  const auto result = optimize_settings(qsim::ghz(2), g);
  EXPECT_NEAR(result.value, grid_best, 1e-6);
}

TEST(OptimizeSettings, ProductStateStaysClassical) {
  const auto result = optimize_settings(qsim::basis_state(3, 0), mermin_g(3));
  EXPECT_LE(result.value, 8.0 + 1e-9);
}

TEST(OptimizeSettings, Deterministic) {
  OptimizeOptions options;
  options.restarts = 4;
  const auto a = optimize_settings(qsim::ghz(3), mermin_g(3), options);
  const auto b = optimize_settings(qsim::ghz(3), mermin_g(3), options);
  EXPECT_EQ(a.value, b.value);
}

TEST(Factorable, CountsAtTwoParties) {
  const auto members = enumerate_wwzb(2);
  ASSERT_EQ(members.size(), 16u);
  int factorable = 0;
  for (const auto& m : members) factorable += m.factorable;
  EXPECT_EQ(factorable, 8);
  EXPECT_TRUE(is_factorable(SignFunction(2, {1, 1, 1, 1})));
  EXPECT_TRUE(is_factorable(SignFunction(3, std::vector<int>(8, -1))));
}

TEST(Factorable, EquivalentToSingleWalshCharacter) {
  // A product of single-party signs is +-(one character), so its g has
  // exactly one nonzero entry.
  for (int n : {1, 2, 3}) {
    for_each_wwzb(n, [&](const WwzbMember& m) {
      int nonzero = 0;
      for (double v : m.g.values()) nonzero += v != 0.0;
      EXPECT_EQ(m.factorable, nonzero == 1) << "n=" << n << " mask=" << m.index;
    });
  }
}

TEST(Factorable, NoQuantumViolation) {
  OptimizeOptions options;
  options.restarts = 6;
  for (int n : {2, 3}) {
    for_each_wwzb(n, [&](const WwzbMember& m) {
      if (!m.factorable) return;
      const auto result = optimize_settings(qsim::ghz(n), m.g, options);
      EXPECT_LE(result.value, std::ldexp(1.0, n) + 1e-6);
    });
  }
}

TEST(Enumerate, CapacityError) {
  EXPECT_THROW(enumerate_wwzb(5), CapacityError);
  int count = 0;
  for_each_wwzb(1, [&](const WwzbMember&) { ++count; });
  EXPECT_EQ(count, 4);
}
