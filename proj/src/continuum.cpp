#include "bellcc/continuum.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellcc/errors.hpp"
#include "bellcc/inequalities.hpp"

namespace bellcc::continuum {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

bool is_ghz(const qsim::PureState& state) {
  const auto reference = qsim::ghz(state.parties());
  for (std::size_t k = 0; k < state.dimension(); ++k) {
    if (std::abs(state.amplitude(k) - reference.amplitude(k)) > 1e-14) return false;
  }
  return true;
}

// Visits every grid node as a vector of per-party grid indices.
template <typename Visit>
void for_each_node(int parties, int m, Visit&& visit) {
  std::vector<int> digits(static_cast<std::size_t>(parties), 0);
  for (;;) {
    visit(digits);
    int i = parties - 1;
    while (i >= 0 && ++digits[static_cast<std::size_t>(i)] == m) {
      digits[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) return;
  }
}

void check_ghz_closed_form(int parties) {
  const auto state = qsim::ghz(parties);
  // A few fixed, irregular angle tuples.
  for (int probe = 1; probe <= 5; ++probe) {
    std::vector<std::array<double, 2>> angles(static_cast<std::size_t>(parties));
    double total = 0.0;
    for (int i = 0; i < parties; ++i) {
      const double phi = 0.37 * probe + 1.13 * i + 0.05 * probe * i;
      angles[static_cast<std::size_t>(i)] = {phi, phi};
      total += phi;
    }
    const auto settings = qsim::MeasurementSettings::equatorial(angles);
    const double simulated = qsim::correlation(state, settings, 0);
    if (std::abs(simulated - std::cos(total)) > 1e-10) {
      throw std::logic_error("GHZ correlation closed form disagrees with simulation");
    }
  }
}

}  // namespace

void ContinuumScenario::validate() const {
  if (parties < 1) throw SizeError("party count must be >= 1");
  if (parties > kMaxParties) {
    throw CapacityError("continuum quadrature supports at most " + std::to_string(kMaxParties) +
                        " parties, got " + std::to_string(parties));
  }
  if (grid_points < 8 || grid_points % 2 != 0) {
    throw SizeError("grid points per dimension must be even and >= 8, got " +
                    std::to_string(grid_points));
  }
  if (!(visibility >= 0.0 && visibility <= 1.0)) {
    throw std::invalid_argument("visibility must lie in [0, 1]");
  }
  if (state && state->parties() != parties) {
    throw DimensionError("state party count does not match the scenario");
  }
}

double functional_bound(int parties) { return std::ldexp(1.0, 2 * parties); }

double functional_lhs(const ContinuumScenario& scenario) {
  scenario.validate();
  const int n = scenario.parties;
  const int m = scenario.grid_points;
  const double h = kTwoPi / m;
  CompensatedSum sum;

  if (!scenario.state || is_ghz(*scenario.state)) {
    check_ghz_closed_form(n);
    for_each_node(n, m, [&](const std::vector<int>& digits) {
      int total = 0;
      for (int d : digits) total += d;
      const double c = std::cos(h * (total % m));
      sum.add(c * c);
    });
  } else {
    // Observable matrices for every grid angle.
    std::vector<qsim::Matrix2> grid_ops;
    grid_ops.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) grid_ops.push_back(qsim::BlochObservable::equatorial(h * j).matrix());
    std::vector<qsim::Matrix2> ops(static_cast<std::size_t>(n));
    for_each_node(n, m, [&](const std::vector<int>& digits) {
      int total = 0;
      for (int i = 0; i < n; ++i) {
        ops[static_cast<std::size_t>(i)] = grid_ops[static_cast<std::size_t>(digits[static_cast<std::size_t>(i)])];
        total += digits[static_cast<std::size_t>(i)];
      }
      const double e = qsim::expectation(*scenario.state, ops).real();
      sum.add(std::cos(h * (total % m)) * e);
    });
  }
  return scenario.visibility * std::pow(h, n) * sum.value();
}

double kernel_weight(int parties) {
  if (parties < 1) throw SizeError("party count must be >= 1");
  using Rule = boost::math::quadrature::gauss<double, 30>;
  const auto abs_cos = [](double u) { return std::abs(std::cos(u)); };
  const double half = std::numbers::pi / 2.0;
  const double period = Rule::integrate(abs_cos, -half, half) +
                        Rule::integrate(abs_cos, half, 3.0 * half);
  return std::pow(kTwoPi, parties - 1) * period;
}

ContinuumReport continuum_success(const ContinuumScenario& scenario) {
  scenario.validate();
  ContinuumReport report{};
  report.parties = scenario.parties;
  report.grid_points = scenario.grid_points;
  report.lhs = functional_lhs(scenario);
  report.bound = functional_bound(scenario.parties);
  report.weight = kernel_weight(scenario.parties);
  report.classical_max = 0.5 * (1.0 + report.bound / report.weight);
  report.quantum = 0.5 * (1.0 + report.lhs / report.weight);
  report.advantage = report.lhs - report.bound > ineq::kBoundarySlack * std::max(1.0, report.weight);
  return report;
}

}  // namespace bellcc::continuum
