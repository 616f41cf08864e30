#include "bellcc/ccp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bellcc/errors.hpp"

namespace bellcc::ccp {

namespace {

void check_dims(const ineq::GTable& g, int parties) {
  if (g.parties() != parties) {
    throw DimensionError("g has " + std::to_string(g.parties()) + " parties, operand has " +
                         std::to_string(parties));
  }
}

double checked_probability(double p) {
  if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) {
    throw std::logic_error("success probability " + std::to_string(p) + " outside [0, 1]");
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

CCProblem::CCProblem(ineq::GTable g) : g_(std::move(g)), distribution_(g_.size(), 0.0) {
  const double total = g_.total_weight();
  for (std::uint32_t x = 0; x < g_.size(); ++x) {
    if (g_[x] == 0.0) continue;
    distribution_[x] = std::abs(g_[x]) / total;
    support_.push_back(x);
  }
}

int CCProblem::target(std::uint32_t x, std::span<const int> y) const {
  if (static_cast<int>(y.size()) != parties()) throw DimensionError("y vector length mismatch");
  const int s = g_.sign(x);
  if (s == 0) throw std::domain_error("f is undefined where g(x) = 0");
  int product = s;
  for (int yi : y) product *= yi;
  return product;
}

CCProblem build_problem(ineq::GTable g) { return CCProblem(std::move(g)); }

double classical_max_success(const ineq::GTable& g, int cap) {
  const double bound = ineq::lhv_bound(g, cap).bound;
  return 0.5 * (1.0 + bound / g.total_weight());
}

double quantum_success(const ineq::GTable& g, const qsim::CorrelationTensor& correlations) {
  check_dims(g, correlations.parties());
  const CCProblem problem(g);
  double p = 0.0;
  for (std::uint32_t x : problem.support()) {
    const double local = 0.5 * (1.0 + g.sign(x) * correlations[x]);
    p += problem.probability(x) * local;
  }
  return checked_probability(p);
}

double strategy_success(const ineq::GTable& g, const ineq::DeterministicStrategy& strategy) {
  return strategy_success(g, ineq::StrategyEnsemble(strategy));
}

double strategy_success(const ineq::GTable& g, const ineq::StrategyEnsemble& ensemble) {
  check_dims(g, ensemble.parties());
  const CCProblem problem(g);
  double p = 0.0;
  const auto weights = ensemble.weights();
  const auto members = ensemble.members();
  for (std::uint32_t x : problem.support()) {
    double hit = 0.0;
    for (std::size_t m = 0; m < members.size(); ++m) {
      if (members[m].product(x) == g.sign(x)) hit += weights[m];
    }
    p += problem.probability(x) * hit;
  }
  return checked_probability(p);
}

SuccessReport analyze(const ineq::BellInequality& inequality,
                      const qsim::CorrelationTensor& correlations) {
  const auto& g = inequality.g;
  const double total = g.total_weight();
  SuccessReport report{};
  report.bound = inequality.classical_bound;
  report.bell_lhs = ineq::bell_lhs(g, correlations);
  report.classical_max = 0.5 * (1.0 + report.bound / total);
  report.quantum = quantum_success(g, correlations);

  // Success gap q - c equals (lhs - B) / (2 sum|g|); scale the slack to match.
  const double bell_slack = ineq::kBoundarySlack * std::max(1.0, total);
  const double success_slack = bell_slack / (2.0 * total);
  report.advantage = report.quantum - report.classical_max > success_slack;
  const bool violation = ineq::violated(inequality, correlations).violated;
  if (report.advantage != violation) {
    throw std::logic_error("advantage and Bell violation disagree: quantum " +
                           std::to_string(report.quantum) + " vs classical " +
                           std::to_string(report.classical_max) + ", lhs " +
                           std::to_string(report.bell_lhs) + " vs bound " +
                           std::to_string(report.bound));
  }
  return report;
}

SuccessReport analyze(const ineq::GTable& g, const qsim::CorrelationTensor& correlations, int cap) {
  check_dims(g, correlations.parties());
  return analyze(ineq::BellInequality::from_enumeration(g, cap), correlations);
}

}  // namespace bellcc::ccp
