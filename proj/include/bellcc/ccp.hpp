#pragma once

// Communication-complexity problems induced by a weight table g.
//
// Party i receives (x_i, y_i): x is drawn from Q(x) = |g(x)| / sum|g| and each
// y_i is a fair +-1 bit. Every party broadcasts one bit and all must output
// f = (prod_i y_i) * sign(g(x)). For protocols whose broadcast is a_i * y_i,
// the success probability is 1/2 (1 + sum_x g(x) E(x) / sum|g|), so beating
// the best classical protocol is the same event as violating the Bell
// inequality sum_x g(x) E(x) <= B.

#include <cstdint>
#include <span>
#include <vector>

#include "bellcc/inequalities.hpp"
#include "bellcc/qsim.hpp"

namespace bellcc::ccp {

class CCProblem {
 public:
  explicit CCProblem(ineq::GTable g);

  const ineq::GTable& g() const { return g_; }
  int parties() const { return g_.parties(); }
  // Q(x) for every setting index; exactly 0 where g(x) = 0.
  std::span<const double> distribution() const { return distribution_; }
  double probability(std::uint32_t x) const { return distribution_.at(x); }
  // Setting indices with g(x) != 0, ascending.
  std::span<const std::uint32_t> support() const { return support_; }
  // f(x, y). Throws std::domain_error off the support.
  int target(std::uint32_t x, std::span<const int> y) const;

 private:
  ineq::GTable g_;
  std::vector<double> distribution_;
  std::vector<std::uint32_t> support_;
};

CCProblem build_problem(ineq::GTable g);

// 1/2 (1 + B / sum|g|) with B from the exhaustive LHV search.
double classical_max_success(const ineq::GTable& g, int cap = ineq::kDefaultLhvCap);

// sum_x Q(x) P_x(prod a_i = sign g(x)), with P_x recovered from the
// correlation as (1 + sign g(x) E(x)) / 2.
double quantum_success(const ineq::GTable& g, const qsim::CorrelationTensor& correlations);

// Exact success probability of a classical strategy or mixture.
double strategy_success(const ineq::GTable& g, const ineq::DeterministicStrategy& strategy);
double strategy_success(const ineq::GTable& g, const ineq::StrategyEnsemble& ensemble);

struct SuccessReport {
  double classical_max;
  double quantum;
  bool advantage;
  double bell_lhs;
  double bound;

  friend bool operator==(const SuccessReport&, const SuccessReport&) = default;
};

// Throws std::logic_error if the advantage and violation verdicts disagree.
SuccessReport analyze(const ineq::GTable& g, const qsim::CorrelationTensor& correlations,
                      int cap = ineq::kDefaultLhvCap);
// Same, with a precomputed bound.
SuccessReport analyze(const ineq::BellInequality& inequality,
                      const qsim::CorrelationTensor& correlations);

}  // namespace bellcc::ccp
