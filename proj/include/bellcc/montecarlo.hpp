#pragma once

// Round-by-round simulation of the one-bit-broadcast protocols.
//
// Each round: the inputs (x, y) are drawn, every party i computes a_i (from a
// classical strategy or a measurement), broadcasts e_i = a_i * y_i, and
// outputs the product of all n broadcasts as its guess for f.
//
// Round r uses the stream RngStream::derive(seed, r), so a tally does not
// depend on how rounds are split across threads.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bellcc/ccp.hpp"
#include "bellcc/inequalities.hpp"
#include "bellcc/qsim.hpp"
#include "bellcc/rng.hpp"

namespace bellcc::mc {

struct Inputs {
  std::uint32_t x;
  std::vector<int> y;
};

struct RoundTrace {
  std::uint64_t round;
  std::uint32_t x;
  std::vector<int> y;
  std::vector<int> a;
  std::vector<int> broadcasts;
  int guess;
  int target;
  bool success;
};

struct SimReport {
  std::uint64_t rounds;
  std::uint64_t successes;
  double empirical_rate;
  double analytic_rate;
  double standard_error;  // sqrt(p (1 - p) / N) at the analytic rate
  double z_score;         // 0 when both the error and the deviation vanish

  friend bool operator==(const SimReport&, const SimReport&) = default;
};

struct SimOptions {
  std::uint64_t rounds = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: ineq::default_threads()
  // Called for every round in round order when set.
  std::function<void(const RoundTrace&)> trace;
};

// x by inverse CDF over Q, y_i independent fair signs.
Inputs sample_inputs(const ccp::CCProblem& problem, RngStream& rng);

// Guess of one party: the product of every broadcast. Parties see nothing
// else from the others.
int party_guess(std::span<const int> broadcasts);

// Builds and checks a round from the local values a_i.
RoundTrace score_round(const ccp::CCProblem& problem, std::uint64_t round, const Inputs& inputs,
                       std::vector<int> a);

// Shared randomness: per round, lambda picks an ensemble member by weight
// before the inputs are drawn.
SimReport run_classical(const ccp::CCProblem& problem, const ineq::StrategyEnsemble& ensemble,
                        const SimOptions& options);

// With probability `visibility` the outcomes follow the quantum distribution
// for the drawn settings, otherwise every a_i is an independent fair coin.
SimReport run_quantum(const ccp::CCProblem& problem, const qsim::PureState& state,
                      const qsim::MeasurementSettings& settings, double visibility,
                      const SimOptions& options);

SimReport make_report(std::uint64_t rounds, std::uint64_t successes, double analytic_rate);

// One line: round, x, y, a, e, guess, f, success.
std::string format_trace(const RoundTrace& trace, int parties);

}  // namespace bellcc::mc
