#include "bellcc/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "bellcc/errors.hpp"

namespace bellcc::mc {

namespace {

using RoundFn = std::function<RoundTrace(std::uint64_t round)>;

// Counts successes over all rounds. Integer tallies make the chunked sum
// identical to the sequential one.
std::uint64_t tally(const SimOptions& options, const RoundFn& play) {
  if (options.rounds == 0) throw std::invalid_argument("rounds must be >= 1");
  if (options.trace) {
    std::uint64_t successes = 0;
    for (std::uint64_t r = 0; r < options.rounds; ++r) {
      const auto trace = play(r);
      options.trace(trace);
      successes += trace.success ? 1 : 0;
    }
    return successes;
  }
  const unsigned threads = static_cast<unsigned>(std::clamp<std::uint64_t>(
      options.threads == 0 ? ineq::default_threads() : options.threads, 1, options.rounds));
  std::vector<std::uint64_t> partial(threads, 0);
  const std::uint64_t chunk = (options.rounds + threads - 1) / threads;
  auto work = [&](unsigned t) {
    const std::uint64_t begin = std::min(options.rounds, t * chunk);
    const std::uint64_t end = std::min(options.rounds, begin + chunk);
    for (std::uint64_t r = begin; r < end; ++r) partial[t] += play(r).success ? 1 : 0;
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  std::uint64_t successes = 0;
  for (auto s : partial) successes += s;
  return successes;
}

std::string join(std::span<const int> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += values[i] > 0 ? "+1" : "-1";
  }
  return out;
}

}  // namespace

Inputs sample_inputs(const ccp::CCProblem& problem, RngStream& rng) {
  const double u = rng.uniform();
  const auto support = problem.support();
  std::uint32_t x = support.back();
  double cumulative = 0.0;
  for (std::uint32_t candidate : support) {
    cumulative += problem.probability(candidate);
    if (u < cumulative) {
      x = candidate;
      break;
    }
  }
  std::vector<int> y(static_cast<std::size_t>(problem.parties()));
  for (auto& yi : y) yi = rng.sign();
  return {x, std::move(y)};
}

int party_guess(std::span<const int> broadcasts) {
  int guess = 1;
  for (int e : broadcasts) guess *= e;
  return guess;
}

RoundTrace score_round(const ccp::CCProblem& problem, std::uint64_t round, const Inputs& inputs,
                       std::vector<int> a) {
  const auto n = static_cast<std::size_t>(problem.parties());
  if (a.size() != n || inputs.y.size() != n) throw DimensionError("round vectors have wrong length");
  RoundTrace trace{round, inputs.x, inputs.y, std::move(a), {}, 0, 0, false};
  trace.broadcasts.resize(n);
  for (std::size_t i = 0; i < n; ++i) trace.broadcasts[i] = trace.a[i] * trace.y[i];
  // Every party applies party_guess to the same n broadcast bits, so one
  // evaluation is everyone's answer.
  trace.guess = party_guess(trace.broadcasts);
  trace.target = problem.target(inputs.x, inputs.y);
  trace.success = trace.guess == trace.target;
  return trace;
}

SimReport make_report(std::uint64_t rounds, std::uint64_t successes, double analytic_rate) {
  SimReport report{};
  report.rounds = rounds;
  report.successes = successes;
  report.empirical_rate = static_cast<double>(successes) / static_cast<double>(rounds);
  report.analytic_rate = analytic_rate;
  report.standard_error =
      std::sqrt(std::max(0.0, analytic_rate * (1.0 - analytic_rate)) / static_cast<double>(rounds));
  const double deviation = report.empirical_rate - analytic_rate;
  if (report.standard_error > 0.0) {
    report.z_score = deviation / report.standard_error;
  } else if (deviation == 0.0) {
    report.z_score = 0.0;
  } else {
    report.z_score = std::copysign(std::numeric_limits<double>::infinity(), deviation);
  }
  return report;
}

SimReport run_classical(const ccp::CCProblem& problem, const ineq::StrategyEnsemble& ensemble,
                        const SimOptions& options) {
  if (ensemble.parties() != problem.parties()) throw DimensionError("ensemble/problem party mismatch");
  const auto members = ensemble.members();
  const auto weights = ensemble.weights();
  const int n = problem.parties();

  auto play = [&](std::uint64_t round) {
    auto rng = RngStream::derive(options.seed, round);
    // lambda first: shared before anyone sees an input.
    const double u = rng.uniform();
    std::size_t lambda = members.size() - 1;
    double cumulative = 0.0;
    for (std::size_t m = 0; m < members.size(); ++m) {
      cumulative += weights[m];
      if (u < cumulative) {
        lambda = m;
        break;
      }
    }
    const auto inputs = sample_inputs(problem, rng);
    std::vector<int> a(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      a[static_cast<std::size_t>(i)] =
          members[lambda].response(i, qsim::party_bit(inputs.x, n, i));
    }
    return score_round(problem, round, inputs, std::move(a));
  };
  const auto successes = tally(options, play);
  return make_report(options.rounds, successes, ccp::strategy_success(problem.g(), ensemble));
}

SimReport run_quantum(const ccp::CCProblem& problem, const qsim::PureState& state,
                      const qsim::MeasurementSettings& settings, double visibility,
                      const SimOptions& options) {
  const int n = problem.parties();
  if (state.parties() != n || settings.parties() != n) {
    throw DimensionError("state/settings/problem party mismatch");
  }
  if (!(visibility >= 0.0 && visibility <= 1.0)) {
    throw std::invalid_argument("visibility must lie in [0, 1]");
  }
  std::vector<std::optional<qsim::OutcomeDistribution>> dists(problem.g().size());
  for (std::uint32_t x : problem.support()) dists[x] = qsim::outcome_distribution(state, settings, x);

  auto play = [&](std::uint64_t round) {
    auto rng = RngStream::derive(options.seed, round);
    const auto inputs = sample_inputs(problem, rng);
    const bool noise = rng.uniform() >= visibility;
    std::vector<int> a;
    if (noise) {
      a.resize(static_cast<std::size_t>(n));
      for (auto& ai : a) ai = rng.sign();
    } else {
      a = qsim::sample_outcomes(*dists[inputs.x], rng);
    }
    return score_round(problem, round, inputs, std::move(a));
  };
  const auto successes = tally(options, play);
  const auto tensor = qsim::correlation_tensor(state, settings, visibility);
  return make_report(options.rounds, successes, ccp::quantum_success(problem.g(), tensor));
}

std::string format_trace(const RoundTrace& trace, int parties) {
  std::ostringstream out;
  out << "round=" << trace.round << " x=";
  for (int i = 0; i < parties; ++i) out << qsim::party_bit(trace.x, parties, i);
  out << " y=" << join(trace.y) << " a=" << join(trace.a) << " e=" << join(trace.broadcasts)
      << " guess=" << (trace.guess > 0 ? "+1" : "-1") << " f=" << (trace.target > 0 ? "+1" : "-1")
      << " success=" << (trace.success ? 1 : 0);
  return out.str();
}

}  // namespace bellcc::mc
