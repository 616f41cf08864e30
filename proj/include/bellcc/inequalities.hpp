#pragma once

// Correlation Bell inequalities sum_x g(x) E(x) <= B for two settings per
// party: weight tables, the two-setting full-correlation family generated by
// sign functions, exact local-hidden-variable bounds, and a quantum settings
// optimizer.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bellcc/qsim.hpp"

namespace bellcc::ineq {

inline constexpr int kDefaultLhvCap = 8;
inline constexpr int kMaxFamilyParties = 4;

// Relative slack used when comparing a Bell value against its bound.
inline constexpr double kBoundarySlack = 1e-9;

/// Real weight g(x) over the 2^n joint setting choices, x packed with party 1
/// as the most significant bit.
class GTable {
 public:
  // Throws SizeError for a bad length, std::invalid_argument when every entry
  // is zero or an entry is not finite.
  GTable(int parties, std::vector<double> values);

  int parties() const { return parties_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::uint32_t x) const { return values_[x]; }

  // sum_x |g(x)|.
  double total_weight() const { return total_weight_; }
  // g(x)/|g(x)|; 0 where g(x) = 0.
  int sign(std::uint32_t x) const;
  // True when every entry is an integer small enough for exact int64 sums.
  bool is_integral() const { return integral_; }

  GTable negated() const;
  // Relabels one party's settings, x_i -> 1 - x_i.
  GTable relabeled(int party) const;

  friend bool operator==(const GTable&, const GTable&) = default;

 private:
  int parties_;
  std::vector<double> values_;
  double total_weight_ = 0.0;
  bool integral_ = false;
};

/// S(s_1, ..., s_n) = +-1. Entry j corresponds to s with bit b_i = (s_i + 1)/2,
/// party 1 most significant.
class SignFunction {
 public:
  SignFunction(int parties, std::vector<int> entries);

  // Bit j of the mask is (S + 1)/2 at s-index j.
  static SignFunction from_mask(int parties, std::uint64_t mask);
  // Hexadecimal mask of 2^n bits, optional "0x" prefix.
  static SignFunction from_hex(int parties, const std::string& hex);

  int parties() const { return parties_; }
  std::span<const int> entries() const { return entries_; }
  int operator[](std::uint32_t s_index) const { return entries_[s_index]; }
  // Value at an explicit s vector with entries +-1.
  int at(std::span<const int> s) const;

  std::string to_hex() const;

 private:
  int parties_;
  std::vector<int> entries_;
};

/// One local response pair (a_i(0), a_i(1)) per party.
class DeterministicStrategy {
 public:
  explicit DeterministicStrategy(std::vector<std::array<int, 2>> responses);

  // Strategy index: bit 2i + x_i set <=> a_i(x_i) = -1, party i 0-based.
  static DeterministicStrategy from_index(int parties, std::uint64_t index);

  int parties() const { return static_cast<int>(responses_.size()); }
  int response(int party, int setting) const {
    return responses_.at(static_cast<std::size_t>(party)).at(static_cast<std::size_t>(setting));
  }
  std::span<const std::array<int, 2>> responses() const { return responses_; }
  std::uint64_t index() const;
  // prod_i a_i(x_i).
  int product(std::uint32_t x) const;
  DeterministicStrategy flipped(int party) const;
  // Correlation tensor of this strategy: entries prod_i a_i(x_i).
  qsim::CorrelationTensor tensor() const;

 private:
  std::vector<std::array<int, 2>> responses_;
};

/// Deterministic strategies mixed by shared randomness.
class StrategyEnsemble {
 public:
  StrategyEnsemble(std::vector<DeterministicStrategy> members, std::vector<double> weights);
  explicit StrategyEnsemble(DeterministicStrategy single);

  int parties() const { return members_.front().parties(); }
  std::span<const DeterministicStrategy> members() const { return members_; }
  // Normalized to sum to one.
  std::span<const double> weights() const { return weights_; }
  // Convex mixture of member tensors.
  qsim::CorrelationTensor tensor() const;

 private:
  std::vector<DeterministicStrategy> members_;
  std::vector<double> weights_;
};

struct LhvResult {
  double bound;
  DeterministicStrategy argmax;
};

struct BellInequality {
  GTable g;
  double classical_bound;

  // Bound computed by exhaustive enumeration.
  static BellInequality from_enumeration(GTable g, int cap = kDefaultLhvCap);
};

struct Violation {
  bool violated;
  double margin;  // bell_lhs - bound
};

// g(x) = sum_s S(s) prod_i s_i^{x_i}.
GTable wwzb_g(const SignFunction& sign);
// Same transform for arbitrary real coefficients c(s); used for definitions
// whose coefficient table contains zeros.
GTable walsh_synthesis(int parties, std::span<const double> coefficients);

// sqrt(2) cos((s_1+...+s_n) pi/4) for odd n, cos(...) for even n. Entries lie
// in {-1, 0, 1}; for even n some are 0, so this is not a SignFunction there.
std::vector<double> mermin_coefficients(int parties);
// sqrt(2) cos(pi/4 + (s_1+...+s_n) pi/4), n even.
SignFunction ardehali_sign(int parties);

// Closed forms: sqrt(2^{n+1}) cos(pi/2 sum x) for odd n, sqrt(2^n) cos(...)
// for even n. Requires n >= 2.
GTable mermin_g(int parties);
// sqrt(2^{n+1}) cos(pi/2 sum x + pi/4). Requires even n >= 2.
GTable ardehali_g(int parties);

// max over all 4^n deterministic strategies of sum_x g(x) prod_i a_i(x_i).
// Ties go to the lowest strategy index. `threads` = 0 uses the default
// thread count (BELLCC_THREADS or 1).
LhvResult lhv_bound(const GTable& g, int cap = kDefaultLhvCap, unsigned threads = 0);

double bell_lhs(const GTable& g, const qsim::CorrelationTensor& correlations);
double bell_value(const GTable& g, const StrategyEnsemble& ensemble);

// Strict: a Bell value within kBoundarySlack * max(1, sum|g|) of the bound is
// reported as not violated.
Violation violated(const BellInequality& inequality, const qsim::CorrelationTensor& correlations);

struct OptimizeOptions {
  int restarts = 32;
  double tolerance = 1e-10;  // relative improvement per sweep
  int max_sweeps = 5000;
  std::uint64_t seed = 0x5eed;
};

struct OptimizeResult {
  qsim::MeasurementSettings settings;
  double value;
  bool converged;
};

// Coordinate ascent over the 2n Bloch vectors with random restarts. Each step
// replaces one observable by the normalized gradient of the (linear) Bell
// value in that observable, so the value never decreases.
OptimizeResult optimize_settings(const qsim::PureState& state, const GTable& g,
                                 const OptimizeOptions& options = {});

bool is_factorable(const SignFunction& sign);

struct WwzbMember {
  std::uint64_t index;  // sign-function mask
  SignFunction sign;
  GTable g;
  bool factorable;
};

// Visits all 2^{2^n} sign functions in mask order. Throws CapacityError for
// n > kMaxFamilyParties.
void for_each_wwzb(int parties, const std::function<void(const WwzbMember&)>& visit);
std::vector<WwzbMember> enumerate_wwzb(int parties);

// Thread count from BELLCC_THREADS, defaulting to 1.
unsigned default_threads();

}  // namespace bellcc::ineq
