#include "bellcc/inequalities.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "bellcc/errors.hpp"

namespace bellcc::ineq {

namespace {

constexpr int kMaxTableParties = 20;

void check_table_parties(int parties) {
  if (parties < 1 || parties > kMaxTableParties) {
    throw SizeError("party count " + std::to_string(parties) + " outside [1, " +
                    std::to_string(kMaxTableParties) + "]");
  }
}

std::size_t table_size(int parties) { return std::size_t{1} << parties; }

// prod_i s_i^{x_i} with s and x packed the same way: s_i = -1 <=> bit 0.
int character(std::uint32_t s_index, std::uint32_t x, std::uint32_t full_mask) {
  const std::uint32_t minus = (~s_index) & full_mask & x;
  return (std::popcount(minus) & 1) ? -1 : 1;
}

void check_dims(const GTable& g, int parties) {
  if (g.parties() != parties) {
    throw DimensionError("g has " + std::to_string(g.parties()) + " parties, operand has " +
                         std::to_string(parties));
  }
}

// Bit mask over a strategy index selecting a_i(x_i) for every party.
std::uint64_t strategy_mask(std::uint32_t x, int parties) {
  std::uint64_t mask = 0;
  for (int i = 0; i < parties; ++i) {
    mask |= std::uint64_t{1} << (2 * i + qsim::party_bit(x, parties, i));
  }
  return mask;
}

struct ChunkBest {
  double value;
  std::uint64_t index;
};

template <typename Weight>
ChunkBest scan_strategies(std::span<const Weight> weights, std::span<const std::uint64_t> masks,
                          std::uint64_t begin, std::uint64_t end) {
  ChunkBest best{0.0, begin};
  bool first = true;
  Weight best_value{};
  for (std::uint64_t s = begin; s < end; ++s) {
    Weight sum{};
    for (std::size_t x = 0; x < weights.size(); ++x) {
      sum += (std::popcount(s & masks[x]) & 1) ? -weights[x] : weights[x];
    }
    if (first || sum > best_value) {
      best_value = sum;
      best.index = s;
      first = false;
    }
  }
  best.value = static_cast<double>(best_value);
  return best;
}

template <typename Weight>
ChunkBest parallel_scan(std::span<const Weight> weights, std::span<const std::uint64_t> masks,
                        std::uint64_t total, unsigned threads) {
  threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, total));
  std::vector<ChunkBest> partial(threads);
  const std::uint64_t chunk = (total + threads - 1) / threads;
  auto work = [&](unsigned t) {
    const std::uint64_t begin = std::min<std::uint64_t>(total, t * chunk);
    const std::uint64_t end = std::min<std::uint64_t>(total, begin + chunk);
    partial[t] = begin < end ? scan_strategies(weights, masks, begin, end)
                             : ChunkBest{-std::numeric_limits<double>::infinity(), total};
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  // Chunks are in index order, so a strict comparison keeps the lowest index.
  ChunkBest best = partial.front();
  for (const auto& p : partial) {
    if (p.value > best.value) best = p;
  }
  return best;
}

// Applies a Pauli operator (0 = X, 1 = Y, 2 = Z) to one qubit.
std::vector<qsim::Complex> apply_pauli(std::span<const qsim::Complex> phi, int parties, int party,
                                       int axis) {
  const std::size_t bit = std::size_t{1} << qsim::party_shift(parties, party);
  std::vector<qsim::Complex> out(phi.size());
  const qsim::Complex i_unit(0.0, 1.0);
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const bool one = (k & bit) != 0;
    switch (axis) {
      case 0: out[k] = phi[k ^ bit]; break;
      case 1: out[k] = (one ? i_unit : -i_unit) * phi[k ^ bit]; break;
      default: out[k] = one ? -phi[k] : phi[k]; break;
    }
  }
  return out;
}

double real_inner(std::span<const qsim::Complex> a, std::span<const qsim::Complex> b) {
  double total = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) total += (std::conj(a[k]) * b[k]).real();
  return total;
}

using BlochPairs = std::vector<std::array<qsim::Vec3, 2>>;

qsim::MeasurementSettings to_settings(const BlochPairs& vectors) {
  std::vector<qsim::MeasurementSettings::PartyPair> pairs;
  pairs.reserve(vectors.size());
  for (const auto& [v0, v1] : vectors) {
    pairs.push_back({qsim::BlochObservable::normalized(v0), qsim::BlochObservable::normalized(v1)});
  }
  return qsim::MeasurementSettings(std::move(pairs));
}

double settings_value(const qsim::PureState& state, const GTable& g, const BlochPairs& vectors) {
  return bell_lhs(g, qsim::correlation_tensor(state, to_settings(vectors), 1.0));
}

// Gradient of the Bell value with respect to the Bloch vector of (party, setting).
qsim::Vec3 observable_gradient(const qsim::PureState& state, const GTable& g,
                               const BlochPairs& vectors, int party, int setting) {
  const int n = state.parties();
  std::vector<qsim::Complex> phi(state.dimension());
  std::vector<qsim::Matrix2> ops(static_cast<std::size_t>(n));
  for (std::uint32_t x = 0; x < g.size(); ++x) {
    if (qsim::party_bit(x, n, party) != setting || g[x] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      const auto& v = vectors[static_cast<std::size_t>(j)][static_cast<std::size_t>(qsim::party_bit(x, n, j))];
      ops[static_cast<std::size_t>(j)] =
          j == party ? qsim::kIdentity : qsim::BlochObservable::normalized(v).matrix();
    }
    const auto term = qsim::apply_product(state, ops);
    for (std::size_t k = 0; k < phi.size(); ++k) phi[k] += g[x] * term[k];
  }
  qsim::Vec3 grad{};
  for (int axis = 0; axis < 3; ++axis) {
    grad[static_cast<std::size_t>(axis)] =
        real_inner(state.amplitudes(), apply_pauli(phi, n, party, axis));
  }
  return grad;
}

}  // namespace

// ---------------------------------------------------------------------------
// GTable

GTable::GTable(int parties, std::vector<double> values) : parties_(parties), values_(std::move(values)) {
  check_table_parties(parties);
  if (values_.size() != table_size(parties)) {
    throw SizeError("g table for " + std::to_string(parties) + " parties needs " +
                    std::to_string(table_size(parties)) + " values, got " +
                    std::to_string(values_.size()));
  }
  integral_ = true;
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("g table entries must be finite");
    total_weight_ += std::abs(v);
    if (v != std::nearbyint(v) || std::abs(v) > 1e12) integral_ = false;
  }
  if (!(total_weight_ > 0.0)) throw std::invalid_argument("g table must have a nonzero entry");
}

int GTable::sign(std::uint32_t x) const {
  const double v = values_.at(x);
  return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
}

GTable GTable::negated() const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [](double v) { return -v; });
  return GTable(parties_, std::move(out));
}

GTable GTable::relabeled(int party) const {
  if (party < 0 || party >= parties_) throw DimensionError("party index out of range");
  const std::uint32_t bit = std::uint32_t{1} << qsim::party_shift(parties_, party);
  std::vector<double> out(values_.size());
  for (std::uint32_t x = 0; x < values_.size(); ++x) out[x ^ bit] = values_[x];
  return GTable(parties_, std::move(out));
}

// ---------------------------------------------------------------------------
// SignFunction

SignFunction::SignFunction(int parties, std::vector<int> entries)
    : parties_(parties), entries_(std::move(entries)) {
  check_table_parties(parties);
  if (entries_.size() != table_size(parties)) {
    throw SizeError("sign function needs 2^n entries");
  }
  for (int e : entries_) {
    if (e != 1 && e != -1) throw std::invalid_argument("sign function entries must be +1 or -1");
  }
}

SignFunction SignFunction::from_mask(int parties, std::uint64_t mask) {
  if (parties < 1 || parties > 6) throw SizeError("integer masks cover at most 6 parties");
  const std::size_t size = table_size(parties);
  if (size < 64 && (mask >> size) != 0) throw std::invalid_argument("mask has bits beyond 2^n");
  std::vector<int> entries(size);
  for (std::size_t j = 0; j < size; ++j) entries[j] = ((mask >> j) & 1u) ? 1 : -1;
  return SignFunction(parties, std::move(entries));
}

SignFunction SignFunction::from_hex(int parties, const std::string& hex) {
  check_table_parties(parties);
  std::string digits = hex;
  if (digits.starts_with("0x") || digits.starts_with("0X")) digits = digits.substr(2);
  if (digits.empty()) throw ParseError("empty hexadecimal mask");
  const std::size_t size = table_size(parties);
  std::vector<int> entries(size, -1);
  std::size_t bit = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it, bit += 4) {
    const char c = *it;
    int nibble;
    if (c >= '0' && c <= '9') nibble = c - '0';
    else if (c >= 'a' && c <= 'f') nibble = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') nibble = c - 'A' + 10;
    else throw ParseError(std::string("invalid hexadecimal digit '") + c + "' in mask");
    for (int k = 0; k < 4; ++k) {
      if (((nibble >> k) & 1) == 0) continue;
      if (bit + static_cast<std::size_t>(k) >= size) {
        throw ParseError("mask has bits beyond 2^" + std::to_string(parties));
      }
      entries[bit + static_cast<std::size_t>(k)] = 1;
    }
  }
  return SignFunction(parties, std::move(entries));
}

int SignFunction::at(std::span<const int> s) const {
  if (static_cast<int>(s.size()) != parties_) throw DimensionError("s vector length mismatch");
  std::uint32_t index = 0;
  for (int si : s) index = (index << 1) | (si > 0 ? 1u : 0u);
  return entries_[index];
}

std::string SignFunction::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t nibbles = std::max<std::size_t>(1, (entries_.size() + 3) / 4);
  std::string out(nibbles, '0');
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    if (entries_[j] != 1) continue;
    auto& c = out[nibbles - 1 - j / 4];
    const int nibble = static_cast<int>(std::string_view(kDigits).find(c)) | (1 << (j % 4));
    c = kDigits[nibble];
  }
  return "0x" + out;
}

// ---------------------------------------------------------------------------
// Strategies

DeterministicStrategy::DeterministicStrategy(std::vector<std::array<int, 2>> responses)
    : responses_(std::move(responses)) {
  if (responses_.empty()) throw SizeError("strategy needs at least one party");
  for (const auto& pair : responses_) {
    for (int a : pair) {
      if (a != 1 && a != -1) throw std::invalid_argument("strategy responses must be +1 or -1");
    }
  }
}

DeterministicStrategy DeterministicStrategy::from_index(int parties, std::uint64_t index) {
  if (parties < 1 || parties > 31) throw SizeError("strategy index covers at most 31 parties");
  std::vector<std::array<int, 2>> responses(static_cast<std::size_t>(parties));
  for (int i = 0; i < parties; ++i) {
    for (int x = 0; x < 2; ++x) {
      responses[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)] =
          ((index >> (2 * i + x)) & 1u) ? -1 : 1;
    }
  }
  return DeterministicStrategy(std::move(responses));
}

std::uint64_t DeterministicStrategy::index() const {
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < responses_.size(); ++i) {
    for (std::size_t x = 0; x < 2; ++x) {
      if (responses_[i][x] == -1) index |= std::uint64_t{1} << (2 * i + x);
    }
  }
  return index;
}

int DeterministicStrategy::product(std::uint32_t x) const {
  const int n = parties();
  int p = 1;
  for (int i = 0; i < n; ++i) p *= response(i, qsim::party_bit(x, n, i));
  return p;
}

DeterministicStrategy DeterministicStrategy::flipped(int party) const {
  auto responses = responses_;
  for (auto& a : responses.at(static_cast<std::size_t>(party))) a = -a;
  return DeterministicStrategy(std::move(responses));
}

qsim::CorrelationTensor DeterministicStrategy::tensor() const {
  std::vector<double> values(table_size(parties()));
  for (std::uint32_t x = 0; x < values.size(); ++x) values[x] = product(x);
  return qsim::CorrelationTensor(parties(), std::move(values));
}

StrategyEnsemble::StrategyEnsemble(std::vector<DeterministicStrategy> members,
                                   std::vector<double> weights)
    : members_(std::move(members)), weights_(std::move(weights)) {
  if (members_.empty()) throw std::invalid_argument("strategy ensemble is empty");
  if (members_.size() != weights_.size()) {
    throw std::invalid_argument("one weight per ensemble member required");
  }
  double total = 0.0;
  for (const auto& m : members_) {
    if (m.parties() != members_.front().parties()) {
      throw DimensionError("ensemble members disagree on party count");
    }
  }
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("ensemble weights must be >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("ensemble weights sum to zero");
  for (auto& w : weights_) w /= total;
}

StrategyEnsemble::StrategyEnsemble(DeterministicStrategy single)
    : StrategyEnsemble(std::vector<DeterministicStrategy>{std::move(single)}, {1.0}) {}

qsim::CorrelationTensor StrategyEnsemble::tensor() const {
  std::vector<double> values(table_size(parties()), 0.0);
  for (std::size_t m = 0; m < members_.size(); ++m) {
    for (std::uint32_t x = 0; x < values.size(); ++x) {
      values[x] += weights_[m] * members_[m].product(x);
    }
  }
  for (auto& v : values) v = std::clamp(v, -1.0, 1.0);
  return qsim::CorrelationTensor(parties(), std::move(values));
}

// ---------------------------------------------------------------------------
// Weight tables

GTable walsh_synthesis(int parties, std::span<const double> coefficients) {
  check_table_parties(parties);
  if (coefficients.size() != table_size(parties)) throw SizeError("need 2^n coefficients");
  const auto full = static_cast<std::uint32_t>(table_size(parties) - 1);
  std::vector<double> g(table_size(parties), 0.0);
  for (std::uint32_t x = 0; x < g.size(); ++x) {
    for (std::uint32_t s = 0; s < g.size(); ++s) g[x] += coefficients[s] * character(s, x, full);
  }
  return GTable(parties, std::move(g));
}

GTable wwzb_g(const SignFunction& sign) {
  std::vector<double> coefficients(sign.entries().begin(), sign.entries().end());
  return walsh_synthesis(sign.parties(), coefficients);
}

namespace {

int s_sum(std::uint32_t s_index, int parties) {
  // s_i = 2 b_i - 1.
  return 2 * std::popcount(s_index) - parties;
}

int x_sum(std::uint32_t x) { return std::popcount(x); }

}  // namespace

std::vector<double> mermin_coefficients(int parties) {
  if (parties < 2) throw SizeError("Mermin weights need n >= 2");
  check_table_parties(parties);
  const double scale = (parties % 2 == 1) ? std::numbers::sqrt2 : 1.0;
  std::vector<double> c(table_size(parties));
  for (std::uint32_t s = 0; s < c.size(); ++s) {
    c[s] = std::nearbyint(scale * std::cos(s_sum(s, parties) * std::numbers::pi / 4.0));
  }
  return c;
}

SignFunction ardehali_sign(int parties) {
  if (parties < 2 || parties % 2 != 0) {
    throw std::invalid_argument("Ardehali weights need an even party count, got " +
                                std::to_string(parties));
  }
  check_table_parties(parties);
  std::vector<int> entries(table_size(parties));
  for (std::uint32_t s = 0; s < entries.size(); ++s) {
    const double v = std::numbers::sqrt2 *
                     std::cos(std::numbers::pi / 4.0 + s_sum(s, parties) * std::numbers::pi / 4.0);
    entries[s] = static_cast<int>(std::nearbyint(v));
  }
  return SignFunction(parties, std::move(entries));
}

GTable mermin_g(int parties) {
  if (parties < 2) throw SizeError("Mermin weights need n >= 2");
  check_table_parties(parties);
  const int exponent = (parties % 2 == 1) ? parties + 1 : parties;
  const double amplitude = std::sqrt(std::ldexp(1.0, exponent));
  std::vector<double> g(table_size(parties));
  for (std::uint32_t x = 0; x < g.size(); ++x) {
    g[x] = std::nearbyint(amplitude * std::cos(std::numbers::pi / 2.0 * x_sum(x)));
  }
  return GTable(parties, std::move(g));
}

GTable ardehali_g(int parties) {
  if (parties < 2 || parties % 2 != 0) {
    throw std::invalid_argument("Ardehali weights need an even party count, got " +
                                std::to_string(parties));
  }
  check_table_parties(parties);
  const double amplitude = std::sqrt(std::ldexp(1.0, parties + 1));
  std::vector<double> g(table_size(parties));
  for (std::uint32_t x = 0; x < g.size(); ++x) {
    g[x] = std::nearbyint(amplitude *
                          std::cos(std::numbers::pi / 2.0 * x_sum(x) + std::numbers::pi / 4.0));
  }
  return GTable(parties, std::move(g));
}

// ---------------------------------------------------------------------------
// Bounds and Bell values

unsigned default_threads() {
  if (const char* env = std::getenv("BELLCC_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return static_cast<unsigned>(parsed);
  }
  return 1;
}

LhvResult lhv_bound(const GTable& g, int cap, unsigned threads) {
  const int n = g.parties();
  if (n > cap) {
    throw CapacityError("exhaustive LHV search for " + std::to_string(n) +
                        " parties exceeds the cap of " + std::to_string(cap) +
                        " (raise it with --lhv-cap)");
  }
  if (threads == 0) threads = default_threads();
  std::vector<std::uint64_t> masks(g.size());
  for (std::uint32_t x = 0; x < g.size(); ++x) masks[x] = strategy_mask(x, n);
  const std::uint64_t total = std::uint64_t{1} << (2 * n);

  ChunkBest best;
  if (g.is_integral()) {
    std::vector<std::int64_t> weights(g.size());
    for (std::uint32_t x = 0; x < g.size(); ++x) weights[x] = static_cast<std::int64_t>(g[x]);
    best = parallel_scan<std::int64_t>(weights, masks, total, threads);
  } else {
    best = parallel_scan<double>(g.values(), masks, total, threads);
  }
  return {best.value, DeterministicStrategy::from_index(n, best.index)};
}

double bell_lhs(const GTable& g, const qsim::CorrelationTensor& correlations) {
  check_dims(g, correlations.parties());
  double total = 0.0;
  for (std::uint32_t x = 0; x < g.size(); ++x) total += g[x] * correlations[x];
  return total;
}

double bell_value(const GTable& g, const StrategyEnsemble& ensemble) {
  return bell_lhs(g, ensemble.tensor());
}

BellInequality BellInequality::from_enumeration(GTable g, int cap) {
  const double bound = lhv_bound(g, cap).bound;
  return BellInequality{std::move(g), bound};
}

Violation violated(const BellInequality& inequality, const qsim::CorrelationTensor& correlations) {
  const double margin = bell_lhs(inequality.g, correlations) - inequality.classical_bound;
  const double slack = kBoundarySlack * std::max(1.0, inequality.g.total_weight());
  return {margin > slack, margin};
}

// ---------------------------------------------------------------------------
// Settings optimizer

OptimizeResult optimize_settings(const qsim::PureState& state, const GTable& g,
                                 const OptimizeOptions& options) {
  check_dims(g, state.parties());
  const int n = state.parties();
  RngStream rng(options.seed);

  std::optional<OptimizeResult> best;
  for (int restart = 0; restart < std::max(1, options.restarts); ++restart) {
    BlochPairs vectors(static_cast<std::size_t>(n));
    for (auto& pair : vectors) {
      for (auto& v : pair) v = qsim::random_observable(rng).vector();
    }
    double value = settings_value(state, g, vectors);
    bool converged = false;
    for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
      for (int party = 0; party < n; ++party) {
        for (int setting = 0; setting < 2; ++setting) {
          const auto grad = observable_gradient(state, g, vectors, party, setting);
          const double len = std::sqrt(grad[0] * grad[0] + grad[1] * grad[1] + grad[2] * grad[2]);
          if (len > 1e-14) {
            vectors[static_cast<std::size_t>(party)][static_cast<std::size_t>(setting)] = {
                grad[0] / len, grad[1] / len, grad[2] / len};
          }
        }
      }
      const double next = settings_value(state, g, vectors);
      const double gain = next - value;
      value = next;
      if (gain <= options.tolerance * std::max(1.0, std::abs(value))) {
        converged = true;
        break;
      }
    }
    if (!best || value > best->value) {
      best = OptimizeResult{to_settings(vectors), value, converged};
    }
  }
  return *best;
}

// ---------------------------------------------------------------------------
// Sign-function family

bool is_factorable(const SignFunction& sign) {
  // Search all products of single-party sign functions: each S_i is one of
  // +1, -1, s, -s, encoded as (value at s_i = -1, value at s_i = +1).
  const int n = sign.parties();
  if (n > 10) throw CapacityError("factorability search is limited to 10 parties");
  const std::uint64_t choices = std::uint64_t{1} << (2 * n);
  const auto entries = sign.entries();
  for (std::uint64_t c = 0; c < choices; ++c) {
    bool match = true;
    for (std::uint32_t s = 0; s < entries.size() && match; ++s) {
      int product = 1;
      for (int i = 0; i < n; ++i) {
        const int b = qsim::party_bit(s, n, i);
        if ((c >> (2 * i + b)) & 1u) product = -product;
      }
      match = product == entries[s];
    }
    if (match) return true;
  }
  return false;
}

void for_each_wwzb(int parties, const std::function<void(const WwzbMember&)>& visit) {
  if (parties < 1 || parties > kMaxFamilyParties) {
    throw CapacityError("sign-function enumeration supports 1.." +
                        std::to_string(kMaxFamilyParties) + " parties, got " +
                        std::to_string(parties));
  }
  const std::uint64_t count = std::uint64_t{1} << table_size(parties);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    auto sign = SignFunction::from_mask(parties, mask);
    auto g = wwzb_g(sign);
    const bool factorable = is_factorable(sign);
    visit(WwzbMember{mask, std::move(sign), std::move(g), factorable});
  }
}

std::vector<WwzbMember> enumerate_wwzb(int parties) {
  std::vector<WwzbMember> members;
  for_each_wwzb(parties, [&](const WwzbMember& m) { members.push_back(m); });
  return members;
}

}  // namespace bellcc::ineq
