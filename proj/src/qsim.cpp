#include "bellcc/qsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bellcc/errors.hpp"

namespace bellcc::qsim {

namespace {

constexpr double kNormTolerance = 1e-12;

void check_parties(int parties, int cap) {
  if (parties < 1 || parties > cap) {
    throw SizeError("party count " + std::to_string(parties) + " outside [1, " +
                    std::to_string(cap) + "]");
  }
}

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

// In-place application of a 2x2 matrix to one qubit of a state vector.
void apply_single(std::vector<Complex>& amps, int parties, int party, const Matrix2& m) {
  const std::size_t stride = std::size_t{1} << party_shift(parties, party);
  for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
    for (std::size_t k = base; k < base + stride; ++k) {
      const Complex a0 = amps[k];
      const Complex a1 = amps[k + stride];
      amps[k] = m[0] * a0 + m[1] * a1;
      amps[k + stride] = m[2] * a0 + m[3] * a1;
    }
  }
}

void check_same_parties(const PureState& state, const MeasurementSettings& settings) {
  if (state.parties() != settings.parties()) {
    throw DimensionError("state has " + std::to_string(state.parties()) + " parties, settings have " +
                         std::to_string(settings.parties()));
  }
}

void check_setting_index(std::uint32_t x, int parties) {
  if (x >= (std::uint32_t{1} << parties)) {
    throw DimensionError("setting index " + std::to_string(x) + " out of range for " +
                         std::to_string(parties) + " parties");
  }
}

}  // namespace

PureState::PureState(int parties, std::vector<Complex> amplitudes, int cap)
    : parties_(parties), amplitudes_(std::move(amplitudes)) {
  check_parties(parties, cap);
  if (amplitudes_.size() != (std::size_t{1} << parties)) {
    throw SizeError("expected 2^" + std::to_string(parties) + " amplitudes, got " +
                    std::to_string(amplitudes_.size()));
  }
  double norm = 0.0;
  for (const auto& a : amplitudes_) norm += std::norm(a);
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw std::invalid_argument("state is not normalized (norm^2 = " + std::to_string(norm) + ")");
  }
}

BlochObservable::BlochObservable(const Vec3& vector) : vector_(vector) {
  if (std::abs(norm3(vector) - 1.0) > kNormTolerance) {
    throw std::invalid_argument("Bloch vector must have unit length");
  }
}

BlochObservable BlochObservable::normalized(const Vec3& vector) {
  const double len = norm3(vector);
  if (!(len > 0.0)) throw std::invalid_argument("cannot normalize a zero Bloch vector");
  return BlochObservable({vector[0] / len, vector[1] / len, vector[2] / len});
}

BlochObservable BlochObservable::equatorial(double phi) {
  return BlochObservable({std::cos(phi), std::sin(phi), 0.0});
}

Matrix2 BlochObservable::matrix() const {
  const auto [x, y, z] = vector_;
  return {Complex(z, 0.0), Complex(x, -y), Complex(x, y), Complex(-z, 0.0)};
}

Matrix2 BlochObservable::eigenbasis_rows() const {
  const auto [x, y, z] = vector_;
  // +1 eigenvector: (1 + z, x + iy), or (x - iy, 1 - z) near the south pole.
  Complex p0, p1;
  if (z > -0.5) {
    p0 = Complex(1.0 + z, 0.0);
    p1 = Complex(x, y);
  } else {
    p0 = Complex(x, -y);
    p1 = Complex(1.0 - z, 0.0);
  }
  const double len = std::sqrt(std::norm(p0) + std::norm(p1));
  p0 /= len;
  p1 /= len;
  // -1 eigenvector: (-conj(p1), conj(p0)).
  const Complex m0 = -std::conj(p1);
  const Complex m1 = std::conj(p0);
  return {std::conj(p0), std::conj(p1), std::conj(m0), std::conj(m1)};
}

MeasurementSettings::MeasurementSettings(std::vector<PartyPair> pairs) : pairs_(std::move(pairs)) {
  if (pairs_.empty()) throw SizeError("measurement settings need at least one party");
}

MeasurementSettings MeasurementSettings::equatorial(std::span<const std::array<double, 2>> angles) {
  std::vector<PartyPair> pairs;
  pairs.reserve(angles.size());
  for (const auto& [phi0, phi1] : angles) {
    pairs.push_back({BlochObservable::equatorial(phi0), BlochObservable::equatorial(phi1)});
  }
  return MeasurementSettings(std::move(pairs));
}

MeasurementSettings MeasurementSettings::uniform(int parties, const BlochObservable& setting0,
                                                 const BlochObservable& setting1) {
  if (parties < 1) throw SizeError("party count must be positive");
  return MeasurementSettings(
      std::vector<PartyPair>(static_cast<std::size_t>(parties), PartyPair{setting0, setting1}));
}

CorrelationTensor::CorrelationTensor(int parties, std::vector<double> values, double visibility)
    : parties_(parties), values_(std::move(values)), visibility_(visibility) {
  if (parties < 1 || parties > 30 || values_.size() != (std::size_t{1} << parties)) {
    throw SizeError("correlation tensor needs 2^n entries");
  }
  if (!(visibility >= 0.0 && visibility <= 1.0)) {
    throw std::invalid_argument("visibility must lie in [0, 1]");
  }
  for (double v : values_) {
    if (!(std::abs(v) <= 1.0 + 1e-12)) {
      throw std::invalid_argument("correlation value outside [-1, 1]: " + std::to_string(v));
    }
  }
}

OutcomeDistribution::OutcomeDistribution(int parties, std::vector<double> probabilities)
    : parties_(parties), probabilities_(std::move(probabilities)) {
  if (parties < 1 || parties > 30 || probabilities_.size() != (std::size_t{1} << parties)) {
    throw SizeError("outcome distribution needs 2^n entries");
  }
  double total = 0.0;
  for (double p : probabilities_) {
    if (!(p >= 0.0)) throw std::invalid_argument("negative outcome probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("outcome probabilities do not sum to 1");
  }
}

double OutcomeDistribution::correlation_moment() const {
  double moment = 0.0;
  for (std::size_t a = 0; a < probabilities_.size(); ++a) {
    const bool odd = (std::popcount(static_cast<std::uint32_t>(a)) & 1) != 0;
    moment += odd ? -probabilities_[a] : probabilities_[a];
  }
  return moment;
}

PureState ghz(int parties, int cap) {
  check_parties(parties, cap);
  std::vector<Complex> amps(std::size_t{1} << parties);
  amps.front() = Complex(1.0 / std::sqrt(2.0), 0.0);
  amps.back() += Complex(1.0 / std::sqrt(2.0), 0.0);
  return PureState(parties, std::move(amps), cap);
}

PureState basis_state(int parties, std::uint64_t index, int cap) {
  check_parties(parties, cap);
  std::vector<Complex> amps(std::size_t{1} << parties);
  amps.at(index) = 1.0;
  return PureState(parties, std::move(amps), cap);
}

PureState random_state(int parties, RngStream& rng, int cap) {
  check_parties(parties, cap);
  std::vector<Complex> amps(std::size_t{1} << parties);
  double norm = 0.0;
  for (auto& a : amps) {
    const double re = rng.normal();
    const double im = rng.normal();
    a = Complex(re, im);
    norm += re * re + im * im;
  }
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& a : amps) a *= scale;
  return PureState(parties, std::move(amps), cap);
}

BlochObservable random_observable(RngStream& rng) {
  for (;;) {
    const Vec3 v{rng.normal(), rng.normal(), rng.normal()};
    if (norm3(v) > 1e-6) return BlochObservable::normalized(v);
  }
}

MeasurementSettings random_settings(int parties, RngStream& rng) {
  std::vector<MeasurementSettings::PartyPair> pairs;
  for (int i = 0; i < parties; ++i) {
    auto first = random_observable(rng);
    auto second = random_observable(rng);
    pairs.push_back({first, second});
  }
  return MeasurementSettings(std::move(pairs));
}

std::vector<Complex> apply_product(const PureState& state, std::span<const Matrix2> operators) {
  const int n = state.parties();
  if (static_cast<int>(operators.size()) != n) {
    throw DimensionError("need one operator per party");
  }
  std::vector<Complex> work(state.amplitudes().begin(), state.amplitudes().end());
  for (int i = 0; i < n; ++i) apply_single(work, n, i, operators[static_cast<std::size_t>(i)]);
  return work;
}

Complex expectation(const PureState& state, std::span<const Matrix2> operators) {
  const auto work = apply_product(state, operators);
  Complex total = 0.0;
  const auto amps = state.amplitudes();
  for (std::size_t k = 0; k < work.size(); ++k) total += std::conj(amps[k]) * work[k];
  return total;
}

double correlation(const PureState& state, const MeasurementSettings& settings, std::uint32_t x) {
  check_same_parties(state, settings);
  const int n = state.parties();
  check_setting_index(x, n);
  std::vector<Matrix2> ops;
  ops.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ops.push_back(settings.observable(i, party_bit(x, n, i)).matrix());
  // Hermitian product: the imaginary part is rounding noise.
  return std::clamp(expectation(state, ops).real(), -1.0, 1.0);
}

CorrelationTensor correlation_tensor(const PureState& state, const MeasurementSettings& settings,
                                     double visibility) {
  check_same_parties(state, settings);
  if (!(visibility >= 0.0 && visibility <= 1.0)) {
    throw std::invalid_argument("visibility must lie in [0, 1]");
  }
  const int n = state.parties();
  std::vector<double> values(std::size_t{1} << n);
  for (std::uint32_t x = 0; x < values.size(); ++x) {
    values[x] = visibility * correlation(state, settings, x);
  }
  return CorrelationTensor(n, std::move(values), visibility);
}

OutcomeDistribution outcome_distribution(const PureState& state,
                                         const MeasurementSettings& settings, std::uint32_t x) {
  check_same_parties(state, settings);
  const int n = state.parties();
  check_setting_index(x, n);
  std::vector<Complex> work(state.amplitudes().begin(), state.amplitudes().end());
  for (int i = 0; i < n; ++i) {
    apply_single(work, n, i, settings.observable(i, party_bit(x, n, i)).eigenbasis_rows());
  }
  std::vector<double> probs(work.size());
  double total = 0.0;
  for (std::size_t k = 0; k < work.size(); ++k) {
    probs[k] = std::norm(work[k]);
    total += probs[k];
  }
  for (auto& p : probs) p /= total;
  return OutcomeDistribution(n, std::move(probs));
}

std::uint32_t sample_outcome_index(const OutcomeDistribution& dist, RngStream& rng) {
  const double u = rng.uniform();
  const auto probs = dist.probabilities();
  double cumulative = 0.0;
  std::uint32_t last_supported = 0;
  for (std::uint32_t a = 0; a < probs.size(); ++a) {
    if (probs[a] <= 0.0) continue;
    last_supported = a;
    cumulative += probs[a];
    if (u < cumulative) return a;
  }
  // Rounding left the cumulative sum just below 1.
  return last_supported;
}

std::vector<int> unpack_outcome(std::uint32_t outcome, int parties) {
  std::vector<int> a(static_cast<std::size_t>(parties));
  for (int i = 0; i < parties; ++i) a[static_cast<std::size_t>(i)] = party_bit(outcome, parties, i) ? -1 : 1;
  return a;
}

std::vector<int> sample_outcomes(const OutcomeDistribution& dist, RngStream& rng) {
  return unpack_outcome(sample_outcome_index(dist, rng), dist.parties());
}

}  // namespace bellcc::qsim
