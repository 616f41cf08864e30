#pragma once

// State-vector simulation of n qubits measured with local two-outcome
// observables.
//
// Index convention used throughout the library: party 1 owns the most
// significant bit. For a basis state b_1...b_n the amplitude index is
// sum_i b_i * 2^(n-i); the same packing is used for setting indices
// x = (x_1, ..., x_n) and for outcome indices (bit set <=> a_i = -1).

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "bellcc/rng.hpp"

namespace bellcc::qsim {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;
// Row-major 2x2 matrix {m00, m01, m10, m11}.
using Matrix2 = std::array<Complex, 4>;

inline constexpr int kDefaultPartyCap = 12;

// Bit position (from the least significant end) of party `party` (0-based).
inline constexpr unsigned party_shift(int parties, int party) {
  return static_cast<unsigned>(parties - 1 - party);
}

// Setting (or outcome) bit of `party` inside a packed index.
inline constexpr int party_bit(std::uint32_t index, int parties, int party) {
  return static_cast<int>((index >> party_shift(parties, party)) & 1u);
}

class PureState {
 public:
  // Throws SizeError when parties is outside [1, cap] or the amplitude count
  // is not 2^parties, std::invalid_argument when the norm is off by > 1e-12.
  PureState(int parties, std::vector<Complex> amplitudes, int cap = kDefaultPartyCap);

  int parties() const { return parties_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  Complex amplitude(std::size_t index) const { return amplitudes_.at(index); }

 private:
  int parties_;
  std::vector<Complex> amplitudes_;
};

// Traceless single-qubit observable v . sigma with |v| = 1, spectrum {+1, -1}.
class BlochObservable {
 public:
  // Throws std::invalid_argument unless |v| = 1 within 1e-12.
  explicit BlochObservable(const Vec3& vector);

  // Normalizes a nonzero vector first.
  static BlochObservable normalized(const Vec3& vector);
  // (cos phi, sin phi, 0).
  static BlochObservable equatorial(double phi);
  static BlochObservable pauli_x() { return BlochObservable({1.0, 0.0, 0.0}); }
  static BlochObservable pauli_y() { return BlochObservable({0.0, 1.0, 0.0}); }
  static BlochObservable pauli_z() { return BlochObservable({0.0, 0.0, 1.0}); }

  const Vec3& vector() const { return vector_; }
  Matrix2 matrix() const;
  // Rows are <+| and <-|: applying it to a qubit rotates the eigenbasis onto
  // the computational basis (outcome +1 -> |0>, -1 -> |1>).
  Matrix2 eigenbasis_rows() const;

 private:
  Vec3 vector_;
};

class MeasurementSettings {
 public:
  using PartyPair = std::array<BlochObservable, 2>;

  explicit MeasurementSettings(std::vector<PartyPair> pairs);

  // One (phi_0, phi_1) pair per party, equatorial observables.
  static MeasurementSettings equatorial(std::span<const std::array<double, 2>> angles);
  // Every party uses the same pair.
  static MeasurementSettings uniform(int parties, const BlochObservable& setting0,
                                     const BlochObservable& setting1);

  int parties() const { return static_cast<int>(pairs_.size()); }
  const BlochObservable& observable(int party, int setting) const {
    return pairs_.at(static_cast<std::size_t>(party)).at(static_cast<std::size_t>(setting));
  }
  std::span<const PartyPair> pairs() const { return pairs_; }

 private:
  std::vector<PartyPair> pairs_;
};

class CorrelationTensor {
 public:
  CorrelationTensor(int parties, std::vector<double> values, double visibility = 1.0);

  int parties() const { return parties_; }
  std::size_t size() const { return values_.size(); }
  double visibility() const { return visibility_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::uint32_t x) const { return values_[x]; }

 private:
  int parties_;
  std::vector<double> values_;
  double visibility_;
};

class OutcomeDistribution {
 public:
  OutcomeDistribution(int parties, std::vector<double> probabilities);

  int parties() const { return parties_; }
  std::span<const double> probabilities() const { return probabilities_; }
  double probability(std::uint32_t outcome) const { return probabilities_.at(outcome); }
  // sum_a (prod_i a_i) P(a).
  double correlation_moment() const;

 private:
  int parties_;
  std::vector<double> probabilities_;
};

PureState ghz(int parties, int cap = kDefaultPartyCap);
PureState basis_state(int parties, std::uint64_t index, int cap = kDefaultPartyCap);
// Independent complex Gaussian amplitudes, normalized.
PureState random_state(int parties, RngStream& rng, int cap = kDefaultPartyCap);
// Uniform on the Bloch sphere.
BlochObservable random_observable(RngStream& rng);
MeasurementSettings random_settings(int parties, RngStream& rng);

// (op_1 (x) ... (x) op_n)|psi>, one 2x2 operator per party.
std::vector<Complex> apply_product(const PureState& state, std::span<const Matrix2> operators);

inline constexpr Matrix2 kIdentity{Complex(1.0), Complex(0.0), Complex(0.0), Complex(1.0)};

// <psi| op_1 (x) ... (x) op_n |psi>, one 2x2 operator per party.
Complex expectation(const PureState& state, std::span<const Matrix2> operators);

// <psi| O^1_{x_1} (x) ... (x) O^n_{x_n} |psi>.
double correlation(const PureState& state, const MeasurementSettings& settings, std::uint32_t x);

// All 2^n correlations scaled by the visibility of a white-noise admixture.
CorrelationTensor correlation_tensor(const PureState& state, const MeasurementSettings& settings,
                                     double visibility = 1.0);

// P(a | x), computed by rotating every qubit into its observable's eigenbasis.
OutcomeDistribution outcome_distribution(const PureState& state,
                                         const MeasurementSettings& settings, std::uint32_t x);

// Packed outcome index drawn from the distribution (bit set <=> a_i = -1).
std::uint32_t sample_outcome_index(const OutcomeDistribution& dist, RngStream& rng);
// Outcome vector (a_1, ..., a_n) with entries in {+1, -1}.
std::vector<int> sample_outcomes(const OutcomeDistribution& dist, RngStream& rng);
std::vector<int> unpack_outcome(std::uint32_t outcome, int parties);

}  // namespace bellcc::qsim
