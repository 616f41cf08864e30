#pragma once

// Continuous-settings variant: party i receives an angle x_i in [0, 2pi) and
// measures the equatorial observable at that angle. The weight kernel is
// cos(x_1 + ... + x_n), the local-realistic bound on
//   integral cos(x_1 + ... + x_n) E(x_1, ..., x_n) dx
// is 4^n, and sums over settings become integrals over [0, 2pi)^n.

#include <optional>

#include "bellcc/qsim.hpp"

namespace bellcc::continuum {

inline constexpr int kMaxParties = 4;

struct ContinuumScenario {
  int parties = 2;
  int grid_points = 64;  // per dimension; even and >= 8
  std::optional<qsim::PureState> state;  // GHZ when empty
  double visibility = 1.0;

  // Throws SizeError / CapacityError / std::invalid_argument.
  void validate() const;
};

struct ContinuumReport {
  int parties;
  int grid_points;
  double lhs;
  double bound;
  double weight;  // integral of |cos(x_1 + ... + x_n)|
  double classical_max;
  double quantum;
  bool advantage;

  friend bool operator==(const ContinuumReport&, const ContinuumReport&) = default;
};

// Local-realistic bound 4^n.
double functional_bound(int parties);

// Trapezoidal rule on the uniform periodic grid. For GHZ the correlation
// cos(x_1 + ... + x_n) is used directly after spot checks against the state
// simulation; other states go through the simulator at every node.
double functional_lhs(const ContinuumScenario& scenario);

// Integral of |cos(x_1 + ... + x_n)| over [0, 2pi)^n. The integrand depends
// only on u = sum x_i mod 2pi, reducing it to (2pi)^{n-1} times a 1-D
// integral that is split at the kinks of |cos u| and done by Gauss-Legendre.
double kernel_weight(int parties);

ContinuumReport continuum_success(const ContinuumScenario& scenario);

}  // namespace bellcc::continuum
