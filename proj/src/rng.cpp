#include "bellcc/rng.hpp"

#include <cmath>
#include <numbers>

namespace bellcc {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream RngStream::derive(std::uint64_t master_seed, std::uint64_t counter) {
  return RngStream(mix(mix(master_seed) ^ (counter * kGolden + 0x632be59bd9b4e019ULL)));
}

RngStream::result_type RngStream::operator()() {
  state_ += kGolden;
  return mix(state_);
}

double RngStream::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  // 1 - u lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int RngStream::sign() {
  return ((*this)() >> 63) != 0 ? -1 : 1;
}

}  // namespace bellcc
