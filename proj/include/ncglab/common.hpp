#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncglab {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

using IVec = std::vector<std::int64_t>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTau = 2.0 * kPi;

// value on the unit circle at `turns` full revolutions; argument reduced
// first so large angles keep full precision
inline cplx unit_phase(double turns) {
  double t = turns - std::round(turns);
  return {std::cos(kTau * t), std::sin(kTau * t)};
}

// exp(i*pi*turns), the square-root phase
inline cplx half_phase(double turns) {
  return {std::cos(kPi * turns), std::sin(kPi * turns)};
}

struct NcgError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- deterministic RNG -----------------------------------------------------
//
// splitmix64 for seeding, xoshiro256** as the generator; bit-stable across
// platforms, unlike std:: distributions.

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& w : s_) w = splitmix64(x);
  }

  std::uint64_t next() {
    auto rotl = [](std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
    std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform in [0,1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform in [lo,hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n)
  std::int64_t below(std::int64_t n) {
    return static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(n));
  }

  cplx complex_in_disc() {
    return cplx{uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
  }

 private:
  std::uint64_t s_[4];
};

// derive a task-local seed from a global seed and task coordinates
inline std::uint64_t task_seed(std::uint64_t global, std::initializer_list<std::uint64_t> coords) {
  std::uint64_t x = global;
  std::uint64_t h = splitmix64(x);
  for (auto c : coords) {
    x = h ^ (c + 0x9e3779b97f4a7c15ULL);
    h = splitmix64(x);
  }
  return h;
}

}  // namespace ncglab
