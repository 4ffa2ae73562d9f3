#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace wtap {

// All randomness flows through this generator: std::mt19937_64 (fully
// specified by the standard) plus hand-written transforms, so draws are
// identical across standard libraries. Substreams are keyed by
// splitmix64(seed ^ splitmix64(stream)).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  static Rng stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Integer in [0, n).
  std::size_t index(std::size_t n);
  // Standard normal via Box-Muller (one draw per call, no caching).
  double normal();
  double exponential();
  // Dirichlet(1,...,1) sample of length n.
  std::vector<double> dirichlet(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace wtap
