#include "wtap/rng.hpp"

#include <cmath>
#include <numbers>

namespace wtap {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(seed ^ splitmix64(index + 1)));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t Rng::index(std::size_t n) {
  if (n <= 1) return 0;
  auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return k >= n ? n - 1 : k;
}

double Rng::normal() {
  double u1 = 1.0 - uniform();  // (0, 1]
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::exponential() { return -std::log(1.0 - uniform()); }

std::vector<double> Rng::dirichlet(std::size_t n) {
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& v : w) {
    v = exponential();
    total += v;
  }
  for (auto& v : w) v /= total;
  return w;
}

}  // namespace wtap
