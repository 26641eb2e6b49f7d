#include "foilgen/rng.hpp"

#include <cassert>
#include <numeric>

#include "foilgen/text.hpp"

namespace foilgen {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view key) {
  return splitmix64(base ^ fnv1a64(key));
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t key) {
  return splitmix64(base ^ splitmix64(key));
}

double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(Rng& rng, std::size_t n) {
  assert(n > 0);
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = Rng::max() - (Rng::max() % n);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

bool coin(Rng& rng) { return (rng() >> 63) != 0; }

std::size_t weighted_index(Rng& rng, std::span<const double> weights) {
  assert(!weights.empty());
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double target = uniform_unit(rng) * total;
  double running = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    running += weights[i];
    if (target < running) return i;
  }
  return weights.size() - 1;
}

}  // namespace foilgen
