#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace foilgen {

/// mt19937_64 output is fully specified by the standard; the distributions in
/// <random> are not, so sampling helpers below are written against raw engine
/// output to keep datasets identical across standard libraries.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for a named sub-stream, e.g. (global_seed, image_id).
std::uint64_t derive_seed(std::uint64_t base, std::string_view key);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t key);

/// Uniform double in [0, 1) with 53 bits of randomness.
double uniform_unit(Rng& rng);

/// Uniform integer in [0, n). n must be > 0.
std::size_t uniform_index(Rng& rng, std::size_t n);

bool coin(Rng& rng);

/// Index drawn with probability weights[i] / sum(weights). Weights must be
/// positive and the span non-empty.
std::size_t weighted_index(Rng& rng, std::span<const double> weights);

/// Fisher-Yates over uniform_index.
template <class T>
void shuffle_in_place(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = uniform_index(rng, i);
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace foilgen
