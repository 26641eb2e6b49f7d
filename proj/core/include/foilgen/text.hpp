#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace foilgen {

/// Lowercases ASCII letters, trims, and collapses internal whitespace runs to a
/// single space. All table keys go through this.
std::string canonical_token(std::string_view raw);

/// Whitespace tokenization; punctuation stays attached.
std::vector<std::string_view> split_whitespace(std::string_view text);

std::size_t count_tokens(std::string_view text);

/// 64-bit FNV-1a. Stable across platforms, used for seed derivation.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace foilgen
