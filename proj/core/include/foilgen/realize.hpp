#pragma once

#include <string>
#include <string_view>

#include "foilgen/caption_types.hpp"

namespace foilgen {

/// Plural of a class name. Multi-word names inflect the last word. Words
/// that are already plural ("jeans", "people") come back unchanged.
std::string pluralize(std::string_view noun);

/// Whether the class name reads as a plural noun on its own ("jars",
/// "pants"), which decides is/are for single-instance references.
bool is_plural_noun(std::string_view noun);

/// "a" or "an" by the initial-vowel rule.
std::string_view indefinite_article(std::string_view next_word);

/// "one" ... "twenty"; digits beyond that.
std::string number_word(int n);

/// Surface text for a template instantiation. Throws std::logic_error when a
/// required binding is missing.
std::string realize(CaptionType type, const Bindings& bindings);

}  // namespace foilgen
