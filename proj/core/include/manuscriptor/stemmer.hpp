#pragma once

#include <string>
#include <string_view>

namespace manuscriptor {

/// Snowball English (Porter2) stemmer.
///
/// Expects a lowercase word. Bytes outside ASCII are carried through as
/// consonants. The output is exactly what the reference Snowball
/// implementation produces, including its non-idempotent corner cases
/// (`abase` -> `abas`, `abas` -> `aba`); callers that need a fixed point
/// should use `stem_to_fixed_point`.
std::string stem_english(std::string_view word);

/// Applies `stem_english` until the word stops changing.
std::string stem_to_fixed_point(std::string_view word);

}  // namespace manuscriptor
