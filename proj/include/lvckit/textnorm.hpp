#pragma once

#include <string>
#include <string_view>

namespace lvc {

// Lemma lowercasing is an explicit policy, never an implicit default:
// Standard applies the default Unicode mapping (dotted capital I becomes
// "i" + combining dot above), Turkish applies the tr special casing
// (I -> dotless i, dotted I -> i).
enum class Casing { Standard, Turkish };

Casing casing_from_string(std::string_view name);  // throws ConfigError
std::string_view casing_name(Casing casing);

// Lowercases UTF-8 text. Covers ASCII, Latin-1 Supplement and Latin
// Extended-A, which is the alphabet of Turkish treebank data; code points
// outside those blocks pass through unchanged, as do invalid byte
// sequences.
std::string to_lower(std::string_view text, Casing casing);

}  // namespace lvc
