#pragma once
// String helpers used across parsing and matching. ASCII only.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace enigmatom::text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool starts_with_ci(std::string_view s, std::string_view prefix);
bool is_capitalized(std::string_view word);

std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_lines(std::string_view s);
std::vector<std::string> words(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Lowercase, hyphens and underscores to spaces, punctuation dropped,
// whitespace collapsed, leading articles removed.
std::string normalize_phrase(std::string_view s);

// normalize_phrase plus removal of a leading spatial preposition
// ("in", "at", "inside", "into", "on").
std::string normalize_place(std::string_view s);

// True when `needle` occurs in `hay` on word boundaries. Both normalized.
bool contains_words(std::string_view hay, std::string_view needle);

// "A", "A and B", "A, B and C" (Oxford comma accepted).
std::string join_names(const std::vector<std::string>& names);

// Inverse of join_names. Returns empty if any part is empty.
std::vector<std::string> split_names(std::string_view s);

// 64-bit FNV-1a, hex encoded. Stable across platforms and runs.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 14695981039346656037ULL);
std::string hex64(std::uint64_t v);

}  // namespace enigmatom::text
