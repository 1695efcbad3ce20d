#pragma once
// Extraction of final answers from model output and candidate matching.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace enigmatom {

struct ParsedAnswer {
    std::string text;       // matched candidate, else the normalized extraction
    std::string extracted;  // raw span before normalization
    bool tagged = false;    // a complete <answer>...</answer> pair was found
    bool unclosed = false;  // opening tag without a closing one; remainder taken
    bool no_tags = false;   // no tag at all; last non-empty line taken
    bool matched = false;   // text is one of the candidates
    bool ambiguous = false; // several candidates matched; scored incorrect

    bool flagged() const noexcept { return unclosed || no_tags || ambiguous; }
};

// Lowercase, '-' and '_' to spaces, punctuation dropped, articles and a
// leading preposition stripped, whitespace collapsed.
std::string normalize_answer(std::string_view s);

// Never throws. With candidates: exact normalized match first, then the
// unique candidate contained in the answer (or containing it) once
// candidates nested inside longer matching ones are discarded.
ParsedAnswer parse_answer(std::string_view llm_text,
                          std::optional<std::span<const std::string>> candidates = std::nullopt);

// Correct iff unambiguous and equal to the gold after normalization.
bool answer_correct(const ParsedAnswer& a, std::string_view gold);

}  // namespace enigmatom
