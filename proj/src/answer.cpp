#include "enigmatom/answer.hpp"

#include "enigmatom/text.hpp"

#include <algorithm>

namespace enigmatom {

namespace {

constexpr std::string_view kOpen = "<answer>";
constexpr std::string_view kClose = "</answer>";

struct Tag {
    std::size_t pos;
    bool open;
};

std::vector<Tag> scan_tags(const std::string& lower) {
    std::vector<Tag> tags;
    for (std::size_t i = lower.find('<'); i != std::string::npos; i = lower.find('<', i + 1)) {
        if (lower.compare(i, kOpen.size(), kOpen) == 0) tags.push_back({i, true});
        else if (lower.compare(i, kClose.size(), kClose) == 0) tags.push_back({i, false});
    }
    return tags;
}

std::string last_nonempty_line(std::string_view s) {
    auto lines = text::split_lines(s);
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
        auto t = text::trim(*it);
        if (!t.empty()) return std::string(t);
    }
    return {};
}

}  // namespace

std::string normalize_answer(std::string_view s) {
    return text::normalize_place(s);
}

ParsedAnswer parse_answer(std::string_view llm_text, std::optional<std::span<const std::string>> candidates) {
    ParsedAnswer out;
    const std::string raw(llm_text);
    const std::string lower = text::to_lower(raw);
    const auto tags = scan_tags(lower);

    // Innermost pair: an opening tag directly followed by a closing tag.
    // The last such pair wins when there are several.
    std::optional<std::pair<std::size_t, std::size_t>> span;
    for (std::size_t i = 0; i + 1 < tags.size(); ++i) {
        if (tags[i].open && !tags[i + 1].open) span = {tags[i].pos + kOpen.size(), tags[i + 1].pos};
    }
    if (span) {
        out.tagged = true;
        out.extracted = std::string(text::trim(std::string_view(raw).substr(span->first, span->second - span->first)));
    } else if (auto it = std::find_if(tags.rbegin(), tags.rend(), [](const Tag& t) { return t.open; });
               it != tags.rend()) {
        out.unclosed = true;
        std::size_t from = it->pos + kOpen.size();
        std::string rest = raw.substr(from);
        // Stop at any stray closing tag left after the opening one.
        auto close = text::to_lower(rest).find(kClose);
        if (close != std::string::npos) rest.resize(close);
        out.extracted = std::string(text::trim(rest));
    } else if (!tags.empty()) {
        // Only closing tags: take what precedes the last one.
        out.no_tags = true;
        out.extracted = last_nonempty_line(std::string_view(raw).substr(0, tags.back().pos));
    } else {
        out.no_tags = true;
        out.extracted = last_nonempty_line(raw);
    }

    const std::string norm = normalize_answer(out.extracted);
    out.text = norm;
    if (!candidates || candidates->empty()) return out;

    for (const auto& c : *candidates) {
        if (normalize_answer(c) == norm) {
            out.text = c;
            out.matched = true;
            return out;
        }
    }
    if (norm.empty()) return out;

    std::vector<std::pair<std::string, std::string>> hits;  // (candidate, normalized)
    for (const auto& c : *candidates) {
        const std::string nc = normalize_answer(c);
        if (nc.empty()) continue;
        if (text::contains_words(norm, nc) || text::contains_words(nc, norm)) hits.emplace_back(c, nc);
    }
    std::vector<std::pair<std::string, std::string>> maximal;
    for (const auto& h : hits) {
        bool nested = std::any_of(hits.begin(), hits.end(), [&](const auto& o) {
            return o.second != h.second && text::contains_words(o.second, h.second) &&
                   text::contains_words(norm, o.second);
        });
        if (!nested) maximal.push_back(h);
    }
    if (maximal.size() == 1) {
        out.text = maximal.front().first;
        out.matched = true;
    } else if (maximal.size() > 1) {
        out.ambiguous = true;
    }
    return out;
}

bool answer_correct(const ParsedAnswer& a, std::string_view gold) {
    if (a.ambiguous) return false;
    return normalize_answer(a.text) == normalize_answer(gold);
}

}  // namespace enigmatom
