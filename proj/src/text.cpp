#include "enigmatom/text.hpp"
#include "enigmatom/log.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <sstream>

namespace enigmatom::text {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

}  // namespace

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), lower);
    return out;
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(),
                      [](char x, char y) { return lower(x) == lower(y); });
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && iequals(s.substr(0, prefix.size()), prefix);
}

bool is_capitalized(std::string_view word) {
    return !word.empty() && std::isupper(static_cast<unsigned char>(word.front())) != 0;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string> split_lines(std::string_view s) {
    auto lines = split(s, '\n');
    for (auto& l : lines) {
        if (!l.empty() && l.back() == '\r') l.pop_back();
    }
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

std::vector<std::string> words(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string normalize_phrase(std::string_view s) {
    std::string cleaned;
    cleaned.reserve(s.size());
    for (char c : s) {
        if (c == '-' || c == '_' || is_space(c)) {
            cleaned.push_back(' ');
        } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '\'') {
            cleaned.push_back(lower(c));
        }
    }
    auto ws = words(cleaned);
    while (!ws.empty() && (ws.front() == "the" || ws.front() == "a" || ws.front() == "an")) {
        ws.erase(ws.begin());
    }
    return join(ws, " ");
}

std::string normalize_place(std::string_view s) {
    auto ws = words(normalize_phrase(s));
    static const std::vector<std::string> preps = {"in", "at", "inside", "into", "on", "within"};
    if (!ws.empty() && std::find(preps.begin(), preps.end(), ws.front()) != preps.end()) {
        ws.erase(ws.begin());
    }
    while (!ws.empty() && (ws.front() == "the" || ws.front() == "a" || ws.front() == "an")) {
        ws.erase(ws.begin());
    }
    return join(ws, " ");
}

bool contains_words(std::string_view hay, std::string_view needle) {
    if (needle.empty()) return false;
    std::string h = " " + std::string(hay) + " ";
    std::string n = " " + std::string(needle) + " ";
    return h.find(n) != std::string::npos;
}

std::string join_names(const std::vector<std::string>& names) {
    if (names.empty()) return {};
    if (names.size() == 1) return names.front();
    std::string out;
    for (std::size_t i = 0; i + 1 < names.size(); ++i) {
        if (i) out += ", ";
        out += names[i];
    }
    return out + " and " + names.back();
}

std::vector<std::string> split_names(std::string_view s) {
    std::vector<std::string> out;
    for (auto& piece : split(s, ',')) {
        std::string p = trim(piece);
        if (starts_with_ci(p, "and ")) p = trim(p.substr(4));
        auto pos = p.find(" and ");
        if (pos != std::string::npos) {
            out.push_back(trim(p.substr(0, pos)));
            out.push_back(trim(p.substr(pos + 5)));
        } else {
            out.push_back(p);
        }
    }
    for (const auto& n : out) {
        if (n.empty()) return {};
    }
    return out;
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace enigmatom::text

namespace enigmatom::log {

namespace {
std::atomic<Level> g_level{Level::Warn};
std::mutex g_mutex;

void emit(Level at, std::string_view tag, std::string_view msg) {
    if (static_cast<int>(g_level.load()) < static_cast<int>(at)) return;
    std::lock_guard lock(g_mutex);
    std::cerr << "[" << tag << "] " << msg << '\n';
}
}  // namespace

void set_level(Level level) { g_level.store(level); }
Level level() { return g_level.load(); }
void warn(std::string_view msg) { emit(Level::Warn, "warn", msg); }
void info(std::string_view msg) { emit(Level::Info, "info", msg); }
void debug(std::string_view msg) { emit(Level::Debug, "debug", msg); }

}  // namespace enigmatom::log
