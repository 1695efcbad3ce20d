#include "enigmatom/record_cache.hpp"

#include "enigmatom/error.hpp"
#include "enigmatom/text.hpp"

#include <fstream>

namespace enigmatom {

std::string story_hash(const Story& story) { return text::hex64(text::fnv1a64(serialize_story(story))); }

std::string targets_hash(std::span<const EntityAttribute> targets) {
    std::string s;
    for (const auto& t : targets) s += text::to_lower(t.render()) + "\n";
    return text::hex64(text::fnv1a64(s));
}

void write_records_jsonl(const std::filesystem::path& path, std::span<const EntityStateRecord> records) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + tmp.string());
        for (const auto& r : records) out << record_to_json(r).dump() << '\n';
    }
    std::filesystem::rename(tmp, path);
}

std::vector<EntityStateRecord> read_records_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::vector<EntityStateRecord> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw FormatError(std::string("malformed record JSON: ") + e.what(), line_no);
        }
        out.push_back(record_from_json(j, line_no));
    }
    return out;
}

RecordCache::RecordCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::filesystem::path RecordCache::path_for(const Story& story, std::span<const EntityAttribute> targets,
                                            const std::string& backend_name) const {
    std::string safe;
    for (char c : backend_name) safe.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' ? c : '_');
    return dir_ / (story_hash(story) + "-" + targets_hash(targets) + "-" + safe + ".jsonl");
}

std::optional<std::vector<EntityStateRecord>> RecordCache::load(const Story& story,
                                                                std::span<const EntityAttribute> targets,
                                                                const std::string& backend_name) const {
    auto p = path_for(story, targets, backend_name);
    std::lock_guard lock(mutex_);
    if (!std::filesystem::exists(p)) return std::nullopt;
    return read_records_jsonl(p);
}

void RecordCache::store(const Story& story, std::span<const EntityAttribute> targets,
                        const std::string& backend_name, std::span<const EntityStateRecord> records) const {
    auto p = path_for(story, targets, backend_name);
    std::lock_guard lock(mutex_);
    write_records_jsonl(p, records);
}

StateGeneration generate_states_cached(const Story& story, std::span<const EntityAttribute> targets,
                                       StateBackend& backend, const RecordCache* cache, int max_in_flight,
                                       bool cache_deterministic) {
    const auto info = backend.info();
    const bool use_cache = cache && (!info.deterministic || cache_deterministic);
    if (use_cache) {
        if (auto hit = cache->load(story, targets, info.name)) return {std::move(*hit), {}};
    }
    auto gen = generate_states(story, targets, backend, max_in_flight);
    if (use_cache) cache->store(story, targets, info.name, gen.records);
    return gen;
}

}  // namespace enigmatom
