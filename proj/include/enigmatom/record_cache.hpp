#pragma once
// JSONL persistence of record lists, keyed by story, targets, and backend.

#include "enigmatom/nkb.hpp"

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>

namespace enigmatom {

std::string story_hash(const Story& story);
std::string targets_hash(std::span<const EntityAttribute> targets);

void write_records_jsonl(const std::filesystem::path& path, std::span<const EntityStateRecord> records);
std::vector<EntityStateRecord> read_records_jsonl(const std::filesystem::path& path);

class RecordCache {
public:
    explicit RecordCache(std::filesystem::path dir);

    std::filesystem::path path_for(const Story& story, std::span<const EntityAttribute> targets,
                                   const std::string& backend_name) const;
    std::optional<std::vector<EntityStateRecord>> load(const Story& story,
                                                       std::span<const EntityAttribute> targets,
                                                       const std::string& backend_name) const;
    void store(const Story& story, std::span<const EntityAttribute> targets,
               const std::string& backend_name, std::span<const EntityStateRecord> records) const;

private:
    std::filesystem::path dir_;
    mutable std::mutex mutex_;
};

// generate_states with a cache in front. Deterministic backends bypass the
// cache unless `cache_deterministic` is set.
StateGeneration generate_states_cached(const Story& story, std::span<const EntityAttribute> targets,
                                       StateBackend& backend, const RecordCache* cache,
                                       int max_in_flight = 1, bool cache_deterministic = false);

}  // namespace enigmatom
