#pragma once
// Dataset JSONL: one story object per line with its questions embedded.
//   {"kind": ..., "characters": [...], "events": [...], "metadata": {...},
//    "questions": [{"text": str, "order": int?, "gold": str?}]}

#include "enigmatom/story.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace enigmatom {

struct DatasetQuestion {
    std::string text;
    std::optional<int> order;
    std::optional<std::string> gold;

    friend bool operator==(const DatasetQuestion&, const DatasetQuestion&) = default;
};

struct DatasetItem {
    Story story;
    std::vector<DatasetQuestion> questions;
};

std::vector<DatasetItem> read_dataset(std::istream& in);
std::vector<DatasetItem> read_dataset(const std::filesystem::path& path);
std::string dataset_line(const DatasetItem& item);
void write_dataset(std::ostream& out, const std::vector<DatasetItem>& items);
void write_dataset(const std::filesystem::path& path, const std::vector<DatasetItem>& items);

}  // namespace enigmatom
