#include "enigmatom/dataset.hpp"

#include "enigmatom/error.hpp"
#include "enigmatom/text.hpp"

#include <fstream>
#include <istream>
#include <ostream>

namespace enigmatom {

using nlohmann::json;

std::vector<DatasetItem> read_dataset(std::istream& in) {
    std::vector<DatasetItem> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::parse_error& e) {
            throw FormatError(std::string("malformed JSON: ") + e.what(), line_no);
        }
        DatasetItem item;
        try {
            item.story = story_from_json(doc, line_no);
        } catch (const ValidationError& e) {
            throw FormatError(e.what(), line_no);
        }
        if (doc.contains("questions")) {
            if (!doc["questions"].is_array()) throw FormatError("\"questions\" must be an array", line_no);
            for (const auto& q : doc["questions"]) {
                DatasetQuestion dq;
                if (q.is_string()) {
                    dq.text = q.get<std::string>();
                } else if (q.is_object() && q.contains("text") && q["text"].is_string()) {
                    dq.text = q["text"].get<std::string>();
                    if (q.contains("order") && q["order"].is_number_integer()) dq.order = q["order"].get<int>();
                    if (q.contains("gold") && q["gold"].is_string()) dq.gold = q["gold"].get<std::string>();
                } else {
                    throw FormatError("question needs a \"text\" string", line_no);
                }
                item.questions.push_back(std::move(dq));
            }
        }
        out.push_back(std::move(item));
    }
    return out;
}

std::vector<DatasetItem> read_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read dataset " + path.string());
    return read_dataset(in);
}

std::string dataset_line(const DatasetItem& item) {
    json doc = story_to_json(item.story);
    json qs = json::array();
    for (const auto& q : item.questions) {
        json jq = {{"text", q.text}};
        if (q.order) jq["order"] = *q.order;
        if (q.gold) jq["gold"] = *q.gold;
        qs.push_back(std::move(jq));
    }
    doc["questions"] = std::move(qs);
    return doc.dump();
}

void write_dataset(std::ostream& out, const std::vector<DatasetItem>& items) {
    for (const auto& item : items) out << dataset_line(item) << '\n';
}

void write_dataset(const std::filesystem::path& path, const std::vector<DatasetItem>& items) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write dataset " + path.string());
    write_dataset(out, items);
}

}  // namespace enigmatom
