#include "enigmatom/remote_backend.hpp"

#include "enigmatom/error.hpp"
#include "enigmatom/text.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace enigmatom {

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path PromptSet::default_dir() {
#ifdef ENIGMATOM_PROMPT_DIR
    return ENIGMATOM_PROMPT_DIR;
#else
    return "prompts";
#endif
}

PromptSet PromptSet::load(const std::filesystem::path& dir) {
    PromptSet p;
    p.key_entities = read_text_file(dir / "key_entities.txt");
    p.locations = read_text_file(dir / "locations.txt");
    p.entity_states = read_text_file(dir / "entity_states.txt");
    p.answer = read_text_file(dir / "answer.txt");
    return p;
}

std::string fill_template(std::string tmpl, const std::map<std::string, std::string>& values) {
    for (const auto& [name, value] : values) {
        const std::string needle = "{{" + name + "}}";
        std::size_t pos = 0;
        while ((pos = tmpl.find(needle, pos)) != std::string::npos) {
            tmpl.replace(pos, needle.size(), value);
            pos += value.size();
        }
    }
    return tmpl;
}

std::vector<std::string> parse_bullets(const std::string& reply) {
    std::vector<std::string> out;
    for (const auto& raw : text::split_lines(reply)) {
        std::string line = text::trim(raw);
        if (line.size() < 2 || (line[0] != '-' && line[0] != '*')) continue;
        line = text::trim(line.substr(1));
        while (!line.empty() && (line.back() == '.' || line.back() == ',')) line.pop_back();
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

std::vector<EntityAttribute> parse_entities_reply(const std::string& reply) {
    std::string lower = text::to_lower(reply);
    std::string body = reply;
    auto open = lower.rfind("<entities>");
    if (open != std::string::npos) {
        auto close = lower.find("</entities>", open);
        body = reply.substr(open + 10, close == std::string::npos ? std::string::npos : close - open - 10);
    }
    std::vector<EntityAttribute> out;
    for (const auto& b : parse_bullets(body)) {
        if (auto ea = parse_entity_attribute(b)) out.push_back(*ea);
    }
    return out;
}

PrefixStates parse_states_reply(const std::string& reply) {
    PrefixStates ps;
    for (const auto& raw : text::split_lines(reply)) {
        std::string line = text::trim(raw);
        if (line.empty() || text::iequals(line, "none") || line == "...") continue;
        if (auto r = parse_record_line(line)) {
            ps.records.push_back(std::move(*r));
            continue;
        }
        // Only lines that look like record attempts count as skipped.
        bool attempt = line[0] == '-' || std::isdigit(static_cast<unsigned char>(line[0]));
        if (attempt) ps.skipped_lines.push_back(line);
    }
    return ps;
}

RemoteBackend::RemoteBackend(ChatModel& model, PromptSet prompts)
    : model_(model), prompts_(std::move(prompts)) {}

std::vector<EntityAttribute> RemoteBackend::propose_entities(const Story& story,
                                                             std::span<const ToMQuestion> questions) {
    std::string qlist;
    for (const auto& q : questions) qlist += "- " + q.raw + "\n";
    std::string prompt = fill_template(prompts_.key_entities,
                                       {{"indexed narrative", indexed_narrative(story)},
                                        {"question list", qlist}});
    std::string reply = model_.complete(prompt);
    auto out = parse_entities_reply(reply);
    if (out.empty()) throw BackendError("entity reply has no '- attribute of entity' lines", reply);
    return out;
}

std::vector<std::string> RemoteBackend::propose_locations(const Story& story) {
    std::string prompt = fill_template(prompts_.locations, {{"indexed narrative", indexed_narrative(story)}});
    std::string reply = model_.complete(prompt);
    auto out = parse_bullets(reply);
    if (out.empty()) throw BackendError("location reply has no bullet lines", reply);
    return out;
}

PrefixStates RemoteBackend::states_after(const Story& story, int prefix_len,
                                         std::span<const EntityAttribute> targets) {
    std::string eoi;
    for (const auto& t : targets) eoi += "- " + t.render() + "\n";
    std::string prompt = fill_template(prompts_.entity_states,
                                       {{"indexed narrative", indexed_narrative(story, prefix_len)},
                                        {"eoi list", eoi}});
    return parse_states_reply(model_.complete(prompt));
}

}  // namespace enigmatom
