// enigmatom command-line interface.

#include "enigmatom/complexity.hpp"
#include "enigmatom/dataset.hpp"
#include "enigmatom/error.hpp"
#include "enigmatom/evaluate.hpp"
#include "enigmatom/log.hpp"
#include "enigmatom/pipeline.hpp"
#include "enigmatom/record_cache.hpp"
#include "enigmatom/remote_backend.hpp"
#include "enigmatom/text.hpp"
#include "enigmatom/worldgen.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace enigmatom;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string nkb = "rule";
    std::string answerer = "symbolic";
    bool no_ki = false;
    bool no_im = false;
    bool no_reduce = false;
    std::string model = ChatConfig{}.model;
    std::string base_url = ChatConfig{}.base_url;
    std::string api_key_env = ChatConfig{}.api_key_env;
    std::string prompt_dir;
    std::string demos;
    std::string record_cache;
    std::string response_cache;
    int in_flight = 1;

    PipelineConfig config() const {
        PipelineConfig c;
        c.nkb = nkb == "remote" ? NkbKind::Remote : NkbKind::Rule;
        c.answerer = answerer == "remote" ? AnswererKind::Remote : AnswererKind::Symbolic;
        c.inject_knowledge = !no_ki;
        c.apply_masking = !no_im;
        c.reduce_orders = !no_reduce;
        c.chat.model = model;
        c.chat.base_url = base_url;
        c.chat.api_key_env = api_key_env;
        c.chat.cache_dir = response_cache;
        c.prompt_dir = prompt_dir;
        c.record_cache = record_cache;
        if (!demos.empty()) c.reduction_demos = read_text_file(demos);
        c.max_in_flight = in_flight;
        return c;
    }
};

void add_common(CLI::App* app, CommonOpts& o) {
    app->add_option("--nkb", o.nkb, "State backend")->check(CLI::IsMember({"rule", "remote"}));
    app->add_option("--answerer", o.answerer, "Answer reader")->check(CLI::IsMember({"symbolic", "remote"}));
    app->add_flag("--no-ki", o.no_ki, "Disable knowledge injection");
    app->add_flag("--no-im", o.no_im, "Disable iterative masking");
    app->add_flag("--no-reduce", o.no_reduce, "Keep high-order questions as asked");
    app->add_option("--model", o.model, "Chat model for remote stages");
    app->add_option("--base-url", o.base_url, "Chat-completions endpoint prefix");
    app->add_option("--api-key-env", o.api_key_env, "Environment variable holding the API key");
    app->add_option("--prompts", o.prompt_dir, "Prompt template directory");
    app->add_option("--demos", o.demos, "Few-shot file for model-based order reduction");
    app->add_option("--record-cache", o.record_cache, "Directory for cached state records");
    app->add_option("--response-cache", o.response_cache, "Directory for cached chat responses");
    app->add_option("--in-flight", o.in_flight, "Concurrent backend calls")->check(CLI::PositiveNumber);
}

struct InputOpts {
    std::string input;
    std::size_t item = 1;
    std::vector<std::string> questions;
};

void add_input(CLI::App* app, InputOpts& o) {
    app->add_option("input", o.input, "Story file (.json/.txt) or dataset (.jsonl)")->required();
    app->add_option("--item", o.item, "1-based dataset line")->check(CLI::PositiveNumber);
    app->add_option("-q,--question", o.questions, "Question text (repeatable)");
}

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    return read_text_file(path);
}

DatasetItem load_item(const InputOpts& o) {
    DatasetItem item;
    if (text::to_lower(std::filesystem::path(o.input).extension().string()) == ".jsonl") {
        auto items = read_dataset(std::filesystem::path(o.input));
        if (o.item > items.size()) {
            throw ValidationError("dataset has " + std::to_string(items.size()) + " item(s); asked for " +
                                  std::to_string(o.item));
        }
        item = items[o.item - 1];
    } else {
        item.story = parse_story(slurp(o.input));
    }
    if (!o.questions.empty()) {
        item.questions.clear();
        for (const auto& q : o.questions) item.questions.push_back({q, std::nullopt, std::nullopt});
    }
    return item;
}

std::vector<ToMQuestion> parse_all(const DatasetItem& item) {
    std::vector<ToMQuestion> qs;
    for (const auto& q : item.questions) qs.push_back(parse_question(q.text, item.story));
    if (qs.empty()) throw ValidationError("no questions given (use --question)");
    return qs;
}

void write_out(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path);
    f << content;
}

std::vector<std::uint64_t> parse_seeds(const std::string& arg) {
    std::vector<std::uint64_t> out;
    for (const auto& part : text::split(arg, ',')) {
        auto t = std::string(text::trim(part));
        if (t.empty()) continue;
        auto dash = t.find('-');
        if (dash != std::string::npos && dash > 0) {
            auto lo = std::stoull(t.substr(0, dash));
            auto hi = std::stoull(t.substr(dash + 1));
            if (hi < lo) throw ConfigError("bad seed range '" + t + "'");
            for (auto s = lo; s <= hi; ++s) out.push_back(s);
        } else {
            out.push_back(std::stoull(t));
        }
    }
    if (out.empty()) throw ConfigError("no seeds in '" + arg + "'");
    return out;
}

IntRange parse_range(const std::string& arg) {
    auto colon = arg.find_first_of(":-");
    try {
        if (colon == std::string::npos) {
            int v = std::stoi(arg);
            return {v, v};
        }
        return {std::stoi(arg.substr(0, colon)), std::stoi(arg.substr(colon + 1))};
    } catch (const std::exception&) {
        throw ConfigError("bad range '" + arg + "' (use N or LO:HI)");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neuro-symbolic theory-of-mind pipeline with a grammar oracle"};
    app.require_subcommand(1);
    bool verbose = false, quiet = false;
    app.add_flag("-v,--verbose", verbose, "Log progress");
    app.add_flag("--quiet", quiet, "Only errors");

    // generate
    auto* gen = app.add_subcommand("generate", "Generate grammar stories with oracle gold answers (JSONL)");
    GrammarConfig gcfg;
    int count = 1;
    std::string gen_out;
    gen->add_option("--seed", gcfg.seed, "First seed");
    gen->add_option("--count", count, "Number of stories (seeds seed..seed+count-1)")->check(CLI::NonNegativeNumber);
    gen->add_option("--characters", gcfg.num_characters, "Characters per story (2-5)");
    gen->add_option("--rooms", gcfg.num_rooms, "Room episodes");
    gen->add_option("--objects", gcfg.num_objects, "Objects");
    gen->add_option("--containers", gcfg.num_containers_per_room, "Containers per room");
    gen->add_option("--moves", gcfg.moves_per_room, "Moves per room");
    gen->add_option("--max-order", gcfg.max_order, "Highest question order (1-4)");
    gen->add_flag("--reentry", gcfg.allow_reentry, "ToMi-style episodes with re-entries");
    gen->add_option("--distractor-rate", gcfg.distractor_rate, "Probability of a distractor per turn");
    gen->add_option("--questions-per-order", gcfg.questions_per_order, "Questions per order");
    gen->add_option("-o,--out", gen_out, "Output file (default stdout)");

    // extract
    auto* ext = app.add_subcommand("extract", "Key entities, locations, and state records");
    CommonOpts ext_common;
    InputOpts ext_in;
    std::string ext_out;
    add_common(ext, ext_common);
    add_input(ext, ext_in);
    ext->add_option("-o,--out", ext_out, "Records JSONL file (default stdout summary)");

    // inject
    auto* inj = app.add_subcommand("inject", "Print the augmented event sequence");
    CommonOpts inj_common;
    InputOpts inj_in;
    std::string inj_records;
    add_common(inj, inj_common);
    add_input(inj, inj_in);
    inj->add_option("--records", inj_records, "Use records from this JSONL file");

    // mask
    auto* msk = app.add_subcommand("mask", "Masked event views per question");
    CommonOpts msk_common;
    InputOpts msk_in;
    bool dump_graphs = false;
    add_common(msk, msk_common);
    add_input(msk, msk_in);
    msk->add_flag("--dump-graphs", dump_graphs, "Print every scene graph as JSON");

    // answer
    auto* ans = app.add_subcommand("answer", "Answer questions about one story");
    CommonOpts ans_common;
    InputOpts ans_in;
    bool ans_json = false;
    add_common(ans, ans_common);
    add_input(ans, ans_in);
    ans->add_flag("--json", ans_json, "JSON output");

    // eval
    auto* ev = app.add_subcommand("eval", "Evaluate a dataset");
    CommonOpts ev_common;
    std::string ev_data, ev_seeds = "0", ev_json;
    std::size_t ev_subset = 0;
    int ev_workers = 1;
    add_common(ev, ev_common);
    ev->add_option("dataset", ev_data, "Dataset JSONL")->required();
    ev->add_option("--seeds", ev_seeds, "Comma list or ranges, e.g. 0-4");
    ev->add_option("--subset", ev_subset, "Questions sampled per seed (0 = all)");
    ev->add_option("--workers", ev_workers, "Concurrent stories")->check(CLI::PositiveNumber);
    ev->add_option("--json", ev_json, "Write the JSON report here ('-' for stdout)");

    // complexity
    auto* cx = app.add_subcommand("complexity", "Graph-construction counts");
    std::string cx_m = "5", cx_k = "1:5", cx_csv;
    cx->add_option("--m", cx_m, "Characters: N or LO:HI");
    cx->add_option("--k", cx_k, "ToM orders: N or LO:HI");
    cx->add_option("--csv", cx_csv, "Also write plot data as CSV");

    CLI11_PARSE(app, argc, argv);
    log::set_level(quiet ? log::Level::Quiet : verbose ? log::Level::Info : log::Level::Warn);

    try {
        if (gen->parsed()) {
            std::ostringstream os;
            for (const auto& gs : generate_batch(gcfg, count)) os << dataset_line(gs.to_item()) << '\n';
            write_out(gen_out, os.str());
        } else if (ext->parsed()) {
            auto item = load_item(ext_in);
            Pipeline p(ext_common.config());
            auto a = p.analyze(item.story, parse_all(item));
            if (!ext_out.empty()) write_records_jsonl(ext_out, a.records);
            std::cout << "key entities:\n";
            for (const auto& e : a.key_entities) std::cout << "- " << e.render() << '\n';
            std::cout << "locations:\n";
            for (const auto& l : a.anchors) std::cout << "- " << l.name << '\n';
            if (ext_out.empty()) {
                std::cout << "records:\n";
                for (const auto& r : a.records) std::cout << "- " << r.event_index << ": " << r.render() << '\n';
            }
            for (const auto& s : a.skipped_lines) log::warn("skipped backend line: " + s);
        } else if (inj->parsed()) {
            auto item = load_item(inj_in);
            std::vector<EntityStateRecord> records;
            if (!inj_records.empty()) {
                records = read_records_jsonl(inj_records);
            } else {
                Pipeline p(inj_common.config());
                std::vector<ToMQuestion> qs;
                if (!item.questions.empty()) qs = parse_all(item);
                records = p.analyze(item.story, qs).records;
            }
            std::cout << render_augmented(inject(item.story, records));
        } else if (msk->parsed()) {
            auto item = load_item(msk_in);
            Pipeline p(msk_common.config());
            auto qs = parse_all(item);
            auto a = p.analyze(item.story, qs);
            if (dump_graphs) std::cout << a.graphs.to_json(item.story).dump(2) << '\n';
            for (const auto& q : qs) {
                auto r = p.answer(item.story, q, a);
                std::cout << q.raw << "\n  surviving:";
                for (int i : r.view.surviving) std::cout << ' ' << i;
                std::cout << '\n';
                for (std::size_t i = 0; i < r.view.surviving.size(); ++i) {
                    std::istringstream lines(r.view.texts[i]);
                    std::string line;
                    bool first = true;
                    while (std::getline(lines, line)) {
                        std::cout << "  " << (first ? std::to_string(r.view.surviving[i]) + ": " : "   ") << line << '\n';
                        first = false;
                    }
                }
            }
        } else if (ans->parsed()) {
            auto item = load_item(ans_in);
            Pipeline p(ans_common.config());
            auto qs = parse_all(item);
            auto a = p.analyze(item.story, qs);
            json out = json::array();
            for (std::size_t k = 0; k < qs.size(); ++k) {
                auto r = p.answer(item.story, qs[k], a);
                json j{{"question", qs[k].raw}, {"asked", r.asked.raw}, {"answer", r.predicted},
                       {"surviving", r.view.surviving}, {"flagged", r.flagged()}};
                if (item.questions[k].gold) {
                    j["gold"] = *item.questions[k].gold;
                    j["correct"] = normalize_answer(r.predicted) == normalize_answer(*item.questions[k].gold);
                }
                if (ans_json) {
                    out.push_back(j);
                } else {
                    std::cout << qs[k].raw << "\n  asked: " << r.asked.raw << "\n  answer: " << r.predicted;
                    if (j.contains("gold")) std::cout << "  (gold: " << j["gold"].get<std::string>() << ")";
                    if (r.flagged()) std::cout << "  [flagged]";
                    std::cout << '\n';
                }
            }
            if (ans_json) std::cout << out.dump(2) << '\n';
        } else if (ev->parsed()) {
            EvalOptions opts;
            opts.seeds = parse_seeds(ev_seeds);
            if (ev_subset > 0) opts.subset_size = ev_subset;
            opts.workers = ev_workers;
            auto report = evaluate(std::filesystem::path(ev_data), ev_common.config(), opts);
            if (ev_json != "-") std::cout << report.to_table();
            if (!ev_json.empty()) write_out(ev_json, report.to_json().dump(2) + "\n");
        } else if (cx->parsed()) {
            auto rows = complexity_report(parse_range(cx_m), parse_range(cx_k));
            std::cout << complexity_table(rows);
            if (!cx_csv.empty()) write_out(cx_csv, complexity_csv(rows));
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
