#include "enigmatom/evaluate.hpp"

#include "enigmatom/error.hpp"
#include "enigmatom/log.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>
#include <tuple>

namespace enigmatom {

using nlohmann::json;

namespace {

struct Slot {
    std::size_t item;
    std::size_t question;
};

struct ItemResult {
    std::vector<ToMQuestion> questions;  // parsed; aligned with the item's questions
    std::vector<std::optional<PipelineResult>> results;
    std::vector<std::string> errors;
    int max_order = 0;
    bool failed = false;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace

EvalReport evaluate(std::span<const DatasetItem> items, const Pipeline& pipeline, const EvalOptions& options) {
    if (options.seeds.empty()) throw ConfigError("evaluation needs at least one seed");
    EvalReport report;
    report.seeds = options.seeds;
    report.num_items = items.size();
    report.config = pipeline.config().to_json();

    std::vector<ItemResult> per_item(items.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next++; i < items.size(); i = next++) {
            const auto& item = items[i];
            auto& out = per_item[i];
            out.results.resize(item.questions.size());
            out.errors.resize(item.questions.size());
            try {
                for (const auto& dq : item.questions) out.questions.push_back(parse_question(dq.text, item.story));
                for (const auto& q : out.questions) out.max_order = std::max(out.max_order, q.order());
                if (out.questions.empty()) continue;
                const auto analysis = pipeline.analyze(item.story, out.questions);
                for (std::size_t k = 0; k < out.questions.size(); ++k) {
                    if (!item.questions[k].gold) continue;
                    try {
                        out.results[k] = pipeline.answer(item.story, out.questions[k], analysis);
                    } catch (const Error& e) {
                        out.errors[k] = e.what();
                    }
                }
            } catch (const Error& e) {
                out.failed = true;
                std::fill(out.errors.begin(), out.errors.end(), std::string(e.what()));
            }
        }
    };
    const int workers = std::max(1, options.workers);
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    std::vector<Slot> slots;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& item = items[i];
        const auto& res = per_item[i];
        report.num_questions += item.questions.size();
        const int m = static_cast<int>(item.story.characters.size());
        if (m >= 1) {
            auto counts = graph_build_counts(m, std::min(res.max_order, m));
            report.graph_totals.enigma += counts.enigma;
            report.graph_totals.symbolic_tom += counts.symbolic_tom;
        }
        for (std::size_t k = 0; k < item.questions.size(); ++k) {
            if (!item.questions[k].gold) {
                ++report.skipped_missing_gold;
                continue;
            }
            if (!res.results[k]) {
                ++report.skipped_errors;
                log::warn("item " + std::to_string(i + 1) + " question " + std::to_string(k + 1) + ": " + res.errors[k]);
                continue;
            }
            slots.push_back({i, k});
        }
    }
    if (report.skipped_missing_gold > 0) {
        log::warn(std::to_string(report.skipped_missing_gold) + " question(s) without gold answers skipped");
    }

    for (std::uint64_t seed : options.seeds) {
        std::vector<Slot> chosen = slots;
        if (options.subset_size && *options.subset_size < chosen.size()) {
            std::mt19937_64 rng(seed);
            for (std::size_t i = chosen.size(); i > 1; --i) std::swap(chosen[i - 1], chosen[rng() % i]);
            chosen.resize(*options.subset_size);
            std::sort(chosen.begin(), chosen.end(),
                      [](const Slot& a, const Slot& b) { return std::tie(a.item, a.question) < std::tie(b.item, b.question); });
        }
        std::size_t correct = 0;
        for (const auto& s : chosen) {
            const auto& q = per_item[s.item].questions[s.question];
            const auto& r = *per_item[s.item].results[s.question];
            const std::string& gold = *items[s.item].questions[s.question].gold;
            QuestionOutcome o;
            o.seed = seed;
            o.item = s.item;
            o.question = q.raw;
            o.order = q.order();
            o.predicted = r.predicted;
            o.gold = gold;
            o.correct = r.parsed ? answer_correct(*r.parsed, gold) : normalize_answer(r.predicted) == normalize_answer(gold);
            o.flagged = r.flagged();
            if (o.correct) ++correct;
            if (o.flagged) ++report.flagged;
            auto& b = report.by_order[o.order];
            ++b.total;
            if (o.correct) ++b.correct;
            report.outcomes.push_back(std::move(o));
        }
        report.seed_accuracy.push_back(chosen.empty() ? 0.0
                                                      : static_cast<double>(correct) / static_cast<double>(chosen.size()));
    }

    const auto n = static_cast<double>(report.seed_accuracy.size());
    report.mean_accuracy = std::accumulate(report.seed_accuracy.begin(), report.seed_accuracy.end(), 0.0) / n;
    if (report.seed_accuracy.size() >= 2) {
        double ss = 0.0;
        for (double a : report.seed_accuracy) ss += (a - report.mean_accuracy) * (a - report.mean_accuracy);
        report.variance = ss / (n - 1.0);
    }
    return report;
}

EvalReport evaluate(const std::filesystem::path& dataset, const PipelineConfig& cfg, const EvalOptions& options) {
    const auto items = read_dataset(dataset);
    const Pipeline pipeline(cfg);
    return evaluate(items, pipeline, options);
}

json EvalReport::to_json() const {
    json j;
    j["config"] = config;
    j["num_items"] = num_items;
    j["num_questions"] = num_questions;
    j["skipped_missing_gold"] = skipped_missing_gold;
    j["skipped_errors"] = skipped_errors;
    j["flagged"] = flagged;
    j["seeds"] = seeds;
    j["seed_accuracy"] = seed_accuracy;
    j["mean_accuracy"] = mean_accuracy;
    j["variance"] = variance ? json(*variance) : json(nullptr);
    json orders = json::object();
    for (const auto& [k, b] : by_order) {
        orders[std::to_string(k)] = {{"total", b.total}, {"correct", b.correct}, {"accuracy", b.accuracy()}};
    }
    j["by_order"] = orders;
    j["graph_counts"] = {{"enigma", graph_totals.enigma}, {"symbolic_tom", graph_totals.symbolic_tom}};
    json qs = json::array();
    for (const auto& o : outcomes) {
        qs.push_back({{"seed", o.seed},
                      {"item", o.item},
                      {"question", o.question},
                      {"order", o.order},
                      {"predicted", o.predicted},
                      {"gold", o.gold},
                      {"correct", o.correct},
                      {"flagged", o.flagged}});
    }
    j["questions"] = qs;
    return j;
}

std::string EvalReport::to_table() const {
    std::ostringstream os;
    os << "items: " << num_items << "  questions: " << num_questions << "  missing gold: " << skipped_missing_gold
       << "  errors: " << skipped_errors << "  flagged: " << flagged << "\n";
    os << "accuracy: " << fmt(mean_accuracy);
    if (variance) os << "  variance: " << fmt(*variance);
    os << "  (" << seeds.size() << " seed" << (seeds.size() == 1 ? "" : "s") << ")\n";
    os << "order  total  correct  accuracy\n";
    for (const auto& [k, b] : by_order) {
        char line[96];
        std::snprintf(line, sizeof line, "%5d  %5zu  %7zu  %8s\n", k, b.total, b.correct, fmt(b.accuracy()).c_str());
        os << line;
    }
    os << "graphs built: enigma " << graph_totals.enigma << " vs symbolic_tom " << graph_totals.symbolic_tom << "\n";
    return os.str();
}

}  // namespace enigmatom
