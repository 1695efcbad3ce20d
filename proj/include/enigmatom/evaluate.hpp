#pragma once
// Dataset evaluation: accuracy per seed subset, per-order breakdown, and
// graph-count comparison.

#include "enigmatom/dataset.hpp"
#include "enigmatom/pipeline.hpp"
#include "enigmatom/scene_graph.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace enigmatom {

struct EvalOptions {
    std::vector<std::uint64_t> seeds{0};
    // Questions drawn per seed; all questions when unset.
    std::optional<std::size_t> subset_size;
    int workers = 1;
};

struct QuestionOutcome {
    std::uint64_t seed = 0;
    std::size_t item = 0;  // 0-based dataset line
    std::string question;
    int order = 0;
    std::string predicted;
    std::string gold;
    bool correct = false;
    bool flagged = false;
};

struct OrderBreakdown {
    std::size_t total = 0;
    std::size_t correct = 0;
    double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total); }
};

struct EvalReport {
    std::vector<QuestionOutcome> outcomes;
    std::vector<double> seed_accuracy;  // aligned with the seeds
    std::vector<std::uint64_t> seeds;
    double mean_accuracy = 0.0;
    std::optional<double> variance;  // sample variance; needs >= 2 seeds
    std::map<int, OrderBreakdown> by_order;
    std::size_t num_items = 0;
    std::size_t num_questions = 0;
    std::size_t skipped_missing_gold = 0;
    std::size_t skipped_errors = 0;
    std::size_t flagged = 0;
    GraphCounts graph_totals;
    nlohmann::json config;

    nlohmann::json to_json() const;
    std::string to_table() const;
};

EvalReport evaluate(std::span<const DatasetItem> items, const Pipeline& pipeline, const EvalOptions& options);
EvalReport evaluate(const std::filesystem::path& dataset, const PipelineConfig& cfg, const EvalOptions& options);

}  // namespace enigmatom
