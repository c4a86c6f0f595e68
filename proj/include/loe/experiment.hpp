#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "loe/index.hpp"
#include "loe/stats.hpp"
#include "loe/trec.hpp"

namespace loe {

struct Topic {
    std::string id;
    std::string query;
};

/// Reads topics from either a TREC Precision Medicine XML file (disease and
/// gene fields concatenated, demographic omitted) or a tab-separated file of
/// "id<TAB>query" lines.
std::vector<Topic> load_topics(const std::filesystem::path& path);
std::vector<Topic> parse_topics(std::string_view text, const std::string& source = "<topics>");

struct ExperimentOptions {
    /// Cutoff of NDCG and precision.
    std::size_t k = 10;
    /// Retrieval depth per topic; R-Prec and infNDCG-approx read the full list.
    std::size_t depth = 1000;
    double log_base = 2.0;
};

struct TopicScores {
    double ndcg = 0.0;
    double infndcg_approx = 0.0;
    double r_prec = 0.0;
    double p_at_k = 0.0;
};

struct MetricMeans {
    double ndcg = 0.0;
    double infndcg_approx = 0.0;
    double r_prec = 0.0;
    double p_at_k = 0.0;
};

struct BandResult {
    FilterBand band = FilterBand::All;
    double admitted_fraction = 0.0;
    std::map<std::string, TopicScores, TopicLess> per_topic;
    MetricMeans mean;
    /// mean(band) - mean(All), per metric.
    MetricMeans delta;
    /// Paired t-test of per-topic NDCG against All.
    std::optional<TTestResult> ndcg_test;
    Run run;
};

struct ExperimentReport {
    std::string name;
    std::size_t k = 10;
    std::vector<std::string> evaluated_topics;
    std::vector<std::string> skipped_topics;
    std::vector<BandResult> bands;
    /// Bonferroni-corrected alpha for the per-band NDCG tests (0.05 / tests).
    double corrected_alpha = 0.05;

    const BandResult& band(FilterBand b) const;
};

/// Searches every topic under every band (All is always evaluated as the
/// baseline and listed first) and scores the runs against the qrels.
/// Topics without judgments are skipped with a warning; topics without
/// relevant documents are skipped silently. Topics are processed in
/// TopicLess order.
ExperimentReport run_experiment(const Index& index, std::span<const Topic> topics, const Qrels& qrels,
                                std::span<const FilterBand> bands, const ExperimentOptions& options = {},
                                std::string name = "");

/// Two tables shaped like a collection-by-band results table: NDCG@k with
/// deltas and collection share, then infNDCG-approx / R-Prec / P@k.
std::string format_report_text(std::span<const ExperimentReport> reports);
nlohmann::json report_to_json(std::span<const ExperimentReport> reports);
/// One row per (set, band, topic).
std::string format_report_csv(std::span<const ExperimentReport> reports);

}  // namespace loe
