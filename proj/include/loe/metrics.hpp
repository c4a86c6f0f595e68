#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loe/label.hpp"
#include "loe/trec.hpp"

namespace loe {

// ----- rank metrics -------------------------------------------------------
// "No value" (topic without relevant documents) is std::nullopt; callers
// exclude such topics from averages.

/// Sum over ranks j = 1..min(k, n) of grade_j / max(1, log_base(j)).
double dcg(std::span<const int> grades_by_rank, std::size_t k, double log_base = 2.0);

/// DCG of the ranking over DCG of all judged grades sorted descending.
/// nullopt when no judged grade is positive.
std::optional<double> ndcg_from_grades(std::span<const int> grades_by_rank, std::span<const int> judged_grades,
                                       std::size_t k = 10, double log_base = 2.0);

/// Unjudged retrieved documents count as grade 0.
std::optional<double> ndcg_at_k(std::span<const std::string> ranking, const Qrels::TopicJudgments& judgments,
                                std::size_t k = 10, double log_base = 2.0);

/// NDCG over the condensed list (unjudged documents removed before
/// cutting at k). Stand-in for infNDCG; reported as "infNDCG-approx".
std::optional<double> condensed_ndcg_at_k(std::span<const std::string> ranking,
                                          const Qrels::TopicJudgments& judgments, std::size_t k,
                                          double log_base = 2.0);

/// Relevant (grade >= 1) documents in the top k divided by k; short
/// rankings count the missing ranks as misses.
double precision_at_k(std::span<const std::string> ranking, const Qrels::TopicJudgments& judgments, std::size_t k = 10);

/// Relevant in the top R over R, R = number of relevant documents.
std::optional<double> r_precision(std::span<const std::string> ranking, const Qrels::TopicJudgments& judgments);

// ----- classification metrics --------------------------------------------

/// 7x7 counts; rows are true bands, columns predicted bands.
struct ConfusionMatrix {
    std::array<std::array<std::size_t, kNumBands>, kNumBands> counts{};

    std::size_t total() const;
    std::size_t row_sum(std::size_t truth) const;
    std::size_t column_sum(std::size_t predicted) const;
};

/// Throws InvalidArgument when the lengths differ or are zero.
ConfusionMatrix confusion_matrix(std::span<const LoELabel> predictions, std::span<const LoELabel> truths);

/// Per-class F1 (0 when precision + recall = 0).
std::array<double, kNumBands> per_class_f1(const ConfusionMatrix& cm);

/// Mean F1 over classes occurring in the truths or the predictions.
double macro_f1(const ConfusionMatrix& cm);

/// Root mean squared ordinal difference.
double rmse(std::span<const int> predicted_ordinals, std::span<const int> true_ordinals);
double rmse(std::span<const LoELabel> predictions, std::span<const LoELabel> truths);

/// Text rendering with band headers.
std::string format_confusion_matrix(const ConfusionMatrix& cm);

}  // namespace loe
