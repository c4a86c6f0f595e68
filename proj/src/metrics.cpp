#include "loe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>

#include "loe/error.hpp"

namespace loe {

double dcg(std::span<const int> grades_by_rank, std::size_t k, double log_base) {
    const double log_b = std::log(log_base);
    double sum = 0.0;
    const std::size_t n = std::min(k, grades_by_rank.size());
    for (std::size_t j = 1; j <= n; ++j) {
        const double discount = std::max(1.0, std::log(static_cast<double>(j)) / log_b);
        sum += grades_by_rank[j - 1] / discount;
    }
    return sum;
}

std::optional<double> ndcg_from_grades(std::span<const int> grades_by_rank, std::span<const int> judged_grades,
                                       std::size_t k, double log_base) {
    if (k == 0) throw InvalidArgument("NDCG cutoff must be >= 1");
    std::vector<int> ideal(judged_grades.begin(), judged_grades.end());
    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    const double best = dcg(ideal, k, log_base);
    if (best <= 0.0) return std::nullopt;
    return dcg(grades_by_rank, k, log_base) / best;
}

namespace {

std::vector<int> judged_grades(const Qrels::TopicJudgments& judgments) {
    std::vector<int> g;
    g.reserve(judgments.size());
    for (const auto& [_, grade] : judgments) g.push_back(grade);
    return g;
}

int lookup(const Qrels::TopicJudgments& judgments, const std::string& doc) {
    auto it = judgments.find(doc);
    return it == judgments.end() ? 0 : it->second;
}

}  // namespace

std::optional<double> ndcg_at_k(std::span<const std::string> ranking, const Qrels::TopicJudgments& judgments,
                                std::size_t k, double log_base) {
    std::vector<int> grades;
    grades.reserve(std::min(k, ranking.size()));
    for (std::size_t i = 0; i < ranking.size() && i < k; ++i) grades.push_back(lookup(judgments, ranking[i]));
    return ndcg_from_grades(grades, judged_grades(judgments), k, log_base);
}

std::optional<double> condensed_ndcg_at_k(std::span<const std::string> ranking,
                                          const Qrels::TopicJudgments& judgments, std::size_t k, double log_base) {
    std::vector<int> grades;
    for (const auto& doc : ranking) {
        if (grades.size() >= k) break;
        auto it = judgments.find(doc);
        if (it != judgments.end()) grades.push_back(it->second);
    }
    return ndcg_from_grades(grades, judged_grades(judgments), k, log_base);
}

double precision_at_k(std::span<const std::string> ranking, const Qrels::TopicJudgments& judgments, std::size_t k) {
    if (k == 0) throw InvalidArgument("precision cutoff must be >= 1");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ranking.size() && i < k; ++i) hits += lookup(judgments, ranking[i]) >= 1 ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(k);
}

std::optional<double> r_precision(std::span<const std::string> ranking, const Qrels::TopicJudgments& judgments) {
    const auto r = static_cast<std::size_t>(
        std::count_if(judgments.begin(), judgments.end(), [](const auto& e) { return e.second >= 1; }));
    if (r == 0) return std::nullopt;
    return precision_at_k(ranking, judgments, r);
}

std::size_t ConfusionMatrix::total() const {
    std::size_t t = 0;
    for (const auto& row : counts) {
        for (auto c : row) t += c;
    }
    return t;
}

std::size_t ConfusionMatrix::row_sum(std::size_t truth) const {
    std::size_t t = 0;
    for (auto c : counts[truth]) t += c;
    return t;
}

std::size_t ConfusionMatrix::column_sum(std::size_t predicted) const {
    std::size_t t = 0;
    for (const auto& row : counts) t += row[predicted];
    return t;
}

ConfusionMatrix confusion_matrix(std::span<const LoELabel> predictions, std::span<const LoELabel> truths) {
    if (predictions.size() != truths.size()) throw InvalidArgument("confusion matrix: length mismatch");
    if (predictions.empty()) throw InvalidArgument("confusion matrix: no items");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predictions.size(); ++i) ++cm.counts[truths[i].index()][predictions[i].index()];
    return cm;
}

std::array<double, kNumBands> per_class_f1(const ConfusionMatrix& cm) {
    std::array<double, kNumBands> f1{};
    for (std::size_t c = 0; c < kNumBands; ++c) {
        const double tp = static_cast<double>(cm.counts[c][c]);
        const double predicted = static_cast<double>(cm.column_sum(c));
        const double actual = static_cast<double>(cm.row_sum(c));
        const double precision = predicted > 0 ? tp / predicted : 0.0;
        const double recall = actual > 0 ? tp / actual : 0.0;
        f1[c] = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    }
    return f1;
}

double macro_f1(const ConfusionMatrix& cm) {
    const auto f1 = per_class_f1(cm);
    double sum = 0.0;
    std::size_t classes = 0;
    for (std::size_t c = 0; c < kNumBands; ++c) {
        if (cm.row_sum(c) == 0 && cm.column_sum(c) == 0) continue;
        sum += f1[c];
        ++classes;
    }
    return classes == 0 ? 0.0 : sum / static_cast<double>(classes);
}

double rmse(std::span<const int> predicted_ordinals, std::span<const int> true_ordinals) {
    if (predicted_ordinals.size() != true_ordinals.size()) throw InvalidArgument("rmse: length mismatch");
    if (predicted_ordinals.empty()) throw InvalidArgument("rmse: no items");
    double sum = 0.0;
    for (std::size_t i = 0; i < predicted_ordinals.size(); ++i) {
        const double d = predicted_ordinals[i] - true_ordinals[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(predicted_ordinals.size()));
}

double rmse(std::span<const LoELabel> predictions, std::span<const LoELabel> truths) {
    std::vector<int> p;
    std::vector<int> t;
    for (auto l : predictions) p.push_back(l.ordinal());
    for (auto l : truths) t.push_back(l.ordinal());
    return rmse(p, t);
}

std::string format_confusion_matrix(const ConfusionMatrix& cm) {
    std::ostringstream out;
    out << "true\\pred";
    for (auto b : kAllBands) out << std::setw(6) << band_name(b);
    out << '\n';
    for (std::size_t r = 0; r < kNumBands; ++r) {
        out << std::setw(9) << band_name(static_cast<Band>(r));
        for (std::size_t c = 0; c < kNumBands; ++c) out << std::setw(6) << cm.counts[r][c];
        out << '\n';
    }
    return out.str();
}

}  // namespace loe
