#include "loe/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "loe/error.hpp"
#include "loe/log.hpp"

namespace loe {

double SparseVector::at(std::uint32_t index) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), index,
                               [](const auto& e, std::uint32_t i) { return e.first < i; });
    return (it != entries.end() && it->first == index) ? it->second : 0.0;
}

double SparseVector::norm() const {
    double sum = 0.0;
    for (const auto& [_, w] : entries) sum += w * w;
    return std::sqrt(sum);
}

TfidfModel::TfidfModel(std::vector<std::string> terms, std::vector<std::uint32_t> document_frequency,
                       std::uint32_t n_docs)
    : terms_(std::move(terms)), df_(std::move(document_frequency)), n_docs_(n_docs) {
    if (terms_.size() != df_.size()) throw InvalidArgument("TF-IDF terms and frequencies differ in length");
    index_.reserve(terms_.size());
    for (std::uint32_t i = 0; i < terms_.size(); ++i) {
        if (df_[i] == 0) throw InvalidArgument("TF-IDF term '" + terms_[i] + "' has zero document frequency");
        if (!index_.emplace(terms_[i], i).second) throw InvalidArgument("duplicate TF-IDF term '" + terms_[i] + "'");
    }
}

std::int64_t TfidfModel::index_of(const std::string& term) const {
    auto it = index_.find(term);
    return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::uint32_t TfidfModel::document_frequency(const std::string& term) const {
    auto idx = index_of(term);
    return idx < 0 ? 0 : df_[static_cast<std::size_t>(idx)];
}

double TfidfModel::idf(std::uint32_t index) const {
    return std::log((1.0 + n_docs_) / (1.0 + df_[index])) + 1.0;
}

SparseVector TfidfModel::vectorize(const TermSequence& doc) const {
    std::map<std::uint32_t, std::uint32_t> tf;
    for (const auto& term : doc.terms) {
        auto it = index_.find(term);
        if (it != index_.end()) ++tf[it->second];
    }
    SparseVector v;
    v.entries.reserve(tf.size());
    for (const auto& [idx, count] : tf) v.entries.emplace_back(idx, count * idf(idx));
    const double n = v.norm();
    if (n > 0.0) {
        for (auto& e : v.entries) e.second /= n;
    }
    return v;
}

TfidfModel fit_tfidf(std::span<const TermSequence> docs, const TfidfOptions& options) {
    std::map<std::string, std::uint32_t> df;
    bool any = false;
    for (const auto& doc : docs) {
        if (doc.empty()) continue;
        any = true;
        std::unordered_set<std::string_view> seen;
        for (const auto& term : doc.terms) {
            if (seen.insert(term).second) ++df[term];
        }
    }
    if (!any) throw InvalidArgument("cannot fit TF-IDF on a corpus of empty documents");

    std::vector<std::string> terms;
    std::vector<std::uint32_t> freqs;
    for (auto& [term, count] : df) {
        if (count < options.min_df) continue;
        terms.push_back(term);
        freqs.push_back(count);
    }
    return TfidfModel(std::move(terms), std::move(freqs), static_cast<std::uint32_t>(docs.size()));
}

double chi2_statistic(double a, double b, double c, double d) {
    const double denom = (a + b) * (c + d) * (a + c) * (b + d);
    if (denom == 0.0) return 0.0;
    const double n = a + b + c + d;
    const double diff = a * d - b * c;
    return n * diff * diff / denom;
}

std::vector<double> chi2_scores(std::span<const SparseVector> vectors, std::span<const LoELabel> labels,
                                std::size_t feature_count) {
    if (vectors.size() != labels.size()) throw InvalidArgument("chi2: vectors and labels differ in length");
    const std::size_t n = vectors.size();

    std::array<double, kNumBands> class_totals{};
    for (auto label : labels) class_totals[label.index()] += 1.0;

    // present[f][c] = documents of class c containing feature f
    std::vector<std::array<double, kNumBands>> present(feature_count);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [idx, w] : vectors[i].entries) {
            if (idx >= feature_count) throw InvalidArgument("chi2: feature index out of range");
            if (w != 0.0) present[idx][labels[i].index()] += 1.0;
        }
    }

    std::vector<double> scores(feature_count, 0.0);
    const double total = static_cast<double>(n);
    for (std::size_t f = 0; f < feature_count; ++f) {
        const double with_feature = std::accumulate(present[f].begin(), present[f].end(), 0.0);
        double best = 0.0;
        for (std::size_t c = 0; c < kNumBands; ++c) {
            if (class_totals[c] == 0.0) continue;
            const double a = present[f][c];
            const double b = with_feature - a;
            const double cc = class_totals[c] - a;
            const double d = total - a - b - cc;
            best = std::max(best, chi2_statistic(a, b, cc, d));
        }
        scores[f] = best;
    }
    return scores;
}

std::vector<std::uint32_t> chi2_select(std::span<const SparseVector> vectors, std::span<const LoELabel> labels,
                                       std::size_t feature_count, std::size_t k) {
    if (k == 0) throw InvalidArgument("chi2_select: k must be >= 1");
    const auto scores = chi2_scores(vectors, labels, feature_count);
    std::vector<std::uint32_t> order(feature_count);
    std::iota(order.begin(), order.end(), 0u);
    if (k >= feature_count) {
        if (k > feature_count) {
            log::warn("chi2_select: k=" + std::to_string(k) + " exceeds feature count " +
                      std::to_string(feature_count) + "; keeping all features");
        }
        return order;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) { return scores[x] > scores[y]; });
    order.resize(k);
    std::sort(order.begin(), order.end());
    return order;
}

SparseVector project(const SparseVector& v, std::span<const std::uint32_t> selected) {
    SparseVector out;
    std::size_t j = 0;
    for (const auto& [idx, w] : v.entries) {
        while (j < selected.size() && selected[j] < idx) ++j;
        if (j == selected.size()) break;
        if (selected[j] == idx) out.entries.emplace_back(static_cast<std::uint32_t>(j), w);
    }
    return out;
}

}  // namespace loe
