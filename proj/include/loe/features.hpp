#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "loe/label.hpp"
#include "loe/textproc.hpp"

namespace loe {

/// Sparse feature vector with strictly increasing indices.
struct SparseVector {
    std::vector<std::pair<std::uint32_t, double>> entries;

    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }
    /// Weight of a feature, 0 when absent.
    double at(std::uint32_t index) const;
    double norm() const;

    friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

/// Fitted TF-IDF vocabulary. Indices are assigned in lexicographic term
/// order so fitting is independent of document order.
class TfidfModel {
public:
    TfidfModel() = default;
    TfidfModel(std::vector<std::string> terms, std::vector<std::uint32_t> document_frequency, std::uint32_t n_docs);

    std::size_t vocabulary_size() const { return terms_.size(); }
    std::uint32_t n_docs() const { return n_docs_; }
    const std::vector<std::string>& terms() const { return terms_; }
    const std::vector<std::uint32_t>& document_frequencies() const { return df_; }

    /// Feature index of a term, or -1 when out of vocabulary.
    std::int64_t index_of(const std::string& term) const;
    std::uint32_t document_frequency(const std::string& term) const;

    /// ln((1 + n_docs) / (1 + df)) + 1
    double idf(std::uint32_t index) const;

    /// tf * idf per in-vocabulary term, L2-normalized. OOV terms are dropped.
    SparseVector vectorize(const TermSequence& doc) const;

private:
    std::vector<std::string> terms_;
    std::vector<std::uint32_t> df_;
    std::unordered_map<std::string, std::uint32_t> index_;
    std::uint32_t n_docs_ = 0;
};

struct TfidfOptions {
    std::uint32_t min_df = 2;
};

/// Vocabulary = every term with document frequency >= min_df.
/// Throws InvalidArgument when every document is empty.
TfidfModel fit_tfidf(std::span<const TermSequence> docs, const TfidfOptions& options = {});

/// 2x2 chi-squared statistic N(ad-bc)^2 / ((a+b)(c+d)(a+c)(b+d)); 0 when a
/// marginal is empty. a = present & in class, b = present & other class,
/// c = absent & in class, d = absent & other class.
double chi2_statistic(double a, double b, double c, double d);

/// One-vs-rest chi-squared score of every feature (max over classes), using
/// feature presence (weight != 0) only.
std::vector<double> chi2_scores(std::span<const SparseVector> vectors, std::span<const LoELabel> labels,
                                std::size_t feature_count);

/// Indices of the k highest-scoring features, ascending. Score ties prefer
/// the lower feature index. k larger than the feature count returns every
/// feature and warns.
std::vector<std::uint32_t> chi2_select(std::span<const SparseVector> vectors, std::span<const LoELabel> labels,
                                       std::size_t feature_count, std::size_t k);

/// Keeps only the selected features and renumbers them densely in the order
/// given by `selected` (which must be ascending).
SparseVector project(const SparseVector& v, std::span<const std::uint32_t> selected);

}  // namespace loe
