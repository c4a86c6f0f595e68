#include "loe/explain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include <Eigen/Dense>

#include "loe/error.hpp"
#include "loe/random.hpp"

namespace loe {

std::vector<std::string> distinct_terms(const TermSequence& terms) {
    std::vector<std::string> out;
    std::unordered_set<std::string_view> seen;
    for (const auto& t : terms.terms) {
        if (seen.insert(t).second) out.push_back(t);
    }
    return out;
}

TermSequence apply_mask(const TermSequence& terms, std::span<const std::string> features, const Mask& retained) {
    std::unordered_set<std::string_view> removed;
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (!retained[i]) removed.insert(features[i]);
    }
    TermSequence out;
    for (std::size_t i = 0; i < terms.terms.size(); ++i) {
        if (removed.contains(terms.terms[i])) continue;
        out.terms.push_back(terms.terms[i]);
        if (i < terms.unigram_count) ++out.unigram_count;
    }
    return out;
}

double mask_kernel(const Mask& retained, double kernel_width) {
    const double kept = static_cast<double>(std::count(retained.begin(), retained.end(), true));
    const double s = kept / static_cast<double>(retained.size());
    const double d = 1.0 - s;
    return std::exp(-(d * d) / (kernel_width * kernel_width));
}

std::vector<Mask> sample_masks(std::size_t term_count, std::size_t n_samples, std::uint64_t seed) {
    std::vector<Mask> masks;
    if (n_samples == 0 || term_count == 0) return masks;
    masks.reserve(n_samples);
    masks.emplace_back(term_count, true);
    Rng rng(seed);
    std::vector<std::size_t> order(term_count);
    for (std::size_t s = 1; s < n_samples; ++s) {
        const std::size_t remove = 1 + uniform_index(rng, term_count);
        std::iota(order.begin(), order.end(), 0);
        Mask mask(term_count, true);
        for (std::size_t i = 0; i < remove; ++i) {
            const std::size_t j = i + uniform_index(rng, term_count - i);
            std::swap(order[i], order[j]);
            mask[order[i]] = false;
        }
        masks.push_back(std::move(mask));
    }
    return masks;
}

std::array<std::vector<double>, kNumBands> fit_surrogate(std::span<const Mask> masks, std::span<const double> weights,
                                                         std::span<const BandArray> targets) {
    if (masks.empty() || masks.size() != weights.size() || masks.size() != targets.size()) {
        throw InvalidArgument("surrogate fit: inconsistent sample counts");
    }
    const auto n = static_cast<Eigen::Index>(masks.size());
    const auto m = static_cast<Eigen::Index>(masks.front().size());

    Eigen::MatrixXd design(n, m + 1);
    Eigen::MatrixXd rhs(n, static_cast<Eigen::Index>(kNumBands));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double sw = std::sqrt(weights[static_cast<std::size_t>(i)]);
        design(i, 0) = sw;
        const auto& mask = masks[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < m; ++j) design(i, j + 1) = mask[static_cast<std::size_t>(j)] ? sw : 0.0;
        for (std::size_t c = 0; c < kNumBands; ++c) {
            rhs(i, static_cast<Eigen::Index>(c)) = sw * targets[static_cast<std::size_t>(i)][c];
        }
    }
    // Minimum-norm solution; sample sets that never vary a term are rank deficient.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
    const Eigen::MatrixXd coef = cod.solve(rhs);

    std::array<std::vector<double>, kNumBands> out;
    for (std::size_t c = 0; c < kNumBands; ++c) {
        out[c].resize(static_cast<std::size_t>(m + 1));
        for (Eigen::Index j = 0; j <= m; ++j) out[c][static_cast<std::size_t>(j)] = coef(j, static_cast<Eigen::Index>(c));
    }
    return out;
}

Explanation explain(const ConfidenceFn& classifier, const std::string& doc_id, const TermSequence& terms,
                    const ExplainParams& params) {
    if (terms.empty()) throw InvalidArgument("cannot explain a document without terms");
    if (params.n_samples < 2) throw InvalidArgument("explain needs at least two samples");
    if (!(params.kernel_width > 0.0)) throw InvalidArgument("kernel width must be positive");

    const auto features = distinct_terms(terms);
    const auto masks = sample_masks(features.size(), params.n_samples, params.seed);

    std::vector<double> weights;
    std::vector<BandArray> targets;
    weights.reserve(masks.size());
    targets.reserve(masks.size());
    for (const auto& mask : masks) {
        weights.push_back(mask_kernel(mask, params.kernel_width));
        targets.push_back(classifier(apply_mask(terms, features, mask)));
    }
    const auto coef = fit_surrogate(masks, weights, targets);

    Explanation ex;
    ex.doc_id = doc_id;
    ex.predicted = argmax_label(targets.front());
    for (std::size_t c = 0; c < kNumBands; ++c) {
        ex.intercepts[c] = coef[c][0];
        TermWeights tw;
        tw.reserve(features.size());
        for (std::size_t j = 0; j < features.size(); ++j) tw.emplace_back(features[j], coef[c][j + 1]);
        std::stable_sort(tw.begin(), tw.end(), [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
        ex.weights[static_cast<Band>(c)] = std::move(tw);
    }
    return ex;
}

std::map<Band, TermWeights> aggregate_term_scores(std::span<const Explanation> explanations, std::size_t top_k) {
    if (explanations.empty()) throw InvalidArgument("aggregate_term_scores: no explanations");
    std::map<Band, TermWeights> out;
    for (auto band : kAllBands) {
        std::map<std::string, double> sums;
        for (const auto& ex : explanations) {
            auto it = ex.weights.find(band);
            if (it == ex.weights.end()) continue;
            for (const auto& [term, w] : it->second) sums[term] += w;
        }
        TermWeights ranked;
        for (const auto& [term, total] : sums) {
            if (total > 0.0) ranked.emplace_back(term, total);
        }
        std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
        if (ranked.size() > top_k) ranked.resize(top_k);
        out[band] = std::move(ranked);
    }
    return out;
}

}  // namespace loe
