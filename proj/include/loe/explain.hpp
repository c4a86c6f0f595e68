#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "loe/classifier.hpp"
#include "loe/textproc.hpp"

namespace loe {

struct ExplainParams {
    std::size_t n_samples = 500;
    double kernel_width = 0.75;
    std::uint64_t seed = 0;
};

using TermWeights = std::vector<std::pair<std::string, double>>;

struct Explanation {
    std::string doc_id;
    LoELabel predicted;
    /// Per band: one weight per distinct document term, sorted by weight
    /// descending (ties by term).
    std::map<Band, TermWeights> weights;
    BandArray intercepts{};
};

/// A perturbation pattern over the distinct terms of a document:
/// retained[i] says whether term i is kept.
using Mask = std::vector<bool>;

/// Distinct terms of a sequence in order of first occurrence.
std::vector<std::string> distinct_terms(const TermSequence& terms);

/// Removes every occurrence of the masked-out terms; the unigram/bigram
/// split is preserved.
TermSequence apply_mask(const TermSequence& terms, std::span<const std::string> features, const Mask& retained);

/// Similarity kernel exp(-(1 - s)^2 / width^2), s = fraction of terms kept.
double mask_kernel(const Mask& retained, double kernel_width);

/// Sampled masks: the first keeps every term; each other draws a removal
/// count uniformly from [1, m] and removes that many distinct terms chosen
/// uniformly.
std::vector<Mask> sample_masks(std::size_t term_count, std::size_t n_samples, std::uint64_t seed);

/// Local surrogate explanation. Queries `classifier` on every sampled mask
/// and fits, per band, a weighted least-squares linear model (with
/// intercept) of the band confidence on the retained-term indicators.
/// Throws InvalidArgument for a document without terms.
Explanation explain(const ConfidenceFn& classifier, const std::string& doc_id, const TermSequence& terms,
                    const ExplainParams& params = {});

/// Weighted least squares with intercept over arbitrary masks; exposed so
/// alternative mask distributions can reuse the same solver. Returns one
/// coefficient vector per band, intercept first.
std::array<std::vector<double>, kNumBands> fit_surrogate(std::span<const Mask> masks, std::span<const double> weights,
                                                         std::span<const BandArray> targets);

/// Sums term weights per band across explanations and keeps the top_k
/// positive totals per band, descending.
std::map<Band, TermWeights> aggregate_term_scores(std::span<const Explanation> explanations, std::size_t top_k = 10);

}  // namespace loe
