#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "loe/corpus.hpp"
#include "loe/experiment.hpp"
#include "loe/trec.hpp"

namespace loe::synth {

/// Band shares of a literature-wide collection: 1a and 1b 7% each, level 4
/// 41%, so LoE1 admits 14%, LoE2+ 43% and LoE3+ 59%.
inline constexpr std::array<double, kNumBands> kMedlineShares = {0.07, 0.07, 0.10, 0.19, 0.09, 0.07, 0.41};

/// Band shares of the guideline-derived training data (14/18/10/24/12/7/15%).
inline constexpr std::array<double, kNumBands> kGuidelineShares = {0.14, 0.18, 0.10, 0.24, 0.12, 0.07, 0.15};

/// Exact per-band counts for n items (largest-remainder rounding).
std::array<std::size_t, kNumBands> band_counts(std::size_t n, const std::array<double, kNumBands>& shares);

/// Documents whose text is built from per-class signature tokens plus
/// shared background tokens. `signal` is the probability that each of a
/// document's signature slots draws from its own class (otherwise from a
/// random class); `label_noise` relabels that fraction of documents at
/// random. signal = 1, label_noise = 0 gives a separable corpus.
LabeledDataset make_signature_corpus(std::size_t per_class, double signal, double label_noise, std::uint64_t seed);

/// Abstract-like documents written with study-design vocabulary typical for
/// each band ("randomized controlled trial", "cohort study", "case series",
/// ...), shares following `shares`. Gold labels set.
LabeledDataset make_evidence_corpus(std::size_t n, std::uint64_t seed,
                                    const std::array<double, kNumBands>& shares = kGuidelineShares);

struct RetrievalTestbed {
    Collection docs;  // assigned_loe set
    std::vector<Topic> topics;
    Qrels qrels;
};

struct TestbedParams {
    std::size_t n_docs = 2000;
    std::size_t n_topics = 20;
    /// P(relevant | judged on-topic document) per band, strongest first.
    std::array<double, kNumBands> relevance_by_band = {0.70, 0.65, 0.50, 0.45, 0.35, 0.30, 0.20};
    std::array<double, kNumBands> shares = kMedlineShares;
    std::uint64_t seed = 1;
};

/// Collection, topics and graded judgments where relevance probability
/// grows with evidence strength while BM25 matching is independent of the
/// band.
RetrievalTestbed make_retrieval_testbed(const TestbedParams& params);

}  // namespace loe::synth
