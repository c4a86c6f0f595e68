#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "loe/error.hpp"
#include "loe/synthetic.hpp"

using namespace loe;

TEST(BandCounts, SumsAndLargestRemainder) {
    const auto c = synth::band_counts(100, synth::kMedlineShares);
    EXPECT_EQ(c, (std::array<std::size_t, kNumBands>{7, 7, 10, 19, 9, 7, 41}));
    for (std::size_t n : {0u, 1u, 7u, 13u, 2816u, 2000u}) {
        const auto counts = synth::band_counts(n, synth::kGuidelineShares);
        EXPECT_EQ(std::accumulate(counts.begin(), counts.end(), std::size_t{0}), n);
        for (std::size_t b = 0; b < kNumBands; ++b) {
            EXPECT_LE(std::abs(static_cast<double>(counts[b]) - n * synth::kGuidelineShares[b]), 1.0);
        }
    }
    EXPECT_THROW(synth::band_counts(5, {}), InvalidArgument);
}

TEST(SignatureCorpus, ShapeAndDeterminism) {
    const auto a = synth::make_signature_corpus(10, 1.0, 0.0, 3);
    ASSERT_EQ(a.size(), 70u);
    std::set<std::string> ids;
    for (const auto& item : a.items) {
        ids.insert(item.document.doc_id);
        EXPECT_EQ(item.document.gold_loe, item.label);
        // Separable corpus: every signature token belongs to the document's class.
        const std::string want = "sig" + std::to_string(item.label.ordinal()) + "x";
        std::size_t pos = 0;
        while ((pos = item.document.abstract.find("sig", pos)) != std::string::npos) {
            EXPECT_EQ(item.document.abstract.compare(pos, want.size(), want), 0);
            ++pos;
        }
    }
    EXPECT_EQ(ids.size(), 70u);
    const auto b = synth::make_signature_corpus(10, 1.0, 0.0, 3);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.items[i].document.abstract, b.items[i].document.abstract);
}

TEST(EvidenceCorpus, SharesAndVocabulary) {
    const auto ds = synth::make_evidence_corpus(1000, 5);
    ASSERT_EQ(ds.size(), 1000u);
    const auto expected = synth::band_counts(1000, synth::kGuidelineShares);
    std::array<std::size_t, kNumBands> got{};
    for (const auto& item : ds.items) ++got[item.label.index()];
    EXPECT_EQ(got, expected);
    std::size_t rct_in_1b = 0;
    std::size_t n_1b = 0;
    for (const auto& item : ds.items) {
        if (item.label.band() != Band::L1b) continue;
        ++n_1b;
        const auto& text = item.document.abstract;
        rct_in_1b += text.find("RCT") != std::string::npos || text.find("random") != std::string::npos;
    }
    EXPECT_GT(static_cast<double>(rct_in_1b) / n_1b, 0.8);
}

TEST(RetrievalTestbed, StructureAndRelevanceTrend) {
    synth::TestbedParams params;
    const auto bed = synth::make_retrieval_testbed(params);
    ASSERT_EQ(bed.docs.size(), 2000u);
    ASSERT_EQ(bed.topics.size(), 20u);
    std::array<std::size_t, kNumBands> total{};
    std::array<std::size_t, kNumBands> relevant{};
    for (const auto& d : bed.docs) {
        ASSERT_TRUE(d.assigned_loe.has_value());
        ++total[d.assigned_loe->index()];
    }
    for (const auto& [topic, judgments] : bed.qrels.all()) {
        for (const auto& [doc, grade] : judgments) {
            const std::size_t i = std::stoul(doc.substr(1));
            relevant[bed.docs[i].assigned_loe->index()] += grade > 0;
        }
    }
    EXPECT_EQ(total, synth::band_counts(2000, synth::kMedlineShares));
    const double strong = static_cast<double>(relevant[0] + relevant[1]) / (total[0] + total[1]);
    const double weak = static_cast<double>(relevant[6]) / total[6];
    EXPECT_GT(strong, weak + 0.3);
    EXPECT_THROW(synth::make_retrieval_testbed({.n_docs = 0}), InvalidArgument);
}
