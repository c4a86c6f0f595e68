#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "loe/corpus.hpp"
#include "loe/error.hpp"
#include "loe/log.hpp"
#include "loe/random.hpp"
#include "loe/synthetic.hpp"

using namespace loe;
using testing_support::TempDir;

namespace {

LabeledDataset dataset_with_counts(const std::array<std::size_t, kNumBands>& counts) {
    LabeledDataset ds;
    ds.name = "counts";
    std::size_t id = 0;
    for (std::size_t c = 0; c < kNumBands; ++c) {
        for (std::size_t i = 0; i < counts[c]; ++i) {
            Document d;
            d.doc_id = "d" + std::to_string(id++);
            d.title = "t";
            d.abstract = "a";
            d.gold_loe = LoELabel(static_cast<Band>(c));
            ds.items.push_back({d, *d.gold_loe});
        }
    }
    return ds;
}

std::array<std::size_t, kNumBands> class_counts(const LabeledDataset& ds) {
    std::array<std::size_t, kNumBands> counts{};
    for (const auto& item : ds.items) ++counts[item.label.index()];
    return counts;
}

}  // namespace

TEST(Corpus, LoadsDocumentsWithAndWithoutLabels) {
    TempDir dir;
    auto path = dir.write("c.jsonl",
                          "{\"doc_id\":\"p1\",\"title\":\"t\",\"abstract\":\"a\"}\n"
                          "\n"
                          "{\"doc_id\":\"p2\",\"title\":\"t\",\"abstract\":\"a\",\"loe\":\"1a\"}\n"
                          "{\"doc_id\":\"p3\",\"title\":\"t\",\"abstract\":\"a\",\"loe\":\"2b\",\"assigned_loe\":\"3a\"}\n");
    const auto docs = load_corpus(path);
    ASSERT_EQ(docs.size(), 3u);
    EXPECT_EQ(docs[0].doc_id, "p1");
    EXPECT_FALSE(docs[0].gold_loe.has_value());
    EXPECT_EQ(docs[1].gold_loe, LoELabel(Band::L1a));
    EXPECT_EQ(docs[2].assigned_loe, LoELabel(Band::L3a));
    EXPECT_EQ(docs[2].text(), "t a");
}

TEST(Corpus, DuplicateIdsAbortEvenWhenSkipping) {
    TempDir dir;
    auto path = dir.write("c.jsonl",
                          "{\"doc_id\":\"p1\",\"title\":\"t\",\"abstract\":\"a\"}\n"
                          "{\"doc_id\":\"p1\",\"title\":\"u\",\"abstract\":\"b\"}\n");
    EXPECT_THROW(load_corpus(path), RecordError);
    EXPECT_THROW(load_corpus(path, {OnMalformed::SkipAndWarn}), RecordError);
}

TEST(Corpus, MalformedLineReportsLineNumber) {
    TempDir dir;
    auto path = dir.write("c.jsonl",
                          "{\"doc_id\":\"p1\",\"title\":\"t\",\"abstract\":\"a\"}\n"
                          "{\"doc_id\":\"p2\",\"title\":\"t\"}\n"
                          "not json\n"
                          "{\"doc_id\":\"p4\",\"title\":\"t\",\"abstract\":\"a\",\"loe\":\"5\"}\n"
                          "{\"doc_id\":\"p5\",\"title\":\"t\",\"abstract\":\"a\"}\n");
    try {
        load_corpus(path);
        FAIL() << "expected RecordError";
    } catch (const RecordError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    log::ScopedCapture capture;
    const auto docs = load_corpus(path, {OnMalformed::SkipAndWarn});
    ASSERT_EQ(docs.size(), 2u);
    EXPECT_EQ(docs[1].doc_id, "p5");
    EXPECT_EQ(capture.messages().size(), 4u);  // three skipped lines + summary
}

TEST(Corpus, MissingFileIsADataError) {
    EXPECT_THROW(load_corpus("/nonexistent/corpus.jsonl"), DataError);
}

TEST(Corpus, WriteThenLoadRoundTrips) {
    TempDir dir;
    Collection docs(2);
    docs[0] = {"a1", "Title \"quoted\"", "abstract é", LoELabel(Band::L1b), std::nullopt};
    docs[1] = {"a2", "x", "y", std::nullopt, LoELabel(Band::L4)};
    write_corpus(docs, dir.file("out.jsonl"));
    const auto back = load_corpus(dir.file("out.jsonl"));
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].title, docs[0].title);
    EXPECT_EQ(back[0].abstract, docs[0].abstract);
    EXPECT_EQ(back[0].gold_loe, docs[0].gold_loe);
    EXPECT_EQ(back[1].assigned_loe, docs[1].assigned_loe);
}

TEST(Corpus, ToLabeledRequiresGold) {
    Collection docs(1);
    docs[0].doc_id = "x";
    EXPECT_THROW(to_labeled(docs, "n"), DataError);
}

TEST(Split, PaperSizesFor2816Items) {
    const auto ds = synth::make_evidence_corpus(2816, 3);
    const auto split = stratified_split(ds, {0.6, 0.2, 0.2}, 11);
    EXPECT_EQ(split.train.size(), 1690u);
    EXPECT_EQ(split.valid.size(), 563u);
    EXPECT_EQ(split.test.size(), 563u);
}

TEST(Split, TenItemsOfOneClass) {
    std::array<std::size_t, kNumBands> counts{};
    counts[2] = 10;
    const auto split = stratified_split(dataset_with_counts(counts), {}, 1);
    EXPECT_EQ(split.train.size(), 6u);
    EXPECT_EQ(split.valid.size(), 2u);
    EXPECT_EQ(split.test.size(), 2u);
}

TEST(Split, DeterministicForFixedSeedAndVariesWithSeed) {
    const auto ds = synth::make_evidence_corpus(500, 5);
    auto ids = [](const LabeledDataset& d) {
        std::vector<std::string> out;
        for (const auto& item : d.items) out.push_back(item.document.doc_id);
        return out;
    };
    const auto a = stratified_split(ds, {}, 42);
    const auto b = stratified_split(ds, {}, 42);
    const auto c = stratified_split(ds, {}, 43);
    EXPECT_EQ(ids(a.train), ids(b.train));
    EXPECT_EQ(ids(a.valid), ids(b.valid));
    EXPECT_EQ(ids(a.test), ids(b.test));
    EXPECT_NE(ids(a.test), ids(c.test));
}

TEST(Split, PartitionAndStratificationProperties) {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        std::array<std::size_t, kNumBands> counts{};
        for (auto& c : counts) c = uniform_index(rng, 60);
        std::size_t n = 0;
        for (auto c : counts) n += c;
        if (n < 3) continue;
        const auto ds = dataset_with_counts(counts);
        const double r[3] = {0.6, 0.2, 0.2};
        const auto split = stratified_split(ds, {r[0], r[1], r[2]}, trial);
        const LabeledDataset* parts[3] = {&split.train, &split.valid, &split.test};

        std::multiset<std::string> seen;
        for (auto* p : parts) {
            for (const auto& item : p->items) seen.insert(item.document.doc_id);
        }
        ASSERT_EQ(seen.size(), n);
        ASSERT_EQ(std::set<std::string>(seen.begin(), seen.end()).size(), n) << "splits overlap";

        for (int s = 0; s < 3; ++s) {
            const auto got = class_counts(*parts[s]);
            for (std::size_t c = 0; c < kNumBands; ++c) {
                if (counts[c] < 3) continue;
                EXPECT_LE(std::abs(static_cast<double>(got[c]) - counts[c] * r[s]), 1.0 + 1e-9)
                    << "trial " << trial << " split " << s << " class " << c;
            }
        }
        if (!split.train.empty()) {
            const auto got = class_counts(split.train);
            for (std::size_t c = 0; c < kNumBands; ++c) {
                const double full = static_cast<double>(counts[c]) / n;
                const double train = static_cast<double>(got[c]) / split.train.size();
                EXPECT_LE(std::abs(full - train), 1.0 / split.train.size() + 1e-12) << "trial " << trial;
            }
        }
    }
}

TEST(Split, SmallClassWarnsAndFillsTrainFirst) {
    std::array<std::size_t, kNumBands> counts{};
    counts[0] = 20;
    counts[6] = 1;
    log::ScopedCapture capture;
    const auto split = stratified_split(dataset_with_counts(counts), {}, 1);
    EXPECT_EQ(capture.messages().size(), 1u);
    EXPECT_EQ(class_counts(split.train)[6], 1u);
}

TEST(Split, RejectsBadRatios) {
    const auto ds = dataset_with_counts({5, 5, 5, 5, 5, 5, 5});
    EXPECT_THROW(stratified_split(ds, {0.5, 0.2, 0.2}, 1), InvalidArgument);
    EXPECT_THROW(stratified_split(ds, {1.0, 0.0, 0.0}, 1), InvalidArgument);
}

TEST(Distribution, GuidelineShares) {
    const auto ds = synth::make_evidence_corpus(2816, 1, synth::kGuidelineShares);
    const auto dist = label_distribution(ds);
    const double expected[] = {0.14, 0.18, 0.10, 0.24, 0.12, 0.07, 0.15};
    double sum = 0;
    for (std::size_t c = 0; c < kNumBands; ++c) {
        EXPECT_NEAR(dist.at(static_cast<Band>(c)), expected[c], 0.005);
        sum += dist.at(static_cast<Band>(c));
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
}

TEST(Distribution, MedlineLikeCollection) {
    synth::TestbedParams params;
    const auto bed = synth::make_retrieval_testbed(params);
    const auto dist = assigned_distribution(bed.docs);
    EXPECT_NEAR(dist.at(Band::L4), 0.41, 0.005);
    EXPECT_NEAR(dist.at(Band::L1a), 0.07, 0.005);
    EXPECT_NEAR(dist.at(Band::L1b), 0.07, 0.005);
}

TEST(Distribution, SingleClassAndEmpty) {
    std::array<std::size_t, kNumBands> counts{};
    counts[3] = 4;
    const auto dist = label_distribution(dataset_with_counts(counts));
    EXPECT_EQ(dist.size(), kNumBands);
    EXPECT_DOUBLE_EQ(dist.at(Band::L2b), 1.0);
    EXPECT_DOUBLE_EQ(dist.at(Band::L1a), 0.0);
    EXPECT_THROW(label_distribution(LabeledDataset{}), InvalidArgument);
}
