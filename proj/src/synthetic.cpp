#include "loe/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "loe/error.hpp"
#include "loe/random.hpp"

namespace loe::synth {

std::array<std::size_t, kNumBands> band_counts(std::size_t n, const std::array<double, kNumBands>& shares) {
    const double total = std::accumulate(shares.begin(), shares.end(), 0.0);
    if (!(total > 0.0)) throw InvalidArgument("band shares must sum to a positive value");
    std::array<std::size_t, kNumBands> counts{};
    std::array<double, kNumBands> remainder{};
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < kNumBands; ++c) {
        const double exact = static_cast<double>(n) * shares[c] / total;
        counts[c] = static_cast<std::size_t>(std::floor(exact));
        remainder[c] = exact - std::floor(exact);
        assigned += counts[c];
    }
    std::array<std::size_t, kNumBands> order{};
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++counts[order[i % kNumBands]];
    return counts;
}

namespace {

std::vector<LoELabel> shuffled_labels(std::size_t n, const std::array<double, kNumBands>& shares, Rng& rng) {
    const auto counts = band_counts(n, shares);
    std::vector<LoELabel> labels;
    labels.reserve(n);
    for (std::size_t c = 0; c < kNumBands; ++c) labels.insert(labels.end(), counts[c], LoELabel(static_cast<Band>(c)));
    shuffle(labels, rng);
    return labels;
}

std::string doc_id(const char* prefix, std::size_t i) {
    std::string digits = std::to_string(i);
    return std::string(prefix) + std::string(digits.size() < 5 ? 5 - digits.size() : 0, '0') + digits;
}

template <typename T>
const T& pick(const std::vector<T>& items, Rng& rng) {
    return items[uniform_index(rng, items.size())];
}

}  // namespace

LabeledDataset make_signature_corpus(std::size_t per_class, double signal, double label_noise, std::uint64_t seed) {
    Rng rng(seed);
    LabeledDataset ds;
    ds.name = "signature";
    constexpr std::size_t kSignatureWords = 12;
    constexpr std::size_t kBackgroundWords = 300;
    for (std::size_t c = 0; c < kNumBands; ++c) {
        for (std::size_t i = 0; i < per_class; ++i) {
            std::string text;
            for (std::size_t slot = 0; slot < 6; ++slot) {
                const std::size_t source = uniform_unit(rng) < signal ? c : uniform_index(rng, kNumBands);
                text += "sig" + std::to_string(source) + "x" + std::to_string(uniform_index(rng, kSignatureWords)) + ' ';
            }
            for (std::size_t w = 0; w < 20; ++w) text += "bg" + std::to_string(uniform_index(rng, kBackgroundWords)) + ' ';
            LoELabel label(static_cast<Band>(c));
            if (uniform_unit(rng) < label_noise) label = LoELabel(static_cast<Band>(uniform_index(rng, kNumBands)));
            Document doc;
            doc.doc_id = doc_id("s", c * per_class + i);
            doc.title = "signature document " + std::to_string(c * per_class + i);
            doc.abstract = text;
            doc.gold_loe = label;
            ds.items.push_back({std::move(doc), label});
        }
    }
    return ds;
}

LabeledDataset make_evidence_corpus(std::size_t n, std::uint64_t seed, const std::array<double, kNumBands>& shares) {
    static const std::array<std::vector<std::string>, kNumBands> design = {{
        {"systematic review of randomized controlled trials", "meta-analysis of RCTs", "pooled RCT data",
         "systematic review and meta-analysis", "Cochrane review of randomised trials"},
        {"randomized controlled trial", "patients were randomly assigned", "double-blind placebo-controlled RCT",
         "multicentre randomised trial", "open-label RCT with active control"},
        {"systematic review of cohort studies", "meta-analysis of observational cohorts",
         "pooled longitudinal cohort data", "systematic review of prognostic cohorts"},
        {"prospective cohort study", "retrospective cohort", "longitudinal follow-up of exposure",
         "population-based cohort with accrual over ten years", "cohort study of risk"},
        {"systematic review of case-control studies", "meta-analysis of case-control data",
         "epidemiological review with case definition"},
        {"case-control study", "matched controls and odds ratio", "case definition and exposure history",
         "hospital-based case-control design"},
        {"case series", "small sample exploratory research", "preliminary evidence from an uncontrolled study",
         "case report", "single-centre experience"},
    }};
    static const std::vector<std::string> topics = {
        "breast cancer", "melanoma", "colorectal carcinoma", "lung adenocarcinoma", "prostate cancer",
        "glioblastoma", "acute myeloid leukemia", "pancreatic cancer", "ovarian carcinoma", "lymphoma"};
    static const std::vector<std::string> interventions = {
        "chemotherapy", "radiotherapy", "immunotherapy", "surgical resection", "targeted therapy",
        "acupuncture", "hormone therapy", "palliative care", "screening", "adjuvant treatment"};
    static const std::vector<std::string> background = {
        "patients", "survival", "outcome", "treatment", "response", "toxicity", "progression", "median",
        "overall", "clinical", "tumour", "stage", "dose", "quality of life", "mortality", "recurrence",
        "biomarker", "diagnosis", "therapy", "hazard", "endpoint", "women", "men", "adults", "elderly"};

    Rng rng(seed);
    const auto labels = shuffled_labels(n, shares, rng);
    LabeledDataset ds;
    ds.name = "evidence";
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = labels[i].index();
        const std::string& topic = pick(topics, rng);
        const std::string& intervention = pick(interventions, rng);
        Document doc;
        doc.doc_id = doc_id("e", i);
        doc.title = intervention + " in " + topic;
        std::string abstract;
        const std::size_t phrases = 1 + uniform_index(rng, 2);
        for (std::size_t p = 0; p < phrases; ++p) {
            // Occasionally borrow design vocabulary from a neighbouring band.
            std::size_t source = c;
            if (uniform_unit(rng) < 0.15) source = c == 0 ? 1 : (c == kNumBands - 1 ? c - 1 : c + (uniform_index(rng, 2) ? 1 : -1));
            abstract += pick(design[source], rng) + ". ";
        }
        const std::size_t words = 10 + uniform_index(rng, 15);
        for (std::size_t w = 0; w < words; ++w) abstract += pick(background, rng) + ' ';
        abstract += topic + " " + intervention + ".";
        doc.abstract = std::move(abstract);
        doc.gold_loe = labels[i];
        ds.items.push_back({std::move(doc), labels[i]});
    }
    return ds;
}

RetrievalTestbed make_retrieval_testbed(const TestbedParams& params) {
    if (params.n_topics == 0 || params.n_docs == 0) throw InvalidArgument("testbed needs documents and topics");
    Rng rng(params.seed);
    constexpr std::size_t kTopicWords = 6;
    constexpr std::size_t kQueryWords = 3;
    constexpr std::size_t kBackgroundWords = 1500;

    auto topic_word = [](std::size_t t, std::size_t j) { return "t" + std::to_string(t) + "k" + std::to_string(j); };

    RetrievalTestbed bed;
    for (std::size_t t = 0; t < params.n_topics; ++t) {
        std::string q;
        for (std::size_t j = 0; j < kQueryWords; ++j) q += (j ? " " : "") + topic_word(t, j);
        bed.topics.push_back({std::to_string(t + 1), q});
    }

    const auto labels = shuffled_labels(params.n_docs, params.shares, rng);
    for (std::size_t i = 0; i < params.n_docs; ++i) {
        const std::size_t topic = uniform_index(rng, params.n_topics);
        std::vector<std::string> words;
        const std::size_t background = 30 + uniform_index(rng, 60);
        for (std::size_t w = 0; w < background; ++w) words.push_back("bg" + std::to_string(uniform_index(rng, kBackgroundWords)));
        const std::size_t mentions = 1 + uniform_index(rng, 6);
        for (std::size_t m = 0; m < mentions; ++m) words.push_back(topic_word(topic, uniform_index(rng, kTopicWords)));
        // A stray mention of another topic makes some judged-irrelevant matches.
        if (uniform_unit(rng) < 0.2) words.push_back(topic_word(uniform_index(rng, params.n_topics), uniform_index(rng, kQueryWords)));
        shuffle(words, rng);

        Document doc;
        doc.doc_id = doc_id("d", i);
        doc.title = "document " + std::to_string(i);
        for (const auto& w : words) doc.abstract += w + ' ';
        doc.assigned_loe = labels[i];
        doc.gold_loe = labels[i];

        const std::string topic_id = std::to_string(topic + 1);
        int grade = 0;
        if (uniform_unit(rng) < params.relevance_by_band[labels[i].index()]) grade = uniform_unit(rng) < 0.5 ? 1 : 2;
        bed.qrels.add(topic_id, doc.doc_id, grade);
        bed.docs.push_back(std::move(doc));
    }
    return bed;
}

}  // namespace loe::synth
