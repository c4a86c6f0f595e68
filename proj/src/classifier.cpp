#include "loe/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "loe/error.hpp"

namespace loe {

using nlohmann::json;

Prediction Prediction::from_confidences(std::string doc_id, const BandArray& confidences, std::string source) {
    return Prediction{std::move(doc_id), confidences, argmax_label(confidences), std::move(source)};
}

LoELabel regression_to_label(double raw) {
    if (!std::isfinite(raw)) throw InvalidArgument("regression prediction is not finite");
    const double rounded = std::round(raw);  // half away from zero
    const double clamped = std::clamp(rounded, 0.0, static_cast<double>(kNumBands - 1));
    return LoELabel::from_ordinal(static_cast<int>(clamped));
}

LoELabel multilabel_to_label(const BandArray& scores, double threshold) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < kNumBands; ++i) {
        if (scores[i] >= threshold && (!best || scores[i] > scores[*best])) best = i;
    }
    if (best) return LoELabel(static_cast<Band>(*best));
    return argmax_label(scores);
}

LoELabel majority_vote(std::span<const Vote> votes) {
    if (votes.empty()) throw InvalidArgument("majority vote over an empty vote list");
    std::array<std::size_t, kNumBands> counts{};
    BandArray top_confidence;
    top_confidence.fill(-std::numeric_limits<double>::infinity());
    for (const auto& v : votes) {
        ++counts[v.label.index()];
        top_confidence[v.label.index()] = std::max(top_confidence[v.label.index()], v.confidence);
    }
    const std::size_t max_count = *std::max_element(counts.begin(), counts.end());
    std::optional<std::size_t> winner;
    for (std::size_t i = 0; i < kNumBands; ++i) {
        if (counts[i] != max_count) continue;
        if (!winner || top_confidence[i] > top_confidence[*winner]) winner = i;
    }
    return LoELabel(static_cast<Band>(*winner));
}

Vote to_vote(const ExternalPrediction& p) {
    if (const auto* c = std::get_if<Prediction>(&p)) return {c->chosen, c->chosen_confidence()};
    const auto& r = std::get<RegressionPrediction>(p);
    const LoELabel label = regression_to_label(r.raw);
    return {label, std::max(0.0, 1.0 - std::abs(r.raw - label.ordinal()))};
}

const std::string& doc_id_of(const ExternalPrediction& p) {
    return std::visit([](const auto& x) -> const std::string& { return x.doc_id; }, p);
}

std::optional<LoELabel> label_or_abstain(const Prediction& p, std::optional<double> abstain_below) {
    if (abstain_below && p.chosen_confidence() < *abstain_below) return std::nullopt;
    return p.chosen;
}

ExternalPrediction parse_prediction_record(const json& record) {
    if (!record.is_object()) throw DataError("record is not a JSON object");
    auto id = record.find("doc_id");
    if (id == record.end() || !id->is_string() || id->get<std::string>().empty()) {
        throw DataError("missing or empty doc_id");
    }
    std::string source = record.value("source", std::string());

    const bool has_conf = record.contains("confidences");
    const bool has_raw = record.contains("raw");
    if (has_conf == has_raw) throw DataError("record needs exactly one of 'confidences' or 'raw'");

    if (has_raw) {
        const auto& raw = record.at("raw");
        if (!raw.is_number()) throw DataError("'raw' is not a number");
        const double value = raw.get<double>();
        if (!std::isfinite(value)) throw DataError("'raw' is not finite");
        return RegressionPrediction{id->get<std::string>(), value, std::move(source)};
    }

    const auto& conf = record.at("confidences");
    if (!conf.is_object()) throw DataError("'confidences' is not an object");
    BandArray values{};
    std::array<bool, kNumBands> seen{};
    for (const auto& [key, value] : conf.items()) {
        auto label = try_parse_label(key);
        if (!label) throw DataError("unknown band '" + key + "' in confidences");
        if (!value.is_number()) throw DataError("confidence for band " + key + " is not a number");
        const double v = value.get<double>();
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            throw DataError("confidence for band " + key + " is not a finite value in [0,1]");
        }
        values[label->index()] = v;
        seen[label->index()] = true;
    }
    for (std::size_t i = 0; i < kNumBands; ++i) {
        if (!seen[i]) throw DataError("confidences missing band " + std::string(band_name(static_cast<Band>(i))));
    }
    auto prediction = Prediction::from_confidences(id->get<std::string>(), values, std::move(source));
    const std::string kind = record.value("kind", std::string("multiclass"));
    if (kind == "multilabel") {
        prediction.chosen = multilabel_to_label(values);
    } else if (kind != "multiclass") {
        throw DataError("unknown prediction kind '" + kind + "'");
    }
    return prediction;
}

std::vector<ExternalPrediction> import_external_predictions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open prediction file " + path.string());
    std::vector<ExternalPrediction> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            // NaN/Infinity are not JSON; nlohmann rejects them at parse time.
            auto p = parse_prediction_record(json::parse(line));
            std::visit([&](auto& x) { if (x.source.empty()) x.source = path.stem().string(); }, p);
            out.push_back(std::move(p));
        } catch (const json::exception& e) {
            throw RecordError(path.string(), line_no, std::string("invalid JSON: ") + e.what());
        } catch (const DataError& e) {
            throw RecordError(path.string(), line_no, e.what());
        }
    }
    return out;
}

json prediction_to_json(const Prediction& p) {
    json conf = json::object();
    for (std::size_t i = 0; i < kNumBands; ++i) conf[std::string(band_name(static_cast<Band>(i)))] = p.confidences[i];
    return {{"doc_id", p.doc_id}, {"confidences", conf}, {"chosen", std::string(p.chosen.name())}, {"source", p.source}};
}

void write_predictions(std::span<const Prediction> predictions, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write prediction file " + path.string());
    for (const auto& p : predictions) out << prediction_to_json(p).dump() << '\n';
}

BaselineClassifier::BaselineClassifier(Tokenizer tokenizer, TfidfModel tfidf, std::vector<std::uint32_t> selected,
                                       ForestModel forest, std::string model_id)
    : tokenizer_(std::move(tokenizer)),
      tfidf_(std::move(tfidf)),
      selected_(std::move(selected)),
      forest_(std::move(forest)),
      model_id_(std::move(model_id)) {}

BandArray BaselineClassifier::confidences(const TermSequence& terms) const {
    return forest_.predict_proba(project(tfidf_.vectorize(terms), selected_));
}

Prediction BaselineClassifier::predict_terms(const std::string& doc_id, const TermSequence& terms) const {
    return Prediction::from_confidences(doc_id, confidences(terms), model_id_);
}

Prediction BaselineClassifier::predict(const Document& doc) const {
    return predict_terms(doc.doc_id, tokenizer_.tokenize(doc.text()));
}

ConfidenceFn BaselineClassifier::as_function() const {
    return [this](const TermSequence& terms) { return confidences(terms); };
}

namespace {
constexpr int kModelFormatVersion = 1;
}

json BaselineClassifier::to_json() const {
    std::set<std::string> stopwords(tokenizer_.stopwords().begin(), tokenizer_.stopwords().end());
    return {{"format", "loe-baseline"},
            {"version", kModelFormatVersion},
            {"model_id", model_id_},
            {"stopwords", stopwords},
            {"tfidf", {{"n_docs", tfidf_.n_docs()}, {"terms", tfidf_.terms()}, {"df", tfidf_.document_frequencies()}}},
            {"selected", selected_},
            {"forest", forest_.to_json()}};
}

BaselineClassifier BaselineClassifier::from_json(const json& j) {
    if (j.value("format", std::string()) != "loe-baseline") throw DataError("not a baseline model file");
    if (j.value("version", 0) != kModelFormatVersion) throw DataError("unsupported baseline model version");
    const auto& t = j.at("tfidf");
    TfidfModel tfidf(t.at("terms").get<std::vector<std::string>>(), t.at("df").get<std::vector<std::uint32_t>>(),
                     t.at("n_docs").get<std::uint32_t>());
    auto selected = j.at("selected").get<std::vector<std::uint32_t>>();
    for (auto f : selected) {
        if (f >= tfidf.vocabulary_size()) throw DataError("selected feature outside vocabulary");
    }
    auto stop = j.at("stopwords").get<std::vector<std::string>>();
    return BaselineClassifier(Tokenizer(StopwordSet(stop.begin(), stop.end())), std::move(tfidf), std::move(selected),
                              ForestModel::from_json(j.at("forest")), j.at("model_id").get<std::string>());
}

void BaselineClassifier::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model file " + path.string());
    out << to_json().dump() << '\n';
}

BaselineClassifier BaselineClassifier::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file " + path.string());
    try {
        return from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw DataError("malformed model file " + path.string() + ": " + e.what());
    }
}

BaselineClassifier train_baseline(const LabeledDataset& train, const BaselineParams& params, const Tokenizer& tokenizer) {
    std::vector<TermSequence> docs;
    std::vector<LoELabel> labels;
    docs.reserve(train.size());
    for (const auto& item : train.items) {
        docs.push_back(tokenizer.tokenize(item.document.text()));
        labels.push_back(item.label);
    }
    TfidfModel tfidf = fit_tfidf(docs, params.tfidf);
    std::vector<SparseVector> vectors;
    vectors.reserve(docs.size());
    for (const auto& d : docs) vectors.push_back(tfidf.vectorize(d));

    const std::size_t k = std::min(params.selected_features, tfidf.vocabulary_size());
    if (k == 0) throw InvalidArgument("baseline: empty vocabulary after min_df filtering");
    auto selected = chi2_select(vectors, labels, tfidf.vocabulary_size(), k);

    std::vector<SparseVector> rows;
    rows.reserve(vectors.size());
    for (const auto& v : vectors) rows.push_back(project(v, selected));
    ForestModel forest = train_forest(rows, labels, selected.size(), params.forest);

    std::string id = "rf-seed" + std::to_string(params.forest.seed) + "-t" + std::to_string(params.forest.trees);
    return BaselineClassifier(Tokenizer(tokenizer.stopwords()), std::move(tfidf), std::move(selected),
                              std::move(forest), std::move(id));
}

}  // namespace loe
