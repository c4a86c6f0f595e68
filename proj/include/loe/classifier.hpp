#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "loe/corpus.hpp"
#include "loe/features.hpp"
#include "loe/forest.hpp"
#include "loe/label.hpp"
#include "loe/textproc.hpp"

namespace loe {

/// Per-band confidences plus the chosen label (argmax, ties toward the
/// lower ordinal).
struct Prediction {
    std::string doc_id;
    BandArray confidences{};
    LoELabel chosen;
    std::string source;

    static Prediction from_confidences(std::string doc_id, const BandArray& confidences, std::string source);
    double chosen_confidence() const { return confidences[chosen.index()]; }
};

/// Unbounded ordinal estimate from a regression model.
struct RegressionPrediction {
    std::string doc_id;
    double raw = 0.0;
    std::string source;
};

using ExternalPrediction = std::variant<Prediction, RegressionPrediction>;

/// Rounds half away from zero, clamps into [0, 6] and maps to a band.
/// Throws InvalidArgument on non-finite input.
LoELabel regression_to_label(double raw);
inline LoELabel regression_to_label(const RegressionPrediction& p) { return regression_to_label(p.raw); }

/// Among bands scoring >= threshold the highest score wins; with none above
/// the threshold the global argmax wins. Ties go to the lower ordinal.
LoELabel multilabel_to_label(const BandArray& scores, double threshold = 0.5);

struct Vote {
    LoELabel label;
    double confidence = 1.0;
};

/// Most frequent band wins; ties among the top bands go to the band holding
/// the highest single vote confidence, then to the lower ordinal.
/// Throws InvalidArgument on an empty vote list.
LoELabel majority_vote(std::span<const Vote> votes);

/// Label and vote confidence contributed by one external prediction. A
/// regression vote's confidence is 1 - |raw - chosen ordinal|, floored at 0.
Vote to_vote(const ExternalPrediction& p);
const std::string& doc_id_of(const ExternalPrediction& p);

/// Returns nullopt (abstain) when the chosen confidence is below threshold.
std::optional<LoELabel> label_or_abstain(const Prediction& p, std::optional<double> abstain_below);

/// Prediction JSONL: {"doc_id", "confidences": {band: value, ...}} or
/// {"doc_id", "raw": value}; optional "source". A confidence record with
/// "kind": "multilabel" picks its band through multilabel_to_label, the
/// default "multiclass" through argmax. Confidence records must
/// list all seven bands with finite values in [0, 1]. Problems raise
/// RecordError with the line number.
std::vector<ExternalPrediction> import_external_predictions(const std::filesystem::path& path);
ExternalPrediction parse_prediction_record(const nlohmann::json& record);

nlohmann::json prediction_to_json(const Prediction& p);
void write_predictions(std::span<const Prediction> predictions, const std::filesystem::path& path);

/// Anything that maps a term sequence to per-band confidences.
using ConfidenceFn = std::function<BandArray(const TermSequence&)>;

struct BaselineParams {
    TfidfOptions tfidf;
    /// Number of chi-squared features kept.
    std::size_t selected_features = 2000;
    ForestParams forest;
};

/// Text -> TF-IDF -> chi-squared feature subset -> random forest.
class BaselineClassifier {
public:
    BaselineClassifier() = default;
    BaselineClassifier(Tokenizer tokenizer, TfidfModel tfidf, std::vector<std::uint32_t> selected, ForestModel forest,
                       std::string model_id);

    BandArray confidences(const TermSequence& terms) const;
    Prediction predict(const Document& doc) const;
    Prediction predict_terms(const std::string& doc_id, const TermSequence& terms) const;

    const Tokenizer& tokenizer() const { return tokenizer_; }
    const TfidfModel& tfidf() const { return tfidf_; }
    const std::vector<std::uint32_t>& selected_features() const { return selected_; }
    const ForestModel& forest() const { return forest_; }
    const std::string& model_id() const { return model_id_; }

    /// Wraps this classifier (by reference) as a ConfidenceFn.
    ConfidenceFn as_function() const;

    void save(const std::filesystem::path& path) const;
    static BaselineClassifier load(const std::filesystem::path& path);
    nlohmann::json to_json() const;
    static BaselineClassifier from_json(const nlohmann::json& j);

private:
    Tokenizer tokenizer_;
    TfidfModel tfidf_;
    std::vector<std::uint32_t> selected_;
    ForestModel forest_;
    std::string model_id_;
};

/// Fits the full baseline pipeline on a labeled dataset.
BaselineClassifier train_baseline(const LabeledDataset& train, const BaselineParams& params,
                                  const Tokenizer& tokenizer = Tokenizer());

}  // namespace loe
