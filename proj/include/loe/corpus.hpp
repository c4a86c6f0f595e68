#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loe/label.hpp"

namespace loe {

struct Document {
    std::string doc_id;
    std::string title;
    std::string abstract;
    std::optional<LoELabel> gold_loe;
    std::optional<LoELabel> assigned_loe;

    /// Classification and indexing text: title + " " + abstract.
    std::string text() const { return title + " " + abstract; }
};

using Collection = std::vector<Document>;

struct LabeledItem {
    Document document;
    LoELabel label;
};

struct LabeledDataset {
    std::string name;
    std::vector<LabeledItem> items;

    std::size_t size() const { return items.size(); }
    bool empty() const { return items.empty(); }
};

enum class OnMalformed { Abort, SkipAndWarn };

struct LoadOptions {
    OnMalformed on_malformed = OnMalformed::Abort;
};

/// Reads a JSON-lines corpus. Each line holds doc_id, title, abstract and an
/// optional "loe" gold label; an optional "assigned_loe" carries a
/// classifier-assigned label (tagged corpora). Blank lines are ignored.
///
/// Malformed lines raise RecordError (or are skipped with a warning under
/// OnMalformed::SkipAndWarn). Duplicate doc_ids always abort.
Collection load_corpus(const std::filesystem::path& path, const LoadOptions& options = {});

/// Parses a single corpus line. Throws DataError describing the problem.
Document parse_document_line(const std::string& line);

/// Writes documents in the same JSONL layout load_corpus reads.
void write_corpus(const Collection& docs, const std::filesystem::path& path);

/// Requires every document to carry a gold label.
LabeledDataset to_labeled(const Collection& docs, std::string name);

LabeledDataset load_labeled(const std::filesystem::path& path, const LoadOptions& options = {});

struct SplitRatios {
    double train = 0.6;
    double valid = 0.2;
    double test = 0.2;
};

struct DatasetSplit {
    LabeledDataset train;
    LabeledDataset valid;
    LabeledDataset test;
};

/// Per-class stratified split. Split totals are floor(N * ratio) with the
/// leftover dealt train -> valid -> test. Each class contributes
/// floor(count * ratio) items to every split; its remaining items go to
/// distinct splits, chosen so that the split totals are met exactly while
/// staying closest to count * ratio. Classes are shuffled with generators
/// seeded from `seed`; item order inside each split follows the input
/// order. Classes with fewer than three items raise a warning.
DatasetSplit stratified_split(const LabeledDataset& dataset, const SplitRatios& ratios, std::uint64_t seed);

/// Fraction of items per band (all seven keys present). Throws on empty input.
std::map<Band, double> label_distribution(const LabeledDataset& dataset);

/// Distribution of the assigned label over a tagged collection.
std::map<Band, double> assigned_distribution(const Collection& docs);

}  // namespace loe
