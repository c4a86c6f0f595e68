#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "loe/corpus.hpp"
#include "loe/label.hpp"
#include "loe/textproc.hpp"

namespace loe {

struct BM25Params {
    double k1 = 1.2;
    double b = 0.75;

    /// Throws InvalidArgument unless k1 >= 0 and 0 <= b <= 1.
    void validate() const;
};

/// Evidence filter applied before ranking.
enum class FilterBand { All, LoE3plus, LoE2plus, LoE1 };

inline constexpr std::array<FilterBand, 4> kAllFilterBands = {FilterBand::All, FilterBand::LoE3plus,
                                                               FilterBand::LoE2plus, FilterBand::LoE1};

/// Accepts all|loe3|loe2|loe1 (also "loe3+", "loe2+", case-insensitive).
std::optional<FilterBand> try_parse_filter_band(std::string_view text);
FilterBand parse_filter_band(std::string_view text);
/// Display name: All, LoE3+, LoE2+, LoE1.
std::string_view filter_band_name(FilterBand band);
/// Request token: all, loe3, loe2, loe1.
std::string_view filter_band_token(FilterBand band);

/// True iff the label's ordinal is admitted: All {0..6}, LoE3+ {0..5},
/// LoE2+ {0..3}, LoE1 {0,1}.
bool band_filter(LoELabel label, FilterBand band);

struct Posting {
    std::uint32_t doc = 0;
    std::uint32_t tf = 0;
    friend bool operator==(const Posting&, const Posting&) = default;
};

struct StoredDoc {
    std::string doc_id;
    std::string title;
    std::string abstract;
    LoELabel loe;
    std::uint32_t length = 0;
    friend bool operator==(const StoredDoc&, const StoredDoc&) = default;
};

struct SearchHit {
    std::uint32_t doc = 0;  // internal id
    std::string doc_id;
    double score = 0.0;
    LoELabel loe;
};

/// Immutable inverted index over unigram terms with per-document LoE labels.
class Index {
public:
    Index() = default;
    Index(std::vector<StoredDoc> docs, std::vector<std::string> terms, std::vector<std::vector<Posting>> postings,
          BM25Params params);

    std::size_t n_docs() const { return docs_.size(); }
    std::size_t n_terms() const { return terms_.size(); }
    double avg_doc_length() const { return avg_doc_length_; }
    const BM25Params& params() const { return params_; }
    const StoredDoc& doc(std::uint32_t id) const { return docs_.at(id); }
    const std::vector<StoredDoc>& docs() const { return docs_; }
    const std::vector<std::string>& terms() const { return terms_; }
    const std::vector<std::vector<Posting>>& all_postings() const { return postings_; }

    /// Postings of a term (empty span when unknown).
    std::span<const Posting> postings(std::string_view term) const;
    std::uint32_t document_frequency(std::string_view term) const { return static_cast<std::uint32_t>(postings(term).size()); }

    /// ln((N - df + 0.5) / (df + 0.5) + 1)
    double idf(std::uint32_t df) const;
    double term_score(std::uint32_t tf, std::uint32_t df, std::uint32_t doc_length) const;

    /// Fraction of documents admitted by a filter band.
    double admitted_fraction(FilterBand band) const;

    const Tokenizer& tokenizer() const { return tokenizer_; }
    void set_tokenizer(Tokenizer tokenizer) { tokenizer_ = std::move(tokenizer); }

    void save(const std::filesystem::path& path) const;
    static Index load(const std::filesystem::path& path);
    /// Serialized bytes (the exact file contents written by save).
    std::string serialize() const;
    static Index deserialize(std::string_view bytes);

private:
    std::vector<StoredDoc> docs_;
    std::vector<std::string> terms_;  // sorted
    std::vector<std::vector<Posting>> postings_;
    BM25Params params_;
    double avg_doc_length_ = 0.0;
    Tokenizer tokenizer_;
};

/// Indexes title + " " + abstract (unigrams only). Every document must carry
/// an assigned label (falls back to the gold label when
/// `use_gold_if_unassigned` is set). Throws DataError naming the first
/// unlabeled document, and InvalidArgument for an empty collection.
Index build_index(const Collection& docs, const BM25Params& params = {}, const Tokenizer& tokenizer = Tokenizer(),
                  bool use_gold_if_unassigned = false);

/// BM25 of one document. Each distinct query term contributes once;
/// contributions are summed in lexicographic term order.
double bm25_score(const Index& index, const TermSequence& query, std::uint32_t doc);

/// Distinct query unigrams in lexicographic order.
std::vector<std::string> query_terms(const TermSequence& query);

/// Top-k admitted documents matching at least one query term, by score
/// descending then doc_id ascending. The filter never alters scores.
std::vector<SearchHit> search(const Index& index, const TermSequence& query, FilterBand band, std::size_t k);
std::vector<SearchHit> search(const Index& index, std::string_view query, FilterBand band, std::size_t k);

}  // namespace loe
