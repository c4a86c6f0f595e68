#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace loe {

/// Porter stemmer (the reference variant with the logi->log and bli->ble
/// rules). Input must be lowercase ASCII.
std::string porter_stem(std::string_view word);

/// porter_stem applied until the output stops changing.
std::string stem_fixpoint(std::string_view word);

/// Stemmed terms of a text: all unigrams in order, followed by all adjacent
/// bigrams of the unigram stream (each joined by a single space).
struct TermSequence {
    std::vector<std::string> terms;
    std::size_t unigram_count = 0;

    std::span<const std::string> unigrams() const { return {terms.data(), unigram_count}; }
    std::span<const std::string> bigrams() const {
        return {terms.data() + unigram_count, terms.size() - unigram_count};
    }
    bool empty() const { return terms.empty(); }
    std::size_t size() const { return terms.size(); }

    /// Builds a sequence from a unigram stream, appending its bigrams.
    static TermSequence from_unigrams(std::vector<std::string> unigrams, bool with_bigrams = true);

    friend bool operator==(const TermSequence&, const TermSequence&) = default;
};

using StopwordSet = std::unordered_set<std::string>;

/// Built-in English stopword list.
const StopwordSet& default_stopwords();

/// One word per line; blank lines and lines starting with '#' are ignored.
StopwordSet load_stopwords(const std::filesystem::path& path);

/// Lowercases, folds Latin-1 accented letters to ASCII, splits on
/// non-alphanumerics, drops stopwords, and stems. A stem that is itself a
/// stopword is dropped too.
class Tokenizer {
public:
    Tokenizer();
    explicit Tokenizer(StopwordSet stopwords);

    std::vector<std::string> unigrams(std::string_view text) const;
    TermSequence tokenize(std::string_view text, bool with_bigrams = true) const;

    const StopwordSet& stopwords() const { return *stopwords_; }

private:
    std::shared_ptr<const StopwordSet> stopwords_;
};

/// tokenize with the default stopword list.
TermSequence tokenize(std::string_view text);

/// Lowercase ASCII folding of UTF-8 input. Characters without an ASCII
/// equivalent become spaces.
std::string ascii_fold(std::string_view text);

}  // namespace loe
