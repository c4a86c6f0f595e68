#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>

#include "loe/error.hpp"
#include "loe/textproc.hpp"

namespace loe {
namespace {

constexpr std::string_view kStopwords[] = {
    "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any", "are", "as", "at",
    "be", "because", "been", "before", "being", "below", "between", "both", "but", "by", "can", "could", "did",
    "do", "does", "doing", "down", "during", "each", "few", "for", "from", "further", "had", "has", "have",
    "having", "he", "her", "here", "hers", "herself", "him", "himself", "his", "how", "however", "i", "if", "in",
    "into", "is", "it", "its", "itself", "just", "may", "me", "might", "more", "most", "must", "my", "myself",
    "no", "nor", "not", "now", "of", "off", "on", "once", "only", "or", "other", "our", "ours", "ourselves",
    "out", "over", "own", "same", "shall", "she", "should", "so", "some", "such", "than", "that", "the", "their",
    "theirs", "them", "themselves", "then", "there", "these", "they", "this", "those", "through", "thus", "to",
    "too", "under", "until", "up", "upon", "us", "very", "via", "was", "we", "were", "what", "when", "where",
    "whereas", "whether", "which", "while", "who", "whom", "whose", "why", "will", "with", "within", "without",
    "would", "yet", "you", "your", "yours", "yourself", "yourselves", "et", "al", "eg", "ie", "vs", "s", "t"};

// Latin-1 supplement (U+00C0..U+00FF) folded to ASCII; empty = separator.
constexpr std::array<std::string_view, 64> kLatin1Fold = {
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",   // C0-CF
    "d", "n", "o", "o", "o", "o", "o", "",  "o", "u", "u", "u", "u", "y", "th", "ss",  // D0-DF
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",   // E0-EF
    "d", "n", "o", "o", "o", "o", "o", "",  "o", "u", "u", "u", "u", "y", "th", "y"};  // F0-FF

bool is_alnum(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }

}  // namespace

const StopwordSet& default_stopwords() {
    static const StopwordSet set = [] {
        StopwordSet s;
        for (auto w : kStopwords) s.emplace(w);
        return s;
    }();
    return set;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open stopword file " + path.string());
    StopwordSet set;
    std::string line;
    while (std::getline(in, line)) {
        auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos || line[begin] == '#') continue;
        auto end = line.find_last_not_of(" \t\r");
        std::string word = line.substr(begin, end - begin + 1);
        for (auto& c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        set.insert(std::move(word));
    }
    return set;
}

std::string ascii_fold(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        auto c = static_cast<unsigned char>(text[i]);
        if (c < 0x80) {
            out.push_back(static_cast<char>(std::tolower(c)));
            ++i;
            continue;
        }
        // Decode one UTF-8 sequence; invalid bytes become a separator.
        std::size_t len = (c >= 0xF0) ? 4 : (c >= 0xE0) ? 3 : (c >= 0xC0) ? 2 : 1;
        char32_t cp = 0;
        if (len == 2 && i + 1 < text.size()) {
            cp = ((c & 0x1Fu) << 6) | (static_cast<unsigned char>(text[i + 1]) & 0x3Fu);
        }
        if (cp >= 0xC0 && cp <= 0xFF) {
            out += kLatin1Fold[cp - 0xC0];
            if (kLatin1Fold[cp - 0xC0].empty()) out.push_back(' ');
        } else {
            out.push_back(' ');
        }
        i += std::min(len, text.size() - i);
    }
    return out;
}

TermSequence TermSequence::from_unigrams(std::vector<std::string> unigrams, bool with_bigrams) {
    TermSequence seq;
    seq.unigram_count = unigrams.size();
    seq.terms = std::move(unigrams);
    if (with_bigrams && seq.unigram_count > 1) {
        seq.terms.reserve(2 * seq.unigram_count - 1);
        for (std::size_t i = 0; i + 1 < seq.unigram_count; ++i) {
            seq.terms.push_back(seq.terms[i] + ' ' + seq.terms[i + 1]);
        }
    }
    return seq;
}

Tokenizer::Tokenizer() : stopwords_(std::shared_ptr<const StopwordSet>(&default_stopwords(), [](const StopwordSet*) {})) {}

Tokenizer::Tokenizer(StopwordSet stopwords) : stopwords_(std::make_shared<const StopwordSet>(std::move(stopwords))) {}

std::vector<std::string> Tokenizer::unigrams(std::string_view text) const {
    const std::string folded = ascii_fold(text);
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < folded.size()) {
        while (i < folded.size() && !is_alnum(folded[i])) ++i;
        std::size_t start = i;
        while (i < folded.size() && is_alnum(folded[i])) ++i;
        if (start == i) continue;
        std::string_view raw(folded.data() + start, i - start);
        if (stopwords_->contains(std::string(raw))) continue;
        std::string stem = stem_fixpoint(raw);
        if (stem.empty() || stopwords_->contains(stem)) continue;
        out.push_back(std::move(stem));
    }
    return out;
}

TermSequence Tokenizer::tokenize(std::string_view text, bool with_bigrams) const {
    return TermSequence::from_unigrams(unigrams(text), with_bigrams);
}

TermSequence tokenize(std::string_view text) {
    static const Tokenizer tokenizer;
    return tokenizer.tokenize(text);
}

}  // namespace loe
