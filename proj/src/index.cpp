#include "loe/index.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "loe/error.hpp"

namespace loe {

using nlohmann::json;

void BM25Params::validate() const {
    if (!(k1 >= 0.0) || !std::isfinite(k1)) throw InvalidArgument("BM25 k1 must be >= 0");
    if (!(b >= 0.0 && b <= 1.0)) throw InvalidArgument("BM25 b must lie in [0, 1]");
}

std::optional<FilterBand> try_parse_filter_band(std::string_view text) {
    std::string t;
    for (char c : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (t == "all") return FilterBand::All;
    if (t == "loe3" || t == "loe3+" || t == "loe3plus") return FilterBand::LoE3plus;
    if (t == "loe2" || t == "loe2+" || t == "loe2plus") return FilterBand::LoE2plus;
    if (t == "loe1") return FilterBand::LoE1;
    return std::nullopt;
}

FilterBand parse_filter_band(std::string_view text) {
    if (auto band = try_parse_filter_band(text)) return *band;
    throw DataError("unknown filter band '" + std::string(text) + "' (expected all, loe3, loe2, loe1)");
}

std::string_view filter_band_name(FilterBand band) {
    switch (band) {
        case FilterBand::All: return "All";
        case FilterBand::LoE3plus: return "LoE3+";
        case FilterBand::LoE2plus: return "LoE2+";
        case FilterBand::LoE1: return "LoE1";
    }
    return "?";
}

std::string_view filter_band_token(FilterBand band) {
    switch (band) {
        case FilterBand::All: return "all";
        case FilterBand::LoE3plus: return "loe3";
        case FilterBand::LoE2plus: return "loe2";
        case FilterBand::LoE1: return "loe1";
    }
    return "?";
}

bool band_filter(LoELabel label, FilterBand band) {
    switch (band) {
        case FilterBand::All: return true;
        case FilterBand::LoE3plus: return label.ordinal() <= 5;
        case FilterBand::LoE2plus: return label.ordinal() <= 3;
        case FilterBand::LoE1: return label.ordinal() <= 1;
    }
    return false;
}

Index::Index(std::vector<StoredDoc> docs, std::vector<std::string> terms, std::vector<std::vector<Posting>> postings,
             BM25Params params)
    : docs_(std::move(docs)), terms_(std::move(terms)), postings_(std::move(postings)), params_(params) {
    params_.validate();
    if (docs_.empty()) throw InvalidArgument("index must contain at least one document");
    if (terms_.size() != postings_.size()) throw DataError("index: term and posting list counts differ");
    if (!std::is_sorted(terms_.begin(), terms_.end()) ||
        std::adjacent_find(terms_.begin(), terms_.end()) != terms_.end()) {
        throw DataError("index: terms not strictly sorted");
    }
    for (const auto& list : postings_) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (list[i].doc >= docs_.size()) throw DataError("index: posting refers to unknown document");
            if (i > 0 && list[i].doc <= list[i - 1].doc) throw DataError("index: postings not strictly increasing");
        }
    }
    double total = 0.0;
    for (const auto& d : docs_) total += d.length;
    avg_doc_length_ = total / static_cast<double>(docs_.size());
}

std::span<const Posting> Index::postings(std::string_view term) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), term);
    if (it == terms_.end() || *it != term) return {};
    return postings_[static_cast<std::size_t>(it - terms_.begin())];
}

double Index::idf(std::uint32_t df) const {
    const double n = static_cast<double>(docs_.size());
    return std::log((n - df + 0.5) / (df + 0.5) + 1.0);
}

double Index::term_score(std::uint32_t tf, std::uint32_t df, std::uint32_t doc_length) const {
    if (tf == 0) return 0.0;
    const double f = tf;
    // An all-empty collection has avgdl 0; length normalisation is then moot.
    const double rel_len = avg_doc_length_ > 0.0 ? doc_length / avg_doc_length_ : 1.0;
    const double norm = params_.k1 * (1.0 - params_.b + params_.b * rel_len);
    return idf(df) * f * (params_.k1 + 1.0) / (f + norm);
}

double Index::admitted_fraction(FilterBand band) const {
    std::size_t admitted = 0;
    for (const auto& d : docs_) admitted += band_filter(d.loe, band) ? 1 : 0;
    return static_cast<double>(admitted) / static_cast<double>(docs_.size());
}

Index build_index(const Collection& docs, const BM25Params& params, const Tokenizer& tokenizer,
                  bool use_gold_if_unassigned) {
    if (docs.empty()) throw InvalidArgument("cannot build an index over an empty collection");
    std::vector<StoredDoc> stored;
    stored.reserve(docs.size());
    std::map<std::string, std::vector<Posting>> inverted;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const auto& doc = docs[i];
        std::optional<LoELabel> label = doc.assigned_loe;
        if (!label && use_gold_if_unassigned) label = doc.gold_loe;
        if (!label) throw DataError("document '" + doc.doc_id + "' has no assigned LoE label");

        const auto terms = tokenizer.unigrams(doc.text());
        std::map<std::string_view, std::uint32_t> tf;
        for (const auto& t : terms) ++tf[t];
        const auto id = static_cast<std::uint32_t>(i);
        for (const auto& [term, count] : tf) inverted[std::string(term)].push_back({id, count});
        stored.push_back({doc.doc_id, doc.title, doc.abstract, *label, static_cast<std::uint32_t>(terms.size())});
    }
    std::vector<std::string> terms;
    std::vector<std::vector<Posting>> postings;
    terms.reserve(inverted.size());
    postings.reserve(inverted.size());
    for (auto& [term, list] : inverted) {
        terms.push_back(term);
        postings.push_back(std::move(list));
    }
    Index index(std::move(stored), std::move(terms), std::move(postings), params);
    index.set_tokenizer(Tokenizer(tokenizer.stopwords()));
    return index;
}

std::vector<std::string> query_terms(const TermSequence& query) {
    std::set<std::string> distinct(query.unigrams().begin(), query.unigrams().end());
    return {distinct.begin(), distinct.end()};
}

double bm25_score(const Index& index, const TermSequence& query, std::uint32_t doc) {
    if (doc >= index.n_docs()) throw InvalidArgument("bm25_score: unknown document id");
    double score = 0.0;
    for (const auto& term : query_terms(query)) {
        const auto list = index.postings(term);
        auto it = std::lower_bound(list.begin(), list.end(), doc, [](const Posting& p, std::uint32_t d) { return p.doc < d; });
        if (it == list.end() || it->doc != doc) continue;
        score += index.term_score(it->tf, static_cast<std::uint32_t>(list.size()), index.doc(doc).length);
    }
    return score;
}

std::vector<SearchHit> search(const Index& index, const TermSequence& query, FilterBand band, std::size_t k) {
    if (k == 0) throw InvalidArgument("search: k must be >= 1");
    std::vector<double> acc(index.n_docs(), 0.0);
    std::vector<char> matched(index.n_docs(), 0);
    for (const auto& term : query_terms(query)) {
        const auto list = index.postings(term);
        const auto df = static_cast<std::uint32_t>(list.size());
        for (const auto& p : list) {
            if (!band_filter(index.doc(p.doc).loe, band)) continue;
            acc[p.doc] += index.term_score(p.tf, df, index.doc(p.doc).length);
            matched[p.doc] = 1;
        }
    }
    std::vector<SearchHit> hits;
    for (std::uint32_t d = 0; d < index.n_docs(); ++d) {
        if (matched[d]) hits.push_back({d, index.doc(d).doc_id, acc[d], index.doc(d).loe});
    }
    auto better = [](const SearchHit& a, const SearchHit& b) {
        return a.score != b.score ? a.score > b.score : a.doc_id < b.doc_id;
    };
    if (hits.size() > k) {
        std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(k), hits.end(), better);
        hits.resize(k);
    } else {
        std::sort(hits.begin(), hits.end(), better);
    }
    return hits;
}

std::vector<SearchHit> search(const Index& index, std::string_view query, FilterBand band, std::size_t k) {
    return search(index, index.tokenizer().tokenize(query, false), band, k);
}

// ---------------------------------------------------------------------------
// Serialization: 8-byte magic, u64 header length, JSON header, binary body.
// All integers little-endian.

namespace {

constexpr char kMagic[8] = {'L', 'O', 'E', 'I', 'D', 'X', '\0', '\1'};
constexpr int kIndexFormatVersion = 1;

class Writer {
public:
    void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void str(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        out_.append(s);
    }
    void raw(std::string_view s) { out_.append(s); }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(std::string_view in) : in_(in) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
    std::uint32_t u32() {
        auto b = take(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        auto b = take(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
        return v;
    }
    std::string str() { return std::string(take(u32())); }
    std::string_view take(std::size_t n) {
        if (n > in_.size() - pos_) throw DataError("index file truncated");
        auto s = in_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    bool done() const { return pos_ == in_.size(); }
    /// Rejects an element count that the remaining bytes cannot hold.
    std::size_t count(std::uint64_t n, std::size_t min_bytes_each) const {
        if (n > (in_.size() - pos_) / min_bytes_each) throw DataError("index file truncated");
        return static_cast<std::size_t>(n);
    }

private:
    std::string_view in_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string Index::serialize() const {
    std::size_t total_postings = 0;
    for (const auto& l : postings_) total_postings += l.size();
    std::set<std::string> stop(tokenizer_.stopwords().begin(), tokenizer_.stopwords().end());
    const json header = {{"format", "loe-index"},
                         {"version", kIndexFormatVersion},
                         {"k1", params_.k1},
                         {"b", params_.b},
                         {"n_docs", docs_.size()},
                         {"n_terms", terms_.size()},
                         {"n_postings", total_postings},
                         {"avg_doc_length", avg_doc_length_},
                         {"stopwords", stop}};
    const std::string header_text = header.dump();

    Writer w;
    w.raw(std::string_view(kMagic, sizeof kMagic));
    w.u64(header_text.size());
    w.raw(header_text);
    for (const auto& d : docs_) {
        w.str(d.doc_id);
        w.str(d.title);
        w.str(d.abstract);
        w.u8(static_cast<std::uint8_t>(d.loe.ordinal()));
        w.u32(d.length);
    }
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        w.str(terms_[t]);
        w.u32(static_cast<std::uint32_t>(postings_[t].size()));
        for (const auto& p : postings_[t]) {
            w.u32(p.doc);
            w.u32(p.tf);
        }
    }
    return w.take();
}

namespace {

Index deserialize_checked(std::string_view bytes);

}  // namespace

Index Index::deserialize(std::string_view bytes) {
    try {
        return deserialize_checked(bytes);
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed index header: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw DataError(std::string("inconsistent index file: ") + e.what());
    }
}

namespace {

Index deserialize_checked(std::string_view bytes) {
    Reader r(bytes);
    if (r.take(sizeof kMagic) != std::string_view(kMagic, sizeof kMagic)) throw DataError("not an index file");
    const auto header_len = r.u64();
    json header;
    try {
        header = json::parse(r.take(static_cast<std::size_t>(header_len)));
    } catch (const json::exception& e) {
        throw DataError(std::string("index header is not valid JSON: ") + e.what());
    }
    if (header.value("version", 0) != kIndexFormatVersion) throw DataError("unsupported index format version");
    const BM25Params params{header.at("k1").get<double>(), header.at("b").get<double>()};
    const auto n_docs = header.at("n_docs").get<std::size_t>();
    const auto n_terms = header.at("n_terms").get<std::size_t>();

    std::vector<StoredDoc> docs(r.count(n_docs, 17));
    for (auto& d : docs) {
        d.doc_id = r.str();
        d.title = r.str();
        d.abstract = r.str();
        d.loe = LoELabel::from_ordinal(r.u8());
        d.length = r.u32();
    }
    std::vector<std::string> terms(r.count(n_terms, 8));
    std::vector<std::vector<Posting>> postings(n_terms);
    for (std::size_t t = 0; t < n_terms; ++t) {
        terms[t] = r.str();
        postings[t].resize(r.count(r.u32(), 8));
        for (auto& p : postings[t]) {
            p.doc = r.u32();
            p.tf = r.u32();
        }
    }
    if (!r.done()) throw DataError("index file has trailing bytes");
    Index index(std::move(docs), std::move(terms), std::move(postings), params);
    auto stop = header.at("stopwords").get<std::vector<std::string>>();
    index.set_tokenizer(Tokenizer(StopwordSet(stop.begin(), stop.end())));
    return index;
}

}  // namespace

void Index::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write index file " + path.string());
    const auto bytes = serialize();
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Index Index::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open index file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize(buf.str());
}

}  // namespace loe
