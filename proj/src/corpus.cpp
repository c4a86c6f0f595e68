#include "loe/corpus.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "loe/error.hpp"
#include "loe/log.hpp"
#include "loe/random.hpp"

namespace loe {

using nlohmann::json;

namespace {

std::string required_string(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw DataError(std::string("missing field '") + key + "'");
    if (!it->is_string()) throw DataError(std::string("field '") + key + "' is not a string");
    return it->get<std::string>();
}

std::optional<LoELabel> optional_label(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (it->is_string()) return parse_label(it->get<std::string>());
    if (it->is_number_integer()) {
        // Bare "4" is the only band that is also a plain number.
        if (it->get<int>() == 4) return LoELabel(Band::L4);
    }
    throw DataError(std::string("field '") + key + "' is not a valid label");
}

bool is_blank(const std::string& line) {
    return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

Document parse_document_line(const std::string& line) {
    json obj;
    try {
        obj = json::parse(line);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw DataError("record is not a JSON object");
    Document doc;
    doc.doc_id = required_string(obj, "doc_id");
    if (doc.doc_id.empty()) throw DataError("empty doc_id");
    doc.title = required_string(obj, "title");
    doc.abstract = required_string(obj, "abstract");
    doc.gold_loe = optional_label(obj, "loe");
    doc.assigned_loe = optional_label(obj, "assigned_loe");
    return doc;
}

Collection load_corpus(const std::filesystem::path& path, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open corpus file " + path.string());

    Collection docs;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    std::size_t skipped = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        Document doc;
        try {
            doc = parse_document_line(line);
        } catch (const DataError& e) {
            if (options.on_malformed == OnMalformed::Abort) throw RecordError(path.string(), line_no, e.what());
            log::warn(path.string() + ":" + std::to_string(line_no) + ": skipped: " + e.what());
            ++skipped;
            continue;
        }
        if (!seen.insert(doc.doc_id).second) {
            throw RecordError(path.string(), line_no, "duplicate doc_id '" + doc.doc_id + "'");
        }
        docs.push_back(std::move(doc));
    }
    if (skipped > 0) {
        log::warn("loaded " + std::to_string(docs.size()) + " documents from " + path.string() + ", skipped " +
                  std::to_string(skipped));
    }
    return docs;
}

void write_corpus(const Collection& docs, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write corpus file " + path.string());
    for (const auto& doc : docs) {
        json obj = {{"doc_id", doc.doc_id}, {"title", doc.title}, {"abstract", doc.abstract}};
        if (doc.gold_loe) obj["loe"] = std::string(doc.gold_loe->name());
        if (doc.assigned_loe) obj["assigned_loe"] = std::string(doc.assigned_loe->name());
        out << obj.dump() << '\n';
    }
}

LabeledDataset to_labeled(const Collection& docs, std::string name) {
    LabeledDataset ds;
    ds.name = std::move(name);
    ds.items.reserve(docs.size());
    for (const auto& doc : docs) {
        if (!doc.gold_loe) throw DataError("document '" + doc.doc_id + "' has no gold label");
        ds.items.push_back({doc, *doc.gold_loe});
    }
    return ds;
}

LabeledDataset load_labeled(const std::filesystem::path& path, const LoadOptions& options) {
    return to_labeled(load_corpus(path, options), path.stem().string());
}

DatasetSplit stratified_split(const LabeledDataset& dataset, const SplitRatios& ratios, std::uint64_t seed) {
    const std::array<double, 3> r = {ratios.train, ratios.valid, ratios.test};
    for (double x : r) {
        if (!(x > 0.0)) throw InvalidArgument("split ratios must be positive");
    }
    if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) throw InvalidArgument("split ratios must sum to 1");

    constexpr double kEps = 1e-9;
    const std::size_t n = dataset.size();

    // Per-split totals: floors, with the leftover dealt train -> valid -> test.
    std::array<std::size_t, 3> remaining{};
    std::size_t assigned = 0;
    for (std::size_t s = 0; s < 3; ++s) {
        remaining[s] = static_cast<std::size_t>(std::floor(static_cast<double>(n) * r[s] + kEps));
        assigned += remaining[s];
    }
    for (std::size_t s = 0; assigned < n; s = (s + 1) % 3, ++assigned) ++remaining[s];

    std::array<std::vector<std::size_t>, kNumBands> by_class;
    for (std::size_t i = 0; i < n; ++i) by_class[dataset.items[i].label.index()].push_back(i);

    // Floors per (class, split); each class's leftover items then go to
    // distinct splits so that every split reaches its total. Among feasible
    // choices the one closest (sum of squares) to count * ratio wins.
    std::array<std::array<std::size_t, 3>, kNumBands> take{};
    std::array<std::size_t, kNumBands> leftover{};
    std::array<std::size_t, 3> deficit = remaining;
    for (std::size_t c = 0; c < kNumBands; ++c) {
        const std::size_t count = by_class[c].size();
        if (count == 0) continue;
        if (count < 3) {
            log::warn("class " + std::string(band_name(static_cast<Band>(c))) + " has only " + std::to_string(count) +
                      " items; assigning to train first");
        }
        std::size_t used = 0;
        for (std::size_t s = 0; s < 3; ++s) {
            take[c][s] = static_cast<std::size_t>(std::floor(static_cast<double>(count) * r[s] + kEps));
            used += take[c][s];
            deficit[s] -= take[c][s];
        }
        leftover[c] = count - used;
    }

    std::array<unsigned, kNumBands> choice{};
    std::array<unsigned, kNumBands> best_choice{};
    double best_cost = std::numeric_limits<double>::infinity();
    std::function<void(std::size_t, double)> search = [&](std::size_t c, double cost) {
        if (cost >= best_cost) return;
        if (c == kNumBands) {
            if (deficit == std::array<std::size_t, 3>{}) {
                best_cost = cost;
                best_choice = choice;
            }
            return;
        }
        const double count = static_cast<double>(by_class[c].size());
        for (unsigned mask = 0; mask < 8; ++mask) {
            if (static_cast<std::size_t>(std::popcount(mask)) != leftover[c]) continue;
            bool fits = true;
            double add = 0.0;
            for (std::size_t s = 0; s < 3; ++s) {
                const bool extra = mask >> s & 1u;
                if (extra && deficit[s] == 0) fits = false;
                const double dev = static_cast<double>(take[c][s] + extra) - count * r[s];
                add += dev * dev;
            }
            if (!fits) continue;
            for (std::size_t s = 0; s < 3; ++s) deficit[s] -= mask >> s & 1u;
            choice[c] = mask;
            search(c + 1, cost + add);
            for (std::size_t s = 0; s < 3; ++s) deficit[s] += mask >> s & 1u;
        }
    };
    search(0, 0.0);
    if (!std::isfinite(best_cost)) throw std::logic_error("stratified_split: no feasible leftover assignment");

    std::vector<int> destination(n, -1);
    for (std::size_t c = 0; c < kNumBands; ++c) {
        auto& members = by_class[c];
        if (members.empty()) continue;
        Rng rng(mix_seed(seed, c));
        shuffle(members, rng);
        std::size_t pos = 0;
        for (std::size_t s = 0; s < 3; ++s) {
            const std::size_t quota = take[c][s] + (best_choice[c] >> s & 1u);
            for (std::size_t q = 0; q < quota; ++q) destination[members[pos++]] = static_cast<int>(s);
        }
    }

    DatasetSplit split;
    split.train.name = dataset.name + ".train";
    split.valid.name = dataset.name + ".valid";
    split.test.name = dataset.name + ".test";
    std::array<LabeledDataset*, 3> outs = {&split.train, &split.valid, &split.test};
    for (std::size_t i = 0; i < n; ++i) outs[static_cast<std::size_t>(destination[i])]->items.push_back(dataset.items[i]);
    return split;
}

namespace {

std::map<Band, double> fractions(const std::array<std::size_t, kNumBands>& counts, std::size_t total) {
    std::map<Band, double> out;
    for (std::size_t c = 0; c < kNumBands; ++c) {
        out[static_cast<Band>(c)] = static_cast<double>(counts[c]) / static_cast<double>(total);
    }
    return out;
}

}  // namespace

std::map<Band, double> label_distribution(const LabeledDataset& dataset) {
    if (dataset.empty()) throw InvalidArgument("label distribution of an empty dataset");
    std::array<std::size_t, kNumBands> counts{};
    for (const auto& item : dataset.items) ++counts[item.label.index()];
    return fractions(counts, dataset.size());
}

std::map<Band, double> assigned_distribution(const Collection& docs) {
    std::array<std::size_t, kNumBands> counts{};
    std::size_t total = 0;
    for (const auto& doc : docs) {
        if (!doc.assigned_loe) continue;
        ++counts[doc.assigned_loe->index()];
        ++total;
    }
    if (total == 0) throw InvalidArgument("no document carries an assigned label");
    return fractions(counts, total);
}

}  // namespace loe
