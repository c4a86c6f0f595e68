#include "loe/cli.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

#include <CLI11.hpp>
#include <json.hpp>

#include "loe/classifier.hpp"
#include "loe/corpus.hpp"
#include "loe/error.hpp"
#include "loe/experiment.hpp"
#include "loe/explain.hpp"
#include "loe/index.hpp"
#include "loe/log.hpp"
#include "loe/metrics.hpp"
#include "loe/random.hpp"
#include "loe/service.hpp"
#include "loe/synthetic.hpp"

namespace loe {

using nlohmann::json;

namespace {

enum class Format { Text, Json, Csv };

const std::map<std::string, Format> kFormats = {{"text", Format::Text}, {"json", Format::Json}, {"csv", Format::Csv}};

std::string fixed(double value, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << value;
    return s.str();
}

std::string percent(double fraction) { return fixed(100.0 * fraction, 1) + "%"; }

std::string pad(std::string text, std::size_t width) {
    if (text.size() < width) text.append(width - text.size(), ' ');
    return text;
}

/// Writes `text` to `path`, or to `out` when the path is empty.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw DataError("cannot write " + path);
    file << text;
}

std::vector<FilterBand> parse_bands(const std::string& list) {
    std::vector<FilterBand> bands;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto band = try_parse_filter_band(item);
        if (!band) throw InvalidArgument("unknown band '" + item + "' (expected all, loe3, loe2, loe1)");
        if (std::find(bands.begin(), bands.end(), *band) == bands.end()) bands.push_back(*band);
    }
    if (bands.empty()) throw InvalidArgument("--bands lists no band");
    return bands;
}

Tokenizer make_tokenizer(const std::string& stopwords) {
    return stopwords.empty() ? Tokenizer() : Tokenizer(load_stopwords(stopwords));
}

// ----- shared tables --------------------------------------------------------

std::string distribution_table(const std::array<std::size_t, kNumBands>& counts, std::size_t abstained) {
    std::size_t total = abstained;
    for (auto c : counts) total += c;
    std::ostringstream s;
    s << "Band  Count   Share  Cumulative\n";
    std::size_t cumulative = 0;
    for (std::size_t b = 0; b < kNumBands; ++b) {
        cumulative += counts[b];
        const double share = total ? static_cast<double>(counts[b]) / static_cast<double>(total) : 0.0;
        const double cum = total ? static_cast<double>(cumulative) / static_cast<double>(total) : 0.0;
        s << pad(std::string(band_name(static_cast<Band>(b))), 4) << std::setw(7) << counts[b] << std::setw(8)
          << percent(share) << std::setw(12) << percent(cum) << '\n';
    }
    if (abstained > 0) {
        s << pad("none", 4) << std::setw(7) << abstained << std::setw(8)
          << percent(static_cast<double>(abstained) / static_cast<double>(total)) << '\n';
    }
    s << "LoE1 " << percent(total ? static_cast<double>(counts[0] + counts[1]) / total : 0.0) << ", LoE2+ "
      << percent(total ? static_cast<double>(counts[0] + counts[1] + counts[2] + counts[3]) / total : 0.0)
      << ", LoE3+ " << percent(total ? static_cast<double>(total - abstained - counts[6]) / total : 0.0) << '\n';
    return s.str();
}

json distribution_json(const std::array<std::size_t, kNumBands>& counts, std::size_t abstained) {
    json j = json::object();
    for (std::size_t b = 0; b < kNumBands; ++b) j[std::string(band_name(static_cast<Band>(b)))] = counts[b];
    j["abstained"] = abstained;
    return j;
}

struct ScoreRow {
    std::string model;
    std::size_t n = 0;
    double macro_f1 = 0.0;
    double rmse = 0.0;
    ConfusionMatrix confusion;
};

ScoreRow score_labels(std::string model, std::span<const LoELabel> predicted, std::span<const LoELabel> gold) {
    ScoreRow row;
    row.model = std::move(model);
    row.n = gold.size();
    row.confusion = confusion_matrix(predicted, gold);
    row.macro_f1 = macro_f1(row.confusion);
    row.rmse = rmse(predicted, gold);
    return row;
}

std::string score_table(std::span<const ScoreRow> rows) {
    std::size_t width = 5;
    for (const auto& r : rows) width = std::max(width, r.model.size());
    std::ostringstream s;
    s << pad("Model", width) << "  Docs  Macro-F1    RMSE\n";
    for (const auto& r : rows) {
        s << pad(r.model, width) << std::setw(6) << r.n << std::setw(10) << fixed(r.macro_f1, 4) << std::setw(8)
          << fixed(r.rmse, 4) << '\n';
    }
    return s.str();
}

json score_json(const ScoreRow& r) {
    json cm = json::array();
    for (const auto& row : r.confusion.counts) cm.push_back(row);
    return {{"model", r.model}, {"docs", r.n}, {"macro_f1", r.macro_f1}, {"rmse", r.rmse}, {"confusion", cm}};
}

// ----- train ------------------------------------------------------------------

struct TrainArgs {
    std::string labels;
    std::string out;
    std::string stopwords;
    std::uint64_t seed = 1;
    std::size_t trees = 200;
    std::size_t features = 2000;
    std::size_t max_depth = 0;
    std::uint32_t min_df = 2;
    std::size_t threads = 0;
    Format format = Format::Text;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
    const auto dataset = load_labeled(a.labels);
    const auto split = stratified_split(dataset, {}, a.seed);

    BaselineParams params;
    params.tfidf.min_df = a.min_df;
    params.selected_features = a.features;
    params.forest.trees = a.trees;
    params.forest.max_depth = a.max_depth;
    params.forest.seed = a.seed;
    params.forest.threads = a.threads;
    const auto model = train_baseline(split.train, params, make_tokenizer(a.stopwords));
    if (!a.out.empty()) model.save(a.out);

    std::vector<ScoreRow> rows;
    for (const auto* part : {&split.valid, &split.test}) {
        std::vector<LoELabel> predicted;
        std::vector<LoELabel> gold;
        for (const auto& item : part->items) {
            predicted.push_back(model.predict(item.document).chosen);
            gold.push_back(item.label);
        }
        rows.push_back(score_labels(part == &split.valid ? "Random Forest (RF), valid" : "Random Forest (RF), test",
                                    predicted, gold));
    }

    if (a.format == Format::Json) {
        json j = {{"dataset", dataset.name},
                  {"seed", a.seed},
                  {"model_id", model.model_id()},
                  {"split", {{"train", split.train.size()}, {"valid", split.valid.size()}, {"test", split.test.size()}}},
                  {"vocabulary", model.tfidf().vocabulary_size()},
                  {"selected_features", model.selected_features().size()},
                  {"valid", score_json(rows[0])},
                  {"test", score_json(rows[1])}};
        out << j.dump(2) << '\n';
        return kExitOk;
    }
    out << "dataset " << dataset.name << ": " << dataset.size() << " documents\n";
    out << "split (seed " << a.seed << "): train " << split.train.size() << ", valid " << split.valid.size()
        << ", test " << split.test.size() << '\n';
    out << "model " << model.model_id() << ": vocabulary " << model.tfidf().vocabulary_size() << ", selected "
        << model.selected_features().size() << " features\n\n";
    out << score_table(rows) << '\n';
    out << "Confusion matrix on the test split (rows gold, columns predicted)\n";
    out << format_confusion_matrix(rows[1].confusion);
    return kExitOk;
}

// ----- classify ---------------------------------------------------------------

struct ClassifyArgs {
    std::string model;
    std::string corpus;
    std::string out;
    std::string tagged;
    std::optional<double> abstain_below;
    Format format = Format::Text;
};

int cmd_classify(const ClassifyArgs& a, std::ostream& out) {
    const auto model = BaselineClassifier::load(a.model);
    auto docs = load_corpus(a.corpus);
    std::vector<Prediction> predictions;
    predictions.reserve(docs.size());
    std::array<std::size_t, kNumBands> counts{};
    std::size_t abstained = 0;
    std::vector<LoELabel> predicted;
    std::vector<LoELabel> gold;
    bool all_gold = !docs.empty();
    for (auto& doc : docs) {
        predictions.push_back(model.predict(doc));
        const auto label = label_or_abstain(predictions.back(), a.abstain_below);
        doc.assigned_loe = label;
        if (label) {
            ++counts[label->index()];
        } else {
            ++abstained;
        }
        if (doc.gold_loe && label) {
            predicted.push_back(*label);
            gold.push_back(*doc.gold_loe);
        }
        all_gold = all_gold && doc.gold_loe.has_value();
    }
    if (!a.out.empty()) write_predictions(predictions, a.out);
    if (!a.tagged.empty()) write_corpus(docs, a.tagged);

    std::optional<ScoreRow> score;
    if (all_gold && !gold.empty()) score = score_labels(model.model_id(), predicted, gold);

    if (a.format == Format::Json) {
        json j = {{"model_id", model.model_id()}, {"documents", docs.size()}, {"distribution", distribution_json(counts, abstained)}};
        if (score) j["score"] = score_json(*score);
        out << j.dump(2) << '\n';
        return kExitOk;
    }
    out << "classified " << docs.size() << " documents with " << model.model_id() << "\n\n";
    out << distribution_table(counts, abstained);
    if (score) out << '\n' << score_table(std::span(&*score, 1));
    return kExitOk;
}

// ----- vote -------------------------------------------------------------------

struct VoteArgs {
    std::vector<std::string> files;
    std::string out;
    std::string labels;
    std::string corpus;
    std::string tagged;
    Format format = Format::Text;
};

struct Ballot {
    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<Vote>> votes;
};

Ballot collect_votes(const std::vector<std::string>& files, std::vector<std::map<std::string, LoELabel>>* members) {
    Ballot ballot;
    for (const auto& file : files) {
        std::map<std::string, LoELabel> labels;
        for (const auto& p : import_external_predictions(file)) {
            const auto& id = doc_id_of(p);
            const Vote v = to_vote(p);
            if (!labels.emplace(id, v.label).second) throw DataError(file + ": duplicate prediction for '" + id + "'");
            auto [it, fresh] = ballot.votes.try_emplace(id);
            if (fresh) ballot.order.push_back(id);
            it->second.push_back(v);
        }
        if (members) members->push_back(std::move(labels));
    }
    std::size_t partial = 0;
    for (const auto& [id, v] : ballot.votes) partial += v.size() < files.size();
    if (partial > 0) {
        log::warn(std::to_string(partial) + " documents are missing from at least one prediction file");
    }
    return ballot;
}

int cmd_vote(const VoteArgs& a, std::ostream& out) {
    if (a.files.size() < 2) throw InvalidArgument("vote needs at least two prediction files");
    std::vector<std::map<std::string, LoELabel>> members;
    const auto ballot = collect_votes(a.files, &members);

    std::map<std::string, LoELabel> decided;
    json records = json::array();
    std::array<std::size_t, kNumBands> counts{};
    for (const auto& id : ballot.order) {
        const auto& votes = ballot.votes.at(id);
        const LoELabel label = majority_vote(votes);
        decided.emplace(id, label);
        ++counts[label.index()];
        json tally = json::object();
        for (const auto& v : votes) {
            auto key = std::string(v.label.name());
            tally[key] = tally.value(key, 0) + 1;
        }
        records.push_back({{"doc_id", id}, {"loe", std::string(label.name())}, {"votes", tally}, {"members", votes.size()}});
    }
    std::string jsonl;
    for (const auto& r : records) jsonl += r.dump() + '\n';
    if (!a.out.empty()) emit(jsonl, a.out, out);

    if (!a.tagged.empty()) {
        if (a.corpus.empty()) throw InvalidArgument("--tagged needs --corpus");
        auto docs = load_corpus(a.corpus);
        for (auto& doc : docs) {
            auto it = decided.find(doc.doc_id);
            doc.assigned_loe = it == decided.end() ? std::nullopt : std::optional<LoELabel>(it->second);
        }
        write_corpus(docs, a.tagged);
    }

    std::vector<ScoreRow> rows;
    if (!a.labels.empty()) {
        const auto gold_docs = load_corpus(a.labels);
        auto score = [&](const std::string& name, const std::map<std::string, LoELabel>& labels) {
            std::vector<LoELabel> predicted;
            std::vector<LoELabel> gold;
            for (const auto& doc : gold_docs) {
                if (!doc.gold_loe) continue;
                auto it = labels.find(doc.doc_id);
                if (it == labels.end()) throw DataError(name + " has no prediction for '" + doc.doc_id + "'");
                predicted.push_back(it->second);
                gold.push_back(*doc.gold_loe);
            }
            if (gold.empty()) throw DataError(a.labels + " has no gold labels");
            rows.push_back(score_labels(name, predicted, gold));
        };
        for (std::size_t i = 0; i < a.files.size(); ++i) {
            score(std::filesystem::path(a.files[i]).stem().string(), members[i]);
        }
        score("Majority voting", decided);
    }

    if (a.format == Format::Json) {
        json j = {{"members", a.files}, {"documents", ballot.order.size()}, {"distribution", distribution_json(counts, 0)}};
        if (!rows.empty()) {
            j["scores"] = json::array();
            for (const auto& r : rows) j["scores"].push_back(score_json(r));
        }
        if (a.out.empty()) j["predictions"] = records;
        out << j.dump(2) << '\n';
        return kExitOk;
    }
    if (a.out.empty()) {
        out << jsonl;
        return kExitOk;
    }
    out << "majority vote over " << a.files.size() << " prediction files: " << ballot.order.size() << " documents\n\n";
    out << distribution_table(counts, 0);
    if (!rows.empty()) out << '\n' << score_table(rows);
    return kExitOk;
}

// ----- index --------------------------------------------------------------------

struct IndexArgs {
    std::string corpus;
    std::vector<std::string> predictions;
    std::string out;
    std::string stopwords;
    bool use_gold = false;
    double k1 = 1.2;
    double b = 0.75;
};

int cmd_index(const IndexArgs& a, std::ostream& out) {
    auto docs = load_corpus(a.corpus);
    if (!a.predictions.empty()) {
        const auto ballot = collect_votes(a.predictions, nullptr);
        for (auto& doc : docs) {
            auto it = ballot.votes.find(doc.doc_id);
            if (it == ballot.votes.end()) continue;
            doc.assigned_loe = majority_vote(it->second);
        }
    }
    const BM25Params params{a.k1, a.b};
    params.validate();
    const auto index = build_index(docs, params, make_tokenizer(a.stopwords), a.use_gold);
    index.save(a.out);
    out << "indexed " << index.n_docs() << " documents, " << index.n_terms() << " terms, average length "
        << fixed(index.avg_doc_length(), 2) << '\n';
    for (auto band : kAllFilterBands) {
        out << pad(std::string(filter_band_name(band)), 6) << std::setw(8) << percent(index.admitted_fraction(band))
            << '\n';
    }
    return kExitOk;
}

// ----- search -------------------------------------------------------------------

struct SearchArgs {
    std::string index;
    std::vector<std::string> query;
    std::string band = "all";
    std::size_t k = 10;
    Format format = Format::Text;
};

int cmd_search(const SearchArgs& a, std::ostream& out) {
    const auto bands = parse_bands(a.band);
    if (bands.size() != 1) throw InvalidArgument("search takes a single band");
    if (a.k == 0) throw InvalidArgument("--k must be >= 1");
    std::string query;
    for (const auto& q : a.query) query += (query.empty() ? "" : " ") + q;
    const auto index = Index::load(a.index);
    const auto hits = search(index, query, bands.front(), a.k);
    if (a.format == Format::Json) {
        json j = json::array();
        for (const auto& h : hits) {
            j.push_back({{"doc_id", h.doc_id}, {"title", index.doc(h.doc).title}, {"score", h.score},
                         {"loe", std::string(h.loe.name())}});
        }
        out << j.dump(2) << '\n';
        return kExitOk;
    }
    out << "Rank  Score     LoE  Doc         Title\n";
    for (std::size_t i = 0; i < hits.size(); ++i) {
        const auto& h = hits[i];
        out << std::setw(4) << i + 1 << "  " << pad(fixed(h.score, 4), 9) << ' ' << pad(std::string(h.loe.name()), 4)
            << ' ' << pad(h.doc_id, 11) << ' ' << index.doc(h.doc).title << '\n';
    }
    if (hits.empty()) out << "(no matching documents)\n";
    return kExitOk;
}

// ----- eval ---------------------------------------------------------------------

struct EvalArgs {
    std::string index;
    std::vector<std::string> topics;
    std::vector<std::string> qrels;
    std::vector<std::string> names;
    std::string bands = "all,loe3,loe2,loe1";
    std::size_t k = 10;
    std::size_t depth = 1000;
    std::string out;
    std::string runs;
    Format format = Format::Text;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
    if (a.topics.empty()) throw InvalidArgument("eval needs --topics and --qrels");
    if (a.topics.size() != a.qrels.size()) throw InvalidArgument("give one --qrels file per --topics file");
    if (!a.names.empty() && a.names.size() != a.topics.size()) throw InvalidArgument("give one --name per --topics file");
    if (a.k == 0 || a.depth == 0) throw InvalidArgument("--k and --depth must be >= 1");
    const auto bands = parse_bands(a.bands);
    const auto index = Index::load(a.index);
    ExperimentOptions options;
    options.k = a.k;
    options.depth = std::max(a.depth, a.k);

    std::vector<ExperimentReport> reports;
    for (std::size_t i = 0; i < a.topics.size(); ++i) {
        const auto topics = load_topics(a.topics[i]);
        const auto qrels = load_qrels(a.qrels[i]);
        const std::string name = a.names.empty() ? std::filesystem::path(a.topics[i]).stem().string() : a.names[i];
        reports.push_back(run_experiment(index, topics, qrels, bands, options, name));
        if (!a.runs.empty()) {
            std::filesystem::create_directories(a.runs);
            for (const auto& br : reports.back().bands) {
                write_run(br.run, std::filesystem::path(a.runs) / (name + "." + std::string(filter_band_token(br.band)) + ".run"));
            }
        }
    }
    std::string text;
    switch (a.format) {
        case Format::Text: text = format_report_text(reports); break;
        case Format::Json: text = report_to_json(reports).dump(2) + "\n"; break;
        case Format::Csv: text = format_report_csv(reports); break;
    }
    emit(text, a.out, out);
    return kExitOk;
}

// ----- explain ------------------------------------------------------------------

struct ExplainArgs {
    std::string model;
    std::string corpus;
    std::size_t limit = 100;
    std::size_t samples = 500;
    double kernel_width = 0.75;
    std::uint64_t seed = 1;
    std::size_t k = 10;
    Format format = Format::Text;
};

std::string term_table(const std::map<Band, TermWeights>& terms, std::size_t k) {
    std::ostringstream s;
    auto block = [&](std::size_t from, std::size_t to) {
        std::vector<std::size_t> widths;
        for (std::size_t b = from; b < to; ++b) {
            std::size_t w = 4;
            for (const auto& [term, score] : terms.at(static_cast<Band>(b))) w = std::max(w, term.size());
            widths.push_back(w);
        }
        auto trimmed = [](std::string line) {
            line.erase(line.find_last_not_of(' ') + 1);
            return line + '\n';
        };
        std::string header;
        std::string columns;
        for (std::size_t b = from; b < to; ++b) {
            header += pad(std::string(band_name(static_cast<Band>(b))), widths[b - from] + 9);
            columns += pad("term", widths[b - from] + 1) + pad("score", 8);
        }
        s << trimmed(header) << trimmed(columns);
        for (std::size_t r = 0; r < k; ++r) {
            std::string line;
            bool any = false;
            for (std::size_t b = from; b < to; ++b) {
                const auto& list = terms.at(static_cast<Band>(b));
                if (r < list.size()) {
                    any = true;
                    line += pad(list[r].first, widths[b - from] + 1) + pad(fixed(list[r].second, 3), 8);
                } else {
                    line += std::string(widths[b - from] + 9, ' ');
                }
            }
            if (!any) break;
            line.erase(line.find_last_not_of(' ') + 1);
            s << line << '\n';
        }
    };
    block(0, 4);
    s << '\n';
    block(4, kNumBands);
    return s.str();
}

int cmd_explain(const ExplainArgs& a, std::ostream& out) {
    if (a.k == 0) throw InvalidArgument("--k must be >= 1");
    const auto model = BaselineClassifier::load(a.model);
    const auto docs = load_corpus(a.corpus);
    ExplainParams params;
    params.n_samples = a.samples;
    params.kernel_width = a.kernel_width;
    std::vector<Explanation> explanations;
    const auto fn = model.as_function();
    for (std::size_t i = 0; i < docs.size() && explanations.size() < a.limit; ++i) {
        const auto terms = model.tokenizer().tokenize(docs[i].text());
        if (terms.empty()) continue;
        params.seed = mix_seed(a.seed, i);
        explanations.push_back(explain(fn, docs[i].doc_id, terms, params));
    }
    if (explanations.empty()) throw DataError("no document in " + a.corpus + " has indexable terms");
    auto terms = aggregate_term_scores(explanations, a.k);
    for (auto b : kAllBands) terms.try_emplace(b);

    if (a.format == Format::Json) {
        json j = {{"model_id", model.model_id()}, {"documents", explanations.size()}, {"seed", a.seed}};
        json bands = json::object();
        for (const auto& [band, list] : terms) {
            json arr = json::array();
            for (const auto& [term, score] : list) arr.push_back({{"term", term}, {"score", score}});
            bands[std::string(band_name(band))] = arr;
        }
        j["terms"] = bands;
        out << j.dump(2) << '\n';
        return kExitOk;
    }
    out << "top terms per band, aggregated over " << explanations.size() << " documents (" << model.model_id()
        << ", seed " << a.seed << ")\n\n";
    out << term_table(terms, a.k);
    return kExitOk;
}

// ----- serve --------------------------------------------------------------------

struct ServeArgs {
    ServiceConfig config;
    std::string band = "all";
};

int cmd_serve(ServeArgs a) {
    const auto bands = parse_bands(a.band);
    if (bands.size() != 1) throw InvalidArgument("serve takes a single default band");
    a.config.default_band = bands.front();
    for (const auto& path : {a.config.index_path, a.config.model_path}) {
        if (!path.empty() && !std::filesystem::exists(path)) throw DataError("cannot open " + path);
    }
    return serve(a.config);
}

// ----- synth --------------------------------------------------------------------

struct SynthArgs {
    std::string kind = "evidence";
    std::size_t n = 2816;
    std::size_t topics = 20;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
    if (a.kind == "evidence") {
        const auto ds = synth::make_evidence_corpus(a.n, a.seed);
        Collection docs;
        for (const auto& item : ds.items) docs.push_back(item.document);
        write_corpus(docs, a.out);
        out << "wrote " << docs.size() << " labeled documents to " << a.out << '\n';
        return kExitOk;
    }
    synth::TestbedParams params;
    params.n_docs = a.n;
    params.n_topics = a.topics;
    params.seed = a.seed;
    const auto bed = synth::make_retrieval_testbed(params);
    const std::filesystem::path dir(a.out);
    std::filesystem::create_directories(dir);
    write_corpus(bed.docs, dir / "corpus.jsonl");
    std::ostringstream topics;
    for (const auto& t : bed.topics) topics << t.id << '\t' << t.query << '\n';
    emit(topics.str(), (dir / "topics.tsv").string(), out);
    std::ostringstream qrels;
    for (const auto& [topic, judgments] : bed.qrels.all()) {
        for (const auto& [doc, grade] : judgments) qrels << topic << " 0 " << doc << ' ' << grade << '\n';
    }
    emit(qrels.str(), (dir / "qrels.txt").string(), out);
    out << "wrote " << bed.docs.size() << " documents, " << bed.topics.size() << " topics and judgments to " << dir.string()
        << '\n';
    return kExitOk;
}

void add_format(CLI::App* cmd, Format& format, bool with_csv) {
    std::vector<std::string> names = {"text", "json"};
    if (with_csv) names.push_back("csv");
    cmd->add_option_function<std::string>(
           "--format", [&format](std::string name) {
               std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
               format = kFormats.at(name);
           }, "Output format")
        ->check(CLI::IsMember(names, CLI::ignore_case));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app("Level-of-evidence classification, filtered retrieval and evaluation", "loe");
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    TrainArgs train;
    auto* c_train = app.add_subcommand("train", "Fit the TF-IDF/chi2/random-forest baseline and score it on held-out splits");
    c_train->add_option("--labels,--corpus", train.labels, "Labeled corpus (JSONL with gold 'loe')")->required();
    c_train->add_option("--out", train.out, "Where to write the model (JSON)");
    c_train->add_option("--seed", train.seed, "Seed for the split and the forest");
    c_train->add_option("--trees", train.trees, "Number of trees")->check(CLI::PositiveNumber);
    c_train->add_option("--features", train.features, "Chi-squared features kept")->check(CLI::PositiveNumber);
    c_train->add_option("--max-depth", train.max_depth, "Tree depth limit (0 = unlimited)");
    c_train->add_option("--min-df", train.min_df, "Minimum document frequency of a vocabulary term");
    c_train->add_option("--threads", train.threads, "Worker threads (0 = all cores)");
    c_train->add_option("--stopwords", train.stopwords, "Stopword file (default: built-in list)");
    add_format(c_train, train.format, false);

    ClassifyArgs classify;
    auto* c_classify = app.add_subcommand("classify", "Tag a corpus with a trained model and summarize the band distribution");
    c_classify->add_option("--model", classify.model, "Model file")->required();
    c_classify->add_option("--corpus", classify.corpus, "Corpus (JSONL)")->required();
    c_classify->add_option("--out", classify.out, "Predictions output (JSONL)");
    c_classify->add_option("--tagged", classify.tagged, "Write the corpus with assigned_loe set");
    c_classify->add_option("--abstain-below", classify.abstain_below, "Leave documents unlabeled below this confidence")
        ->check(CLI::Range(0.0, 1.0));
    add_format(c_classify, classify.format, false);

    VoteArgs vote;
    auto* c_vote = app.add_subcommand("vote", "Merge two or more prediction files by majority vote");
    c_vote->add_option("files", vote.files, "Prediction files (JSONL)");
    c_vote->add_option("--predictions", vote.files, "Prediction file (repeatable)");
    c_vote->add_option("--out", vote.out, "Ensemble predictions output (JSONL); printed when omitted");
    c_vote->add_option("--labels", vote.labels, "Gold-labeled corpus to score members and ensemble");
    c_vote->add_option("--corpus", vote.corpus, "Corpus to tag with the ensemble labels");
    c_vote->add_option("--tagged", vote.tagged, "Write the corpus with assigned_loe set");
    add_format(c_vote, vote.format, false);

    IndexArgs index;
    auto* c_index = app.add_subcommand("index", "Build a BM25 index over a tagged corpus");
    c_index->add_option("--corpus", index.corpus, "Corpus (JSONL, assigned_loe set unless --predictions given)")
        ->required();
    c_index->add_option("--predictions", index.predictions, "Prediction file supplying labels (repeatable; several are voted)")
        ;
    c_index->add_option("--out", index.out, "Index file")->required();
    c_index->add_flag("--use-gold", index.use_gold, "Fall back to the gold label when no label was assigned");
    c_index->add_option("--stopwords", index.stopwords, "Stopword file (default: built-in list)");
    c_index->add_option("--k1", index.k1, "BM25 k1");
    c_index->add_option("--b", index.b, "BM25 b");

    SearchArgs srch;
    auto* c_search = app.add_subcommand("search", "Run one query against an index");
    c_search->add_option("query", srch.query, "Query text")->required();
    c_search->add_option("--index", srch.index, "Index file")->required();
    c_search->add_option("--bands,--band", srch.band, "Evidence filter: all, loe3, loe2 or loe1");
    c_search->add_option("--k", srch.k, "Number of results");
    add_format(c_search, srch.format, false);

    EvalArgs eval;
    auto* c_eval = app.add_subcommand("eval", "Score filtered retrieval against TREC judgments");
    c_eval->add_option("--index", eval.index, "Index file")->required();
    c_eval->add_option("--topics", eval.topics, "Topic file, TREC XML or id<TAB>query (repeatable)");
    c_eval->add_option("--qrels", eval.qrels, "Qrels file, one per --topics (repeatable)");
    c_eval->add_option("--name", eval.names, "Display name per topic set (repeatable)");
    c_eval->add_option("--bands", eval.bands, "Comma-separated filter bands");
    c_eval->add_option("--k", eval.k, "Metric cutoff");
    c_eval->add_option("--depth", eval.depth, "Retrieval depth per topic");
    c_eval->add_option("--out", eval.out, "Write the report here instead of stdout");
    c_eval->add_option("--runs", eval.runs, "Directory for TREC run files");
    add_format(c_eval, eval.format, true);

    ExplainArgs expl;
    auto* c_explain = app.add_subcommand("explain", "Aggregate perturbation explanations into a per-band term table");
    c_explain->add_option("--model", expl.model, "Model file")->required();
    c_explain->add_option("--corpus", expl.corpus, "Documents to explain (JSONL)")->required();
    c_explain->add_option("--limit", expl.limit, "Maximum number of documents explained")->check(CLI::PositiveNumber);
    c_explain->add_option("--samples", expl.samples, "Perturbation samples per document")->check(CLI::Range(2, 100000));
    c_explain->add_option("--kernel-width", expl.kernel_width, "Similarity kernel width")->check(CLI::PositiveNumber);
    c_explain->add_option("--seed", expl.seed, "Seed of the perturbation samples");
    c_explain->add_option("--k", expl.k, "Terms per band");
    add_format(c_explain, expl.format, false);

    ServeArgs srv;
    auto* c_serve = app.add_subcommand("serve", "Serve search, classify and explain over HTTP");
    c_serve->add_option("--index", srv.config.index_path, "Index file")->required();
    c_serve->add_option("--model", srv.config.model_path, "Model file (classify/explain disabled without it)")
        ;
    c_serve->add_option("--host", srv.config.host, "Listen address");
    c_serve->add_option("--port", srv.config.port, "Listen port")->check(CLI::Range(1, 65535));
    c_serve->add_option("--bands,--band", srv.band, "Default evidence filter");
    c_serve->add_option("--max-k", srv.config.max_k, "Largest k a client may request")->check(CLI::PositiveNumber);
    c_serve->add_option("--cors", srv.config.cors_allow, "Allowed CORS origin (repeatable, '*' for any)");

    SynthArgs syn;
    auto* c_synth = app.add_subcommand("synth", "Write synthetic demo data");
    c_synth->add_option("kind", syn.kind, "evidence (labeled corpus file) or testbed (directory with corpus, topics, qrels)")
        ->check(CLI::IsMember({"evidence", "testbed"}));
    c_synth->add_option("--n", syn.n, "Number of documents")->check(CLI::PositiveNumber);
    c_synth->add_option("--topics", syn.topics, "Number of topics (testbed)")->check(CLI::PositiveNumber);
    c_synth->add_option("--seed", syn.seed, "Generator seed");
    c_synth->add_option("--out", syn.out, "Output file (evidence) or directory (testbed)")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (c_train->parsed()) return cmd_train(train, out);
        if (c_classify->parsed()) return cmd_classify(classify, out);
        if (c_vote->parsed()) return cmd_vote(vote, out);
        if (c_index->parsed()) return cmd_index(index, out);
        if (c_search->parsed()) return cmd_search(srch, out);
        if (c_eval->parsed()) return cmd_eval(eval, out);
        if (c_explain->parsed()) return cmd_explain(expl, out);
        if (c_serve->parsed()) return cmd_serve(srv);
        if (c_synth->parsed()) return cmd_synth(syn, out);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace loe
