#include "loe/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <regex>
#include <sstream>

#include "loe/error.hpp"
#include "loe/log.hpp"
#include "loe/metrics.hpp"

namespace loe {

using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string xml_field(const std::string& body, const std::string& tag) {
    const std::regex re("<" + tag + "[^>]*>([\\s\\S]*?)</" + tag + ">");
    std::smatch m;
    return std::regex_search(body, m, re) ? trim(m[1].str()) : std::string();
}

}  // namespace

std::vector<Topic> parse_topics(std::string_view text, const std::string& source) {
    std::vector<Topic> topics;
    const std::string s(text);
    if (s.find("<topic") != std::string::npos) {
        const std::regex topic_re("<topic\\s+number=\"([^\"]+)\"[^>]*>([\\s\\S]*?)</topic>");
        for (auto it = std::sregex_iterator(s.begin(), s.end(), topic_re); it != std::sregex_iterator(); ++it) {
            const std::string body = (*it)[2].str();
            std::string query = xml_field(body, "disease");
            const std::string gene = xml_field(body, "gene");
            if (!gene.empty()) query += (query.empty() ? "" : " ") + gene;
            if (query.empty()) query = trim(std::regex_replace(body, std::regex("<[^>]*>"), " "));
            topics.push_back({(*it)[1].str(), query});
        }
        if (topics.empty()) throw DataError(source + ": no <topic number=...> elements found");
        return topics;
    }
    std::istringstream in(s);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw RecordError(source, line_no, "expected 'id<TAB>query'");
        Topic t{trim(line.substr(0, tab)), trim(line.substr(tab + 1))};
        if (t.id.empty()) throw RecordError(source, line_no, "empty topic id");
        topics.push_back(std::move(t));
    }
    return topics;
}

std::vector<Topic> load_topics(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open topics file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_topics(buf.str(), path.string());
}

const BandResult& ExperimentReport::band(FilterBand b) const {
    for (const auto& r : bands) {
        if (r.band == b) return r;
    }
    throw InvalidArgument("band not part of the experiment: " + std::string(filter_band_name(b)));
}

ExperimentReport run_experiment(const Index& index, std::span<const Topic> topics, const Qrels& qrels,
                                std::span<const FilterBand> bands, const ExperimentOptions& options, std::string name) {
    if (options.k == 0 || options.depth == 0) throw InvalidArgument("experiment cutoffs must be >= 1");
    ExperimentReport report;
    report.name = std::move(name);
    report.k = options.k;

    std::vector<FilterBand> order = {FilterBand::All};
    for (auto b : bands) {
        if (std::find(order.begin(), order.end(), b) == order.end()) order.push_back(b);
    }

    std::vector<Topic> sorted(topics.begin(), topics.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const Topic& a, const Topic& b) { return TopicLess{}(a.id, b.id); });
    std::vector<const Topic*> evaluated;
    for (const auto& t : sorted) {
        if (!qrels.has_topic(t.id)) {
            log::warn("topic " + t.id + " has no relevance judgments; excluded");
            report.skipped_topics.push_back(t.id);
        } else if (qrels.relevant_count(t.id) == 0) {
            report.skipped_topics.push_back(t.id);
        } else {
            evaluated.push_back(&t);
            report.evaluated_topics.push_back(t.id);
        }
    }

    const std::size_t depth = std::max(options.depth, options.k);
    for (auto band : order) {
        BandResult result;
        result.band = band;
        result.admitted_fraction = index.admitted_fraction(band);
        result.run.tag = std::string(filter_band_token(band));
        for (const Topic* topic : evaluated) {
            const auto hits = search(index, topic->query, band, depth);
            std::vector<std::string> ranking;
            auto& entries = result.run.topics[topic->id];
            for (const auto& h : hits) {
                ranking.push_back(h.doc_id);
                entries.push_back({h.doc_id, h.score});
            }
            const auto& judgments = qrels.topic(topic->id);
            TopicScores s;
            s.ndcg = *ndcg_at_k(ranking, judgments, options.k, options.log_base);
            s.infndcg_approx = *condensed_ndcg_at_k(ranking, judgments, depth, options.log_base);
            s.r_prec = *r_precision(ranking, judgments);
            s.p_at_k = precision_at_k(ranking, judgments, options.k);
            result.per_topic[topic->id] = s;
        }
        if (!evaluated.empty()) {
            const double n = static_cast<double>(evaluated.size());
            for (const auto& [_, s] : result.per_topic) {
                result.mean.ndcg += s.ndcg;
                result.mean.infndcg_approx += s.infndcg_approx;
                result.mean.r_prec += s.r_prec;
                result.mean.p_at_k += s.p_at_k;
            }
            result.mean.ndcg /= n;
            result.mean.infndcg_approx /= n;
            result.mean.r_prec /= n;
            result.mean.p_at_k /= n;
        }
        report.bands.push_back(std::move(result));
    }

    const BandResult& all = report.bands.front();
    const unsigned tests = static_cast<unsigned>(report.bands.size() - 1);
    report.corrected_alpha = tests > 0 ? bonferroni(0.05, tests) : 0.05;
    for (auto& r : report.bands) {
        r.delta.ndcg = r.mean.ndcg - all.mean.ndcg;
        r.delta.infndcg_approx = r.mean.infndcg_approx - all.mean.infndcg_approx;
        r.delta.r_prec = r.mean.r_prec - all.mean.r_prec;
        r.delta.p_at_k = r.mean.p_at_k - all.mean.p_at_k;
        if (r.band != FilterBand::All && evaluated.size() >= 2) {
            std::vector<double> a;
            std::vector<double> b;
            for (const auto& [topic, s] : r.per_topic) {
                a.push_back(s.ndcg);
                b.push_back(all.per_topic.at(topic).ndcg);
            }
            r.ndcg_test = paired_t_test(a, b);
        }
    }
    return report;
}

namespace {

std::string fixed(double v, int digits = 4) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

std::string signed_fixed(double v, int digits = 4) {
    std::ostringstream s;
    s << std::showpos << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string set_name(const ExperimentReport& r, std::size_t i) {
    return r.name.empty() ? "set" + std::to_string(i + 1) : r.name;
}

}  // namespace

std::string format_report_text(std::span<const ExperimentReport> reports) {
    if (reports.empty()) return {};
    std::ostringstream out;
    const auto& first = reports.front();
    const std::size_t k = first.k;

    // Table 1: NDCG@k with deltas against All.
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header = {"Exp./Set", "size"};
    for (std::size_t i = 0; i < reports.size(); ++i) header.push_back(set_name(reports[i], i));
    rows.push_back(header);
    for (std::size_t b = 0; b < first.bands.size(); ++b) {
        const auto band = first.bands[b].band;
        std::vector<std::string> row = {std::string(filter_band_name(band)),
                                        fixed(100.0 * first.bands[b].admitted_fraction, 1) + "%"};
        for (const auto& rep : reports) {
            const auto& r = rep.band(band);
            std::string cell = fixed(r.mean.ndcg);
            if (band != FilterBand::All) cell += " (" + signed_fixed(r.delta.ndcg) + ")";
            row.push_back(cell);
        }
        rows.push_back(row);
    }

    auto emit = [&](const std::string& title, const std::vector<std::vector<std::string>>& table) {
        std::vector<std::size_t> widths(table.front().size(), 0);
        for (const auto& row : table) {
            for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
        }
        out << title << '\n';
        for (std::size_t r = 0; r < table.size(); ++r) {
            for (std::size_t c = 0; c < table[r].size(); ++c) {
                out << (c == 0 ? "" : " | ") << pad(table[r][c], widths[c]);
            }
            out << '\n';
            if (r == 0) {
                for (std::size_t c = 0; c < widths.size(); ++c) out << (c == 0 ? "" : "-+-") << std::string(widths[c], '-');
                out << '\n';
            }
        }
    };
    emit("NDCG@" + std::to_string(k) + " by evidence filter (delta vs All in parentheses)", rows);
    out << '\n';

    // Table 2: infNDCG-approx / R-Prec / P@k.
    std::vector<std::vector<std::string>> rows2;
    std::vector<std::string> header2 = {"Exp./Set"};
    for (std::size_t i = 0; i < reports.size(); ++i) header2.push_back(set_name(reports[i], i));
    rows2.push_back(header2);
    for (const auto& br : first.bands) {
        std::vector<std::string> row = {std::string(filter_band_name(br.band))};
        for (const auto& rep : reports) {
            const auto& r = rep.band(br.band);
            row.push_back(fixed(r.mean.infndcg_approx) + " / " + fixed(r.mean.r_prec) + " / " + fixed(r.mean.p_at_k));
        }
        rows2.push_back(row);
    }
    emit("infNDCG-approx / R-Prec / P@" + std::to_string(k), rows2);

    out << '\n';
    for (std::size_t i = 0; i < reports.size(); ++i) {
        out << set_name(reports[i], i) << ": " << reports[i].evaluated_topics.size() << " topics evaluated, "
            << reports[i].skipped_topics.size() << " skipped\n";
    }
    return out.str();
}

json report_to_json(std::span<const ExperimentReport> reports) {
    json out = json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& rep = reports[i];
        json bands = json::array();
        for (const auto& r : rep.bands) {
            auto means = [](const MetricMeans& m) {
                return json{{"ndcg", m.ndcg}, {"infndcg_approx", m.infndcg_approx}, {"r_prec", m.r_prec}, {"p_at_k", m.p_at_k}};
            };
            json jb = {{"band", filter_band_name(r.band)},
                       {"size", r.admitted_fraction},
                       {"mean", means(r.mean)},
                       {"delta", means(r.delta)}};
            if (r.ndcg_test) jb["ndcg_ttest"] = {{"t", r.ndcg_test->t}, {"p", r.ndcg_test->p}, {"df", r.ndcg_test->df}};
            bands.push_back(std::move(jb));
        }
        out.push_back({{"set", set_name(rep, i)},
                       {"k", rep.k},
                       {"evaluated_topics", rep.evaluated_topics},
                       {"skipped_topics", rep.skipped_topics},
                       {"corrected_alpha", rep.corrected_alpha},
                       {"bands", std::move(bands)}});
    }
    return out;
}

std::string format_report_csv(std::span<const ExperimentReport> reports) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "set,band,topic,ndcg,infndcg_approx,r_prec,p_at_k\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        for (const auto& r : reports[i].bands) {
            for (const auto& [topic, s] : r.per_topic) {
                out << set_name(reports[i], i) << ',' << filter_band_name(r.band) << ',' << topic << ',' << s.ndcg << ','
                    << s.infndcg_approx << ',' << s.r_prec << ',' << s.p_at_k << '\n';
            }
        }
    }
    return out.str();
}

}  // namespace loe
