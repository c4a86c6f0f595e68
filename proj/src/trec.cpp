#include "loe/trec.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "loe/error.hpp"
#include "loe/log.hpp"

namespace loe {
namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

std::string read_file(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(std::string("cannot open ") + what + " file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        std::string_view line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        f(line, line_no);
        pos = end + 1;
    }
}

}  // namespace

bool TopicLess::operator()(std::string_view a, std::string_view b) const {
    if (all_digits(a) && all_digits(b)) {
        auto strip = [](std::string_view s) {
            auto nz = s.find_first_not_of('0');
            return nz == std::string_view::npos ? std::string_view("0") : s.substr(nz);
        };
        auto sa = strip(a);
        auto sb = strip(b);
        if (sa.size() != sb.size()) return sa.size() < sb.size();
        if (sa != sb) return sa < sb;
    }
    return a < b;
}

void Qrels::add(const std::string& topic, const std::string& doc_id, int grade) {
    if (grade < 0 || grade > 2) throw DataError("relevance grade " + std::to_string(grade) + " outside {0,1,2}");
    judgments_[topic][doc_id] = grade;
}

int Qrels::grade(std::string_view topic, std::string_view doc_id) const {
    auto t = judgments_.find(topic);
    if (t == judgments_.end()) return 0;
    auto d = t->second.find(std::string(doc_id));
    return d == t->second.end() ? 0 : d->second;
}

bool Qrels::judged(std::string_view topic, std::string_view doc_id) const {
    auto t = judgments_.find(topic);
    return t != judgments_.end() && t->second.contains(std::string(doc_id));
}

const Qrels::TopicJudgments& Qrels::topic(std::string_view topic) const {
    static const TopicJudgments empty;
    auto t = judgments_.find(topic);
    return t == judgments_.end() ? empty : t->second;
}

std::size_t Qrels::relevant_count(std::string_view topic) const {
    const auto& j = this->topic(topic);
    return static_cast<std::size_t>(std::count_if(j.begin(), j.end(), [](const auto& e) { return e.second >= 1; }));
}

std::vector<std::string> Run::ranking(std::string_view topic) const {
    std::vector<std::string> out;
    auto it = topics.find(topic);
    if (it == topics.end()) return out;
    out.reserve(it->second.size());
    for (const auto& e : it->second) out.push_back(e.doc_id);
    return out;
}

Qrels parse_qrels(std::string_view text, const std::string& source) {
    Qrels qrels;
    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        auto fields = split_ws(line);
        if (fields.empty()) return;
        if (fields.size() != 4) throw RecordError(source, line_no, "expected 'topic iteration docid grade'");
        int grade = 0;
        if (!parse_number(fields[3], grade)) throw RecordError(source, line_no, "grade is not an integer");
        try {
            qrels.add(std::string(fields[0]), std::string(fields[2]), grade);
        } catch (const DataError& e) {
            throw RecordError(source, line_no, e.what());
        }
    });
    return qrels;
}

Qrels load_qrels(const std::filesystem::path& path) { return parse_qrels(read_file(path, "qrels"), path.string()); }

Run parse_run(std::string_view text, const std::string& source) {
    struct Raw {
        long rank;
        double score;
        std::string doc;
    };
    std::map<std::string, std::vector<Raw>, TopicLess> raw;
    std::map<std::string, std::unordered_set<std::string>, TopicLess> seen;
    Run run;
    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        auto f = split_ws(line);
        if (f.empty()) return;
        if (f.size() != 6) throw RecordError(source, line_no, "expected 'topic Q0 docid rank score tag'");
        Raw r{0, 0.0, std::string(f[2])};
        if (!parse_number(f[3], r.rank)) throw RecordError(source, line_no, "rank is not an integer");
        if (!parse_number(f[4], r.score)) throw RecordError(source, line_no, "score is not a number");
        std::string topic(f[0]);
        if (!seen[topic].insert(r.doc).second) {
            throw RecordError(source, line_no, "document '" + r.doc + "' listed twice for topic " + topic);
        }
        if (run.tag.empty()) run.tag = std::string(f[5]);
        raw[topic].push_back(std::move(r));
    });
    for (auto& [topic, entries] : raw) {
        std::stable_sort(entries.begin(), entries.end(), [](const Raw& a, const Raw& b) { return a.rank < b.rank; });
        bool consistent = true;
        for (std::size_t i = 1; i < entries.size(); ++i) {
            if (entries[i].score > entries[i - 1].score) consistent = false;
        }
        if (!consistent) {
            log::warn(source + ": ranks and scores disagree for topic " + topic + "; reordering by score");
            std::stable_sort(entries.begin(), entries.end(), [](const Raw& a, const Raw& b) { return a.score > b.score; });
        }
        auto& out = run.topics[topic];
        for (auto& e : entries) out.push_back({std::move(e.doc), e.score});
    }
    return run;
}

Run load_run(const std::filesystem::path& path) { return parse_run(read_file(path, "run"), path.string()); }

std::string format_run(const Run& run) {
    const std::string tag = run.tag.empty() ? "run" : run.tag;
    std::string out;
    char buf[64];
    for (const auto& [topic, entries] : run.topics) {
        for (std::size_t i = 0; i < entries.size(); ++i) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, entries[i].score);
            out += topic;
            out += " Q0 ";
            out += entries[i].doc_id;
            out += ' ';
            out += std::to_string(i + 1);
            out += ' ';
            out.append(buf, ptr);
            out += ' ';
            out += tag;
            out += '\n';
        }
    }
    return out;
}

void write_run(const Run& run, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write run file " + path.string());
    out << format_run(run);
}

}  // namespace loe
