#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace loe {

/// Orders topic ids numerically when both are all digits, else bytewise.
struct TopicLess {
    bool operator()(std::string_view a, std::string_view b) const;
    using is_transparent = void;
};

/// Graded judgments: topic -> doc_id -> grade in {0, 1, 2}.
class Qrels {
public:
    using TopicJudgments = std::map<std::string, int>;

    /// Throws DataError unless grade is 0, 1 or 2. Re-judging a pair
    /// overwrites the earlier grade.
    void add(const std::string& topic, const std::string& doc_id, int grade);

    /// Grade of a pair, 0 when unjudged.
    int grade(std::string_view topic, std::string_view doc_id) const;
    bool judged(std::string_view topic, std::string_view doc_id) const;
    bool has_topic(std::string_view topic) const { return judgments_.find(topic) != judgments_.end(); }

    /// Judgments of one topic (empty when the topic is unknown).
    const TopicJudgments& topic(std::string_view topic) const;
    /// Number of documents with grade >= 1.
    std::size_t relevant_count(std::string_view topic) const;

    const std::map<std::string, TopicJudgments, TopicLess>& all() const { return judgments_; }

private:
    std::map<std::string, TopicJudgments, TopicLess> judgments_;
};

struct RunEntry {
    std::string doc_id;
    double score = 0.0;
    friend bool operator==(const RunEntry&, const RunEntry&) = default;
};

/// Ranked results per topic.
struct Run {
    std::string tag;
    std::map<std::string, std::vector<RunEntry>, TopicLess> topics;

    /// Document ids of one topic in rank order.
    std::vector<std::string> ranking(std::string_view topic) const;
};

/// Lines "topic iteration docid grade". Grades outside {0,1,2} raise
/// RecordError.
Qrels load_qrels(const std::filesystem::path& path);
Qrels parse_qrels(std::string_view text, const std::string& source = "<qrels>");

/// Lines "topic Q0 docid rank score tag". Entries are ordered by rank; when
/// that order contradicts the scores a warning is issued and the topic is
/// re-sorted by score (descending, rank breaking ties). Duplicate documents
/// within a topic raise RecordError.
Run load_run(const std::filesystem::path& path);
Run parse_run(std::string_view text, const std::string& source = "<run>");

/// Canonical run text: topics in TopicLess order, ranks from 1, scores in
/// shortest round-trip decimal form.
std::string format_run(const Run& run);
void write_run(const Run& run, const std::filesystem::path& path);

}  // namespace loe
