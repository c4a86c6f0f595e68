#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "loe/error.hpp"
#include "loe/random.hpp"
#include "loe/textproc.hpp"

using namespace loe;

namespace {

std::vector<std::string> v(std::initializer_list<const char*> items) { return {items.begin(), items.end()}; }

std::vector<std::string> as_vector(std::span<const std::string> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(Tokenize, SystematicReviewsOfRcts) {
    const auto t = tokenize("Systematic reviews of RCTs");
    EXPECT_EQ(as_vector(t.unigrams()), v({"systemat", "review", "rct"}));
    EXPECT_EQ(as_vector(t.bigrams()), v({"systemat review", "review rct"}));
}

TEST(Tokenize, HyphenatedMetaAnalysis) {
    EXPECT_EQ(tokenize("meta-analysis").terms, v({"meta", "analysi", "meta analysi"}));
}

TEST(Tokenize, EmptyAndStopwordOnlyText) {
    EXPECT_TRUE(tokenize("").empty());
    EXPECT_TRUE(tokenize("  ,;  ").empty());
    EXPECT_TRUE(tokenize("of the and").empty());
}

TEST(Tokenize, SingleTokenHasNoBigram) {
    const auto t = tokenize("cohort");
    EXPECT_EQ(t.terms, v({"cohort"}));
    EXPECT_EQ(t.unigram_count, 1u);
}

TEST(Tokenize, FoldsAccentsAndKeepsDigits) {
    EXPECT_EQ(tokenize("Café BRAF-V600E").terms, v({"cafe", "braf", "v600e", "cafe braf", "braf v600e"}));
}

TEST(Tokenize, BigramsSkipRemovedStopwords) {
    EXPECT_EQ(as_vector(tokenize("case and control").bigrams()), v({"case control"}));
}

TEST(Tokenize, NoWhitespaceExceptBigramSeparator) {
    const auto t = tokenize("A randomised, double-blind\ttrial of\n aspirin (100 mg) in 2,000 adults; et al.");
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto spaces = std::count(t.terms[i].begin(), t.terms[i].end(), ' ');
        EXPECT_EQ(spaces, i < t.unigram_count ? 0 : 1) << t.terms[i];
        EXPECT_EQ(t.terms[i].find_first_of("\t\n"), std::string::npos);
    }
    for (const auto& u : t.unigrams()) EXPECT_FALSE(default_stopwords().contains(u)) << u;
}

TEST(Tokenize, CustomStopwords) {
    Tokenizer tok(StopwordSet{"trial"});
    EXPECT_EQ(tok.unigrams("the randomized trial"), v({"the", "random"}));
}

TEST(Tokenize, StopwordFileIgnoresCommentsAndBlankLines) {
    testing_support::TempDir dir;
    auto path = dir.write("stop.txt", "# comment\n\nFoo\n  bar  \n");
    const auto set = load_stopwords(path);
    EXPECT_EQ(set, (StopwordSet{"foo", "bar"}));
    EXPECT_THROW(load_stopwords(dir.file("missing.txt")), DataError);
}

TEST(Tokenize, ShippedStopwordFileMatchesBuiltInList) {
    const auto shipped = load_stopwords(std::string(LOE_TEST_DATA_DIR) + "/../../data/stopwords.txt");
    EXPECT_EQ(shipped, default_stopwords());
}

TEST(Tokenize, IdempotentOnJoinedUnigrams) {
    std::ifstream in(std::string(LOE_TEST_DATA_DIR) + "/porter_reference.tsv");
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        words.push_back(line.substr(0, line.find('\t')));
    }
    ASSERT_GT(words.size(), 1000u);
    Rng rng(5);
    for (int trial = 0; trial < 500; ++trial) {
        std::string text;
        const auto n = 1 + uniform_index(rng, 30);
        for (std::size_t i = 0; i < n; ++i) text += words[uniform_index(rng, words.size())] + " ";
        const auto first = tokenize(text);
        std::string joined;
        for (const auto& u : first.unigrams()) joined += u + " ";
        EXPECT_EQ(tokenize(joined), first) << text;
    }
}

TEST(Porter, MatchesReferenceImplementation) {
    std::ifstream in(std::string(LOE_TEST_DATA_DIR) + "/porter_reference.tsv");
    ASSERT_TRUE(in);
    std::string line;
    std::size_t checked = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string word, stem, fixpoint;
        std::getline(ss, word, '\t');
        std::getline(ss, stem, '\t');
        std::getline(ss, fixpoint, '\t');
        EXPECT_EQ(porter_stem(word), stem) << word;
        EXPECT_EQ(stem_fixpoint(word), fixpoint) << word;
        ++checked;
    }
    EXPECT_GT(checked, 2000u);
}

TEST(Porter, ClassicExamples) {
    EXPECT_EQ(porter_stem("caresses"), "caress");
    EXPECT_EQ(porter_stem("ponies"), "poni");
    EXPECT_EQ(porter_stem("hopping"), "hop");
    EXPECT_EQ(porter_stem("relational"), "relat");
    EXPECT_EQ(porter_stem("accuracy"), "accuraci");
    EXPECT_EQ(porter_stem("epidemiology"), "epidemiolog");
    EXPECT_EQ(porter_stem("uncontrolled"), "uncontrol");
    EXPECT_EQ(porter_stem("as"), "as");
}

TEST(AsciiFold, LatinOneAndOtherScripts) {
    EXPECT_EQ(ascii_fold("Ärzte Œ straße"), "arzte   strasse");
    EXPECT_EQ(ascii_fold("αβ x"), "   x");
}
