#include <gtest/gtest.h>

#include <sstream>

#include <json.hpp>

#include "helpers.hpp"
#include "loe/cli.hpp"

using namespace loe;
using testing_support::read_file;
using testing_support::TempDir;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    CliResult r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST(Cli, HelpListsEverySubcommand) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, kExitOk);
    for (const char* sub : {"train", "classify", "vote", "index", "search", "eval", "explain", "serve", "synth"}) {
        EXPECT_NE(r.out.find(sub), std::string::npos) << sub;
    }
    EXPECT_EQ(run({"eval", "--help"}).code, kExitOk);
}

TEST(Cli, UsageErrorsExitOne) {
    EXPECT_EQ(run({}).code, kExitUsage);
    EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
    EXPECT_EQ(run({"train", "--labels", "x.jsonl", "--bogus"}).code, kExitUsage);
    EXPECT_EQ(run({"train"}).code, kExitUsage);
    EXPECT_EQ(run({"search", "q", "--index", "x", "--format", "yaml"}).code, kExitUsage);
}

TEST(Cli, UnreadableInputExitsTwo) {
    TempDir dir;
    const auto r = run({"train", "--labels", dir.file("missing.jsonl").string()});
    EXPECT_EQ(r.code, kExitData);
    EXPECT_NE(r.err.find("missing.jsonl"), std::string::npos);
    EXPECT_EQ(run({"search", "x", "--index", dir.file("none.idx").string()}).code, kExitData);
    const auto bad = dir.write("bad.jsonl", "{\"doc_id\": \"a\"\n");
    EXPECT_EQ(run({"train", "--labels", bad.string()}).code, kExitData);
}

TEST(Cli, TrainIsDeterministicAndClassifyVotePipeline) {
    TempDir dir;
    const auto corpus = dir.file("corpus.jsonl").string();
    ASSERT_EQ(run({"synth", "evidence", "--n", "400", "--seed", "3", "--out", corpus}).code, kExitOk);

    const std::vector<std::string> train = {"train", "--labels", corpus, "--seed", "7", "--trees", "15",
                                            "--out", dir.file("m7.json").string()};
    const auto first = run(train);
    ASSERT_EQ(first.code, kExitOk) << first.err;
    const auto second = run(train);
    EXPECT_EQ(first.out, second.out);
    EXPECT_EQ(read_file(dir.file("m7.json")).size() > 0, true);
    EXPECT_NE(first.out.find("Random Forest (RF)"), std::string::npos);
    EXPECT_NE(first.out.find("Macro-F1"), std::string::npos);
    EXPECT_NE(first.out.find("RMSE"), std::string::npos);
    EXPECT_NE(first.out.find("train 240, valid 80, test 80"), std::string::npos) << first.out;

    std::vector<std::string> prediction_files;
    for (const char* seed : {"7", "8", "9"}) {
        const auto model = dir.file(std::string("m") + seed + ".json").string();
        if (std::string(seed) != "7") {
            ASSERT_EQ(run({"train", "--labels", corpus, "--seed", seed, "--trees", "15", "--out", model}).code, kExitOk);
        }
        const auto preds = dir.file(std::string("p") + seed + ".jsonl").string();
        const auto c = run({"classify", "--model", model, "--corpus", corpus, "--out", preds});
        ASSERT_EQ(c.code, kExitOk) << c.err;
        EXPECT_NE(c.out.find("LoE1"), std::string::npos);
        EXPECT_EQ(count_lines(read_file(preds)), 400u);
        prediction_files.push_back(preds);
    }

    const auto voted = dir.file("vote.jsonl").string();
    auto args = std::vector<std::string>{"vote"};
    args.insert(args.end(), prediction_files.begin(), prediction_files.end());
    args.insert(args.end(), {"--out", voted, "--labels", corpus});
    const auto v = run(args);
    ASSERT_EQ(v.code, kExitOk) << v.err;
    EXPECT_NE(v.out.find("Majority voting"), std::string::npos);
    const auto text = read_file(voted);
    ASSERT_EQ(count_lines(text), 400u);
    const auto record = nlohmann::json::parse(text.substr(0, text.find('\n')));
    EXPECT_TRUE(record.contains("doc_id"));
    EXPECT_TRUE(record.contains("loe"));
    EXPECT_EQ(record["members"], 3);

    EXPECT_EQ(run({"vote", prediction_files[0]}).code, kExitUsage);
}

TEST(Cli, IndexSearchEvalOnTestbed) {
    TempDir dir;
    const auto bed = dir.file("bed").string();
    ASSERT_EQ(run({"synth", "testbed", "--n", "400", "--topics", "6", "--seed", "2", "--out", bed}).code, kExitOk);
    const auto index = dir.file("bed.idx").string();
    const auto built = run({"index", "--corpus", bed + "/corpus.jsonl", "--out", index});
    ASSERT_EQ(built.code, kExitOk) << built.err;
    EXPECT_NE(built.out.find("indexed 400 documents"), std::string::npos);

    const auto s = run({"search", "t1k0", "t1k1", "--index", index, "--band", "loe1", "--k", "3"});
    ASSERT_EQ(s.code, kExitOk) << s.err;
    EXPECT_NE(s.out.find("Rank"), std::string::npos);
    const auto sj = run({"search", "t1k0 t1k1", "--index", index, "--band", "loe1", "--format", "json"});
    ASSERT_EQ(sj.code, kExitOk);
    for (const auto& hit : nlohmann::json::parse(sj.out)) {
        const auto loe = hit["loe"].get<std::string>();
        EXPECT_TRUE(loe == "1a" || loe == "1b") << loe;
    }

    const auto e = run({"eval", "--index", index, "--topics", bed + "/topics.tsv", "--qrels", bed + "/qrels.txt",
                        "--bands", "all,loe3,loe2,loe1", "--runs", dir.file("runs").string()});
    ASSERT_EQ(e.code, kExitOk) << e.err;
    std::size_t rows = 0;
    std::istringstream lines(e.out);
    std::string line;
    bool first_table = true;
    while (std::getline(lines, line)) {
        if (line.empty()) first_table = false;
        if (!first_table) continue;
        for (const char* band : {"All ", "LoE3+", "LoE2+", "LoE1 "}) {
            if (line.rfind(band, 0) == 0) {
                ++rows;
                EXPECT_NE(line.find('%'), std::string::npos) << line;
            }
        }
    }
    EXPECT_EQ(rows, 4u) << e.out;
    EXPECT_NE(e.out.find("infNDCG-approx"), std::string::npos);
    EXPECT_TRUE(std::filesystem::exists(dir.file("runs")));

    const auto csv = run({"eval", "--index", index, "--topics", bed + "/topics.tsv", "--qrels", bed + "/qrels.txt",
                          "--format", "CSV"});
    ASSERT_EQ(csv.code, kExitOk) << csv.err;
    EXPECT_EQ(csv.out.rfind("set,band,topic", 0), 0u);

    EXPECT_EQ(run({"eval", "--index", index, "--topics", bed + "/topics.tsv"}).code, kExitUsage);
    EXPECT_EQ(run({"eval", "--index", index, "--topics", bed + "/topics.tsv", "--qrels", bed + "/qrels.txt",
                   "--bands", "loe9"})
                  .code,
              kExitUsage);
}

TEST(Cli, ExplainProducesTermTable) {
    TempDir dir;
    const auto corpus = dir.file("corpus.jsonl").string();
    ASSERT_EQ(run({"synth", "evidence", "--n", "300", "--out", corpus}).code, kExitOk);
    const auto model = dir.file("m.json").string();
    ASSERT_EQ(run({"train", "--labels", corpus, "--trees", "10", "--out", model}).code, kExitOk);
    const auto e = run({"explain", "--model", model, "--corpus", corpus, "--limit", "5", "--samples", "60", "--k", "3"});
    ASSERT_EQ(e.code, kExitOk) << e.err;
    EXPECT_NE(e.out.find("1a"), std::string::npos);
    EXPECT_NE(e.out.find("3b"), std::string::npos);
    EXPECT_EQ(e.out, run({"explain", "--model", model, "--corpus", corpus, "--limit", "5", "--samples", "60", "--k", "3"}).out);
}
