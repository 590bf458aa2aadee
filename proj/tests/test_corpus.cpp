#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <zlib.h>

#include "paperrec/corpus.hpp"
#include "paperrec/errors.hpp"
#include "support/synthetic.hpp"

using namespace paperrec;
namespace fs = std::filesystem;

namespace {

ParseResult parse_str(const std::string& text) {
    std::istringstream in(text);
    return parse_corpus(in);
}

fs::path temp_file(const char* name) {
    return fs::temp_directory_path() / (std::string("paperrec_corpus_") + name);
}

}  // namespace

TEST_CASE("single record yields one paper and two users") {
    auto [corpus, stats] = parse_str(
        R"({"id":"p1","authors":["u1","u2"],"keywords":["cf"],"references":["p9"],"citations":[]})"
        "\n");
    CHECK(corpus.papers.size() == 1);
    CHECK(corpus.users.size() == 2);
    CHECK(corpus.users.at("u1").coauthor_set == std::set<std::string>{"u2"});
    CHECK(corpus.users.at("u2").coauthor_set == std::set<std::string>{"u1"});
    CHECK(corpus.users.at("u1").reference_set == std::set<std::string>{"p9"});
    CHECK(stats.parsed_papers == 1);
    CHECK(stats.malformed_lines == 0);
}

TEST_CASE("empty stream gives an empty corpus without error") {
    auto [corpus, stats] = parse_str("");
    CHECK(corpus.papers.empty());
    CHECK(corpus.users.empty());
    CHECK(stats.total_lines == 0);
}

TEST_CASE("self-reference is stripped on ingest") {
    auto [corpus, stats] = parse_str(
        R"({"id":"p1","authors":["u1"],"references":["p1","p2"],"citations":["p1"]})"
        "\n");
    const auto& p = corpus.papers.at("p1");
    CHECK(p.references == std::set<std::string>{"p2"});
    CHECK(p.citations.empty());
    CHECK(stats.self_edges_removed == 1);
}

TEST_CASE("duplicate paper ids: first occurrence wins and is counted") {
    auto [corpus, stats] = parse_str(
        R"({"id":"p1","authors":["u1"],"keywords":["first"]})" "\n"
        R"({"id":"p1","authors":["u2"],"keywords":["second"]})" "\n");
    CHECK(corpus.papers.size() == 1);
    CHECK(corpus.papers.at("p1").keywords == std::set<std::string>{"first"});
    CHECK(stats.duplicate_ids == 1);
}

TEST_CASE("more than 10% malformed lines aborts with a format error") {
    std::string good = R"({"id":"pX","authors":["u1"]})" "\n";
    std::string text;
    for (int i = 0; i < 5; ++i) {
        text += R"({"id":"p)" + std::to_string(i) + R"(","authors":["u1"]})" "\n";
    }
    text += "this is not json\n";
    CHECK_THROWS_AS(parse_str(text), FormatError);

    // same bad line diluted below the 10% cut parses fine
    for (int i = 5; i < 20; ++i)
        text += R"({"id":"p)" + std::to_string(i) + R"(","authors":["u1"]})" "\n";
    auto [corpus, stats] = parse_str(text);
    CHECK(stats.malformed_lines == 1);
    CHECK(corpus.papers.size() == 20);
}

TEST_CASE("keyword normalization") {
    CHECK(normalize_keyword("  Collaborative   Filtering ") == "collaborative filtering");
    CHECK(normalize_keyword("CF") == "cf");
    CHECK(normalize_keyword("   ") == "");

    // idempotence over random-ish strings
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        std::string s;
        std::size_t len = rng() % 24;
        for (std::size_t j = 0; j < len; ++j)
            s.push_back(" \tAbZ x"[rng() % 7]);
        auto once = normalize_keyword(s);
        CHECK(normalize_keyword(once) == once);
    }
}

TEST_CASE("build_profiles unions features over authored papers") {
    std::map<std::string, PaperRecord> papers;
    papers["p1"] = {"p1", "", {"u1", "u2"}, {"a"}, {}, {}};
    papers["p2"] = {"p2", "", {"u1"}, {"a", "b"}, {}, {}};
    auto users = build_profiles(papers);
    CHECK(users.at("u1").keyword_set == std::set<std::string>{"a", "b"});
    CHECK(users.at("u1").coauthor_set == std::set<std::string>{"u2"});
    CHECK(users.at("u2").coauthor_set == std::set<std::string>{"u1"});
    CHECK(users.at("u2").keyword_set == std::set<std::string>{"a"});

    SUBCASE("author with no keywords anywhere gets an empty set") {
        papers["p3"] = {"p3", "", {"u3"}, {}, {}, {}};
        auto rebuilt = build_profiles(papers);
        CHECK(rebuilt.at("u3").keyword_set.empty());
    }

    SUBCASE("rebuild is idempotent") {
        CHECK(build_profiles(papers) == build_profiles(papers));
    }
}

TEST_CASE("profile invariants hold on random corpora") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        auto corpus = paperrec::testing::make_random_corpus(rng);
        for (const auto& [uid, profile] : corpus.users) {
            CHECK(!profile.coauthor_set.contains(uid));
            for (const auto& pid : profile.authored_papers)
                CHECK(corpus.papers.at(pid).author_ids.contains(uid));
        }
        for (const auto& [pid, paper] : corpus.papers) {
            CHECK(!paper.references.contains(pid));
            for (const auto& uid : paper.author_ids)
                CHECK(corpus.users.at(uid).authored_papers.contains(pid));
        }
    }
}

TEST_CASE("cache round-trip is an identity") {
    std::mt19937_64 rng(13);
    auto corpus = paperrec::testing::make_random_corpus(rng);
    auto path = temp_file("roundtrip.json");
    save_corpus(corpus, path.string());
    CHECK(load_corpus(path.string()) == corpus);
    fs::remove(path);
}

TEST_CASE("truncated cache is rejected without a partial corpus") {
    std::mt19937_64 rng(17);
    auto corpus = paperrec::testing::make_random_corpus(rng);
    auto path = temp_file("truncated.json");
    save_corpus(corpus, path.string());
    auto size = fs::file_size(path);
    fs::resize_file(path, size / 2);
    CHECK_THROWS_AS(load_corpus(path.string()), FormatError);
    fs::remove(path);
}

TEST_CASE("cache with a different schema version is rejected") {
    auto path = temp_file("version.json");
    {
        std::ofstream out(path);
        out << R"({"schema_version": 999, "papers": []})";
    }
    CHECK_THROWS_AS(load_corpus(path.string()), FormatError);
    fs::remove(path);
}

TEST_CASE("missing cache file raises an I/O error") {
    CHECK_THROWS_AS(load_corpus("/nonexistent/paperrec.cache"), IoError);
}

TEST_CASE("gzipped corpus is detected and inflated") {
    auto path = temp_file("corpus.jsonl.gz");
    std::string line = R"({"id":"p1","authors":["u1"],"keywords":["deep learning"]})" "\n";
    gzFile gz = gzopen(path.string().c_str(), "wb");
    REQUIRE(gz != nullptr);
    gzwrite(gz, line.data(), static_cast<unsigned>(line.size()));
    gzclose(gz);

    auto [corpus, stats] = parse_corpus_file(path.string());
    CHECK(corpus.papers.size() == 1);
    CHECK(corpus.papers.at("p1").keywords == std::set<std::string>{"deep learning"});
    fs::remove(path);
}

TEST_CASE("field map renames input fields") {
    FieldMap fields;
    fields.id = "paper_id";
    fields.authors = "writers";
    std::istringstream in(R"({"paper_id":"p1","writers":["u1"]})" "\n");
    auto [corpus, stats] = parse_corpus(in, fields);
    CHECK(corpus.papers.count("p1") == 1);
    CHECK(corpus.users.count("u1") == 1);
}

TEST_CASE("corpus digest is stable and input-sensitive") {
    std::mt19937_64 rng(23);
    auto corpus = paperrec::testing::make_random_corpus(rng);
    auto d1 = corpus_digest(corpus);
    CHECK(d1 == corpus_digest(corpus));
    Corpus other = corpus;
    other.papers.begin()->second.title += "x";
    CHECK(corpus_digest(other) != d1);
}
