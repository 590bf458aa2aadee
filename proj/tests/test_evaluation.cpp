#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "paperrec/errors.hpp"
#include "paperrec/evaluation.hpp"
#include "support/synthetic.hpp"

using namespace paperrec;

namespace {

// Every user references the same pool, so any held-out reference is always
// recoverable from some neighbor's training set.
Corpus saturating_fixture(std::size_t n_users = 12, std::size_t n_refs = 6) {
    Corpus corpus;
    std::set<std::string> refs;
    for (std::size_t r = 0; r < n_refs; ++r) refs.insert("r" + std::to_string(r));
    for (std::size_t u = 0; u < n_users; ++u) {
        std::string uid = "u" + std::to_string(u);
        std::string pid = "p" + std::to_string(u);
        corpus.papers[pid] = {pid, "", {uid}, {"cf"}, refs, {}};
    }
    corpus.users = build_profiles(corpus.papers);
    return corpus;
}

// Mutually dissimilar users: no shared keywords, references, or anything.
Corpus null_signal_fixture(std::size_t n_users = 8) {
    Corpus corpus;
    for (std::size_t u = 0; u < n_users; ++u) {
        std::string uid = "u" + std::to_string(u);
        std::string pid = "p" + std::to_string(u);
        corpus.papers[pid] = {pid, "", {uid},
                              {"kw" + std::to_string(u)},
                              {"ref" + std::to_string(u) + "a", "ref" + std::to_string(u) + "b"},
                              {}};
    }
    corpus.users = build_profiles(corpus.papers);
    return corpus;
}

std::string report_to_string(const EvaluationReport& report) {
    std::ostringstream js, csv;
    emit_report_json(report, js);
    emit_sweep_csv(report, csv);
    return js.str() + "\n---\n" + csv.str();
}

}  // namespace

TEST_CASE("metric hand cases") {
    CHECK(precision({3, 1, 0}) == doctest::Approx(0.75));
    CHECK(precision({0, 0, 5}) == 0.0);
    CHECK(precision({4, 0, 0}) == 1.0);

    CHECK(recall({3, 0, 3}) == doctest::Approx(0.5));
    CHECK(recall({4, 1, 0}) == 1.0);
    CHECK(recall({0, 2, 3}) == 0.0);

    CHECK(f_measure(0.5, 1.0) == doctest::Approx(2.0 / 3.0));
    CHECK(f_measure(0.7, 0.7) == doctest::Approx(0.7));
    CHECK(f_measure(0.0, 0.9) == 0.0);
    CHECK(f_measure(0.0, 0.0) == 0.0);
}

TEST_CASE("k_fold_split structure") {
    auto corpus = saturating_fixture(4, 10);

    SUBCASE("10 references over 10 folds hold out exactly one each") {
        auto folds = k_fold_split(corpus, 10, 1);
        REQUIRE(folds.size() == 10);
        for (const auto& fold : folds)
            for (const auto& [uid, held] : fold.held_out) {
                CHECK(held.size() == 1);
                CHECK(fold.training.at(uid).size() == 9);
            }
    }

    SUBCASE("training and held-out partition the full reference set") {
        auto folds = k_fold_split(corpus, 3, 7);
        for (const auto& fold : folds)
            for (const auto& [uid, held] : fold.held_out) {
                const auto& training = fold.training.at(uid);
                std::set<std::string> uni = training;
                uni.insert(held.begin(), held.end());
                CHECK(uni == corpus.users.at(uid).reference_set);
                for (const auto& r : held) CHECK(!training.contains(r));
            }
        // each reference is held out exactly once across folds
        for (const auto& [uid, profile] : corpus.users)
            for (const auto& r : profile.reference_set) {
                int times = 0;
                for (const auto& fold : folds) times += fold.held_out.at(uid).count(r);
                CHECK(times == 1);
            }
    }

    SUBCASE("users below the reference floor are excluded and reported") {
        Corpus corpus2 = corpus;
        corpus2.papers["small"] = {"small", "", {"tiny"}, {}, {"r0", "r1", "r2"}, {}};
        corpus2.users = build_profiles(corpus2.papers);
        std::vector<std::string> excluded;
        auto folds = k_fold_split(corpus2, 10, 1, &excluded);
        CHECK(excluded == std::vector<std::string>{"tiny"});
        for (const auto& fold : folds) CHECK(!fold.held_out.contains("tiny"));
    }

    SUBCASE("identical seed reproduces identical splits") {
        auto a = k_fold_split(corpus, 5, 99);
        auto b = k_fold_split(corpus, 5, 99);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].training == b[i].training);
            CHECK(a[i].held_out == b[i].held_out);
        }
    }

    SUBCASE("k < 2 is a parameter error") {
        CHECK_THROWS_AS(k_fold_split(corpus, 1, 1), ParamError);
    }

    SUBCASE("no eligible user is an evaluation-infeasible error") {
        CHECK_THROWS_AS(k_fold_split(corpus, 50, 1), ParamError);
    }
}

TEST_CASE("mask_references removes held-out references from training profiles") {
    auto corpus = saturating_fixture();
    auto folds = k_fold_split(corpus, 3, 5);
    for (const auto& fold : folds) {
        auto masked = mask_references(corpus, fold);
        for (const auto& [uid, held] : fold.held_out) {
            const auto& training_refs = masked.users.at(uid).reference_set;
            for (const auto& r : held) CHECK(!training_refs.contains(r));
            CHECK(training_refs == fold.training.at(uid));
        }
    }
}

TEST_CASE("saturating fixture reaches recall 1.0 at sufficient top-n") {
    auto corpus = saturating_fixture();
    EvaluationOptions opts;
    opts.params.min_threshold_pct = 0.0;
    opts.top_n_sweep = {11};
    opts.k = 3;
    opts.seed = 21;
    auto report = evaluate(corpus, opts);
    REQUIRE(report.aggregated.size() == 1);
    CHECK(report.aggregated[0].recall == doctest::Approx(1.0));
}

TEST_CASE("mutually dissimilar users produce empty recommendations") {
    auto corpus = null_signal_fixture();
    EvaluationOptions opts;
    opts.params.min_threshold_pct = 30.0;
    opts.top_n_sweep = {5};
    opts.k = 2;
    auto report = evaluate(corpus, opts);
    REQUIRE(report.aggregated.size() == 1);
    CHECK(report.aggregated[0].precision == 0.0);
    CHECK(report.aggregated[0].recall == 0.0);
    CHECK(report.aggregated[0].f_measure == 0.0);
}

TEST_CASE("perfect oracle scores 1.0 on every fold") {
    paperrec::testing::SyntheticParams p;
    p.n_users = 30;
    auto corpus = paperrec::testing::make_synthetic_corpus(p);
    EvaluationOptions opts;
    opts.top_n_sweep = {3, 6};
    opts.k = 4;
    opts.perfect_oracle = true;
    auto report = evaluate(corpus, opts);
    for (const auto& [fold, per_top_n] : report.fold_counts)
        for (const auto& [top_n, c] : per_top_n) {
            CHECK(precision(c) == 1.0);
            CHECK(recall(c) == 1.0);
        }
    for (const auto& row : report.aggregated) {
        CHECK(row.precision == 1.0);
        CHECK(row.recall == 1.0);
        CHECK(row.f_measure == 1.0);
    }
}

TEST_CASE("identical seed and inputs give an identical report") {
    paperrec::testing::SyntheticParams p;
    p.n_users = 24;
    auto corpus = paperrec::testing::make_synthetic_corpus(p);
    EvaluationOptions opts;
    opts.top_n_sweep = {3, 8};
    opts.k = 3;
    opts.seed = 77;
    CHECK(report_to_string(evaluate(corpus, opts)) ==
          report_to_string(evaluate(corpus, opts)));
}

TEST_CASE("sweep CSV layout and internal consistency") {
    paperrec::testing::SyntheticParams p;
    p.n_users = 20;
    auto corpus = paperrec::testing::make_synthetic_corpus(p);
    EvaluationOptions opts;
    opts.top_n_sweep = {4, 8};
    opts.k = 3;
    auto report = evaluate(corpus, opts);

    std::ostringstream out;
    emit_sweep_csv(report, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "top_n,precision,recall,f_measure");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 2);

    for (const auto& row : report.aggregated) {
        double expected = f_measure(row.precision, row.recall);
        CHECK(row.f_measure == doctest::Approx(expected).epsilon(1e-12));
    }

    std::ostringstream again;
    emit_sweep_csv(report, again);
    CHECK(out.str() == again.str());  // byte-identical re-emission
}

TEST_CASE("evaluate rejects bad parameters") {
    auto corpus = saturating_fixture();
    EvaluationOptions opts;
    opts.top_n_sweep = {};
    CHECK_THROWS_AS(evaluate(corpus, opts), ParamError);
}
