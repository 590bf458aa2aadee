#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "paperrec/corpus.hpp"
#include "paperrec/recommend.hpp"
#include "paperrec/similarity.hpp"

namespace paperrec {

// One round of the cross-validation: per evaluated user, the references kept
// for training and the ones held out as ground truth. training ∪ held_out is
// the user's full reference set, the intersection is empty, and across the k
// folds every reference lands in exactly one held-out set.
struct FoldSplit {
    std::size_t fold_index = 0;
    std::map<std::string, std::set<std::string>> training;
    std::map<std::string, std::set<std::string>> held_out;
};

struct ConfusionCounts {
    std::size_t true_positive = 0;
    std::size_t false_positive = 0;
    std::size_t false_negative = 0;

    ConfusionCounts& operator+=(const ConfusionCounts& other);
};

double precision(const ConfusionCounts& c);  // TP/(TP+FP), 0 when undefined
double recall(const ConfusionCounts& c);     // TP/(TP+FN), 0 when undefined
double f_measure(double p, double r);        // 2pr/(p+r), 0 when p+r = 0

struct SweepRow {
    std::size_t top_n = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
};

struct EvaluationReport {
    // per fold, per top_n: micro-summed counts across evaluated users
    std::map<std::size_t, std::map<std::size_t, ConfusionCounts>> fold_counts;
    std::vector<SweepRow> aggregated;  // ascending by top_n
    std::vector<std::string> excluded_users;

    // run metadata
    double alpha = 0, beta = 0, gamma = 0, mu = 0;
    double min_threshold_pct = 0;
    std::size_t folds = 0;
    std::uint64_t seed = 0;
    std::uint64_t corpus_digest = 0;
    std::string candidate_strategy;
    std::string list_size_rule;  // "threshold-cut" or "fixed-length:<n>"
    bool oracle_mode = false;
};

struct EvaluationOptions {
    SimilarityWeights weights;
    RecommendationParams params;         // top_n is overridden by the sweep
    std::vector<std::size_t> top_n_sweep = {5, 10, 20};
    std::size_t k = 10;
    std::uint64_t seed = 1;
    CandidateStrategy strategy = CandidateStrategy::all_referenced_by_neighbors;
    // Replaces the recommender with one that emits exactly the held-out set;
    // used as an upper-bound sanity check on the harness.
    bool perfect_oracle = false;
};

// Deterministic per-user split: references are shuffled by a generator seeded
// from `seed` and dealt round-robin into k folds. Users with fewer than k
// references are excluded and reported. Throws ParamError for k < 2 and when
// no user meets the floor.
std::vector<FoldSplit> k_fold_split(const Corpus& corpus, std::size_t k,
                                    std::uint64_t seed,
                                    std::vector<std::string>* excluded = nullptr);

// Full cross-validated sweep. Per fold, profiles and the similarity matrix
// are rebuilt from training references only; recommendations are scored
// against each user's held-out set, counts micro-summed across users, and
// the per-fold metrics averaged across folds per sweep point.
EvaluationReport evaluate(const Corpus& corpus, const EvaluationOptions& opts);

// A copy of the corpus whose evaluated users' reference sets are replaced by
// their training subsets. Exposed for the leakage audit.
Corpus mask_references(const Corpus& corpus, const FoldSplit& fold);

// CSV `top_n,precision,recall,f_measure`, rows ascending by top_n.
void emit_sweep_csv(const EvaluationReport& report, std::ostream& out);

// JSON document with metrics, metadata, and exclusion counts.
void emit_report_json(const EvaluationReport& report, std::ostream& out);

}  // namespace paperrec
