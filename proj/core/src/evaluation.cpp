#include "paperrec/evaluation.hpp"

#include <algorithm>
#include <ostream>
#include <random>

#include <nlohmann/json.hpp>

#include "paperrec/errors.hpp"

namespace paperrec {

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& other) {
    true_positive += other.true_positive;
    false_positive += other.false_positive;
    false_negative += other.false_negative;
    return *this;
}

double precision(const ConfusionCounts& c) {
    std::size_t denom = c.true_positive + c.false_positive;
    return denom == 0 ? 0.0 : static_cast<double>(c.true_positive) / static_cast<double>(denom);
}

double recall(const ConfusionCounts& c) {
    std::size_t denom = c.true_positive + c.false_negative;
    return denom == 0 ? 0.0 : static_cast<double>(c.true_positive) / static_cast<double>(denom);
}

double f_measure(double p, double r) {
    double sum = p + r;
    return sum == 0.0 ? 0.0 : 2.0 * p * r / sum;
}

std::vector<FoldSplit> k_fold_split(const Corpus& corpus, std::size_t k,
                                    std::uint64_t seed,
                                    std::vector<std::string>* excluded) {
    if (k < 2) throw ParamError("fold count k must be >= 2");

    std::vector<FoldSplit> folds(k);
    for (std::size_t i = 0; i < k; ++i) folds[i].fold_index = i;

    std::mt19937_64 rng(seed);
    std::size_t eligible = 0;
    for (const auto& [uid, profile] : corpus.users) {
        if (profile.reference_set.size() < k) {
            if (excluded) excluded->push_back(uid);
            continue;
        }
        ++eligible;
        std::vector<std::string> refs(profile.reference_set.begin(),
                                      profile.reference_set.end());
        std::shuffle(refs.begin(), refs.end(), rng);
        for (std::size_t i = 0; i < refs.size(); ++i) {
            std::size_t held_fold = i % k;
            for (std::size_t f = 0; f < k; ++f) {
                auto& bucket = f == held_fold ? folds[f].held_out[uid] : folds[f].training[uid];
                bucket.insert(refs[i]);
            }
        }
    }
    if (eligible == 0)
        throw ParamError("evaluation infeasible: no user has at least " +
                         std::to_string(k) + " references");
    return folds;
}

Corpus mask_references(const Corpus& corpus, const FoldSplit& fold) {
    Corpus masked = corpus;
    for (const auto& [uid, training] : fold.training)
        masked.users.at(uid).reference_set = training;
    return masked;
}

EvaluationReport evaluate(const Corpus& corpus, const EvaluationOptions& opts) {
    if (opts.top_n_sweep.empty()) throw ParamError("top-n sweep must be non-empty");
    opts.params.validate();

    EvaluationReport report;
    report.alpha = opts.weights.alpha();
    report.beta = opts.weights.beta();
    report.gamma = opts.weights.gamma();
    report.mu = opts.weights.mu();
    report.min_threshold_pct = opts.params.min_threshold_pct;
    report.folds = opts.k;
    report.seed = opts.seed;
    report.corpus_digest = corpus_digest(corpus);
    report.oracle_mode = opts.perfect_oracle;
    switch (opts.strategy) {
        case CandidateStrategy::all_referenced_by_neighbors:
            report.candidate_strategy = "neighbors";
            break;
        case CandidateStrategy::full_corpus:
            report.candidate_strategy = "corpus";
            break;
        case CandidateStrategy::explicit_list:
            report.candidate_strategy = "explicit";
            break;
    }
    report.list_size_rule =
        opts.params.max_recommendations
            ? "fixed-length:" + std::to_string(*opts.params.max_recommendations)
            : "threshold-cut";

    auto folds = k_fold_split(corpus, opts.k, opts.seed, &report.excluded_users);

    for (const auto& fold : folds) {
        Corpus masked = mask_references(corpus, fold);
        SimilarityMatrix matrix = build_matrix(masked, opts.weights);
        auto& per_top_n = report.fold_counts[fold.fold_index];

        for (std::size_t top_n : opts.top_n_sweep) {
            RecommendationParams params = opts.params;
            params.top_n = top_n;

            ConfusionCounts total;
            for (const auto& [uid, held] : fold.held_out) {
                std::set<std::string> recommended;
                if (opts.perfect_oracle) {
                    recommended = held;
                } else {
                    auto candidates = candidate_pool(masked, matrix, uid,
                                                     opts.strategy, top_n);
                    for (const auto& r : recommend(masked, matrix, uid, candidates, params))
                        recommended.insert(r.paper_id);
                }
                ConfusionCounts c;
                for (const auto& pid : recommended)
                    if (held.contains(pid)) ++c.true_positive;
                c.false_positive = recommended.size() - c.true_positive;
                c.false_negative = held.size() - c.true_positive;
                total += c;
            }
            per_top_n[top_n] = total;
        }
    }

    // per-fold micro metrics, arithmetic mean over folds per sweep point
    for (std::size_t top_n : opts.top_n_sweep) {
        double p_sum = 0.0, r_sum = 0.0;
        for (const auto& [fold_index, per_top_n] : report.fold_counts) {
            const auto& c = per_top_n.at(top_n);
            p_sum += precision(c);
            r_sum += recall(c);
        }
        double nfolds = static_cast<double>(report.fold_counts.size());
        SweepRow row;
        row.top_n = top_n;
        row.precision = p_sum / nfolds;
        row.recall = r_sum / nfolds;
        row.f_measure = f_measure(row.precision, row.recall);
        report.aggregated.push_back(row);
    }
    std::sort(report.aggregated.begin(), report.aggregated.end(),
              [](const SweepRow& a, const SweepRow& b) { return a.top_n < b.top_n; });
    return report;
}

void emit_sweep_csv(const EvaluationReport& report, std::ostream& out) {
    out << "top_n,precision,recall,f_measure\n";
    out.precision(12);
    for (const auto& row : report.aggregated)
        out << row.top_n << ',' << row.precision << ',' << row.recall << ','
            << row.f_measure << '\n';
}

void emit_report_json(const EvaluationReport& report, std::ostream& out) {
    nlohmann::json doc;
    doc["metadata"] = {
        {"weights", {{"alpha", report.alpha},
                     {"beta", report.beta},
                     {"gamma", report.gamma},
                     {"mu", report.mu}}},
        {"min_threshold_pct", report.min_threshold_pct},
        {"folds", report.folds},
        {"seed", report.seed},
        {"corpus_digest", report.corpus_digest},
        {"candidate_strategy", report.candidate_strategy},
        {"list_size_rule", report.list_size_rule},
        {"oracle_mode", report.oracle_mode},
    };
    doc["excluded_users"] = report.excluded_users;
    doc["excluded_user_count"] = report.excluded_users.size();

    auto& folds = doc["fold_counts"] = nlohmann::json::array();
    for (const auto& [fold_index, per_top_n] : report.fold_counts) {
        nlohmann::json fold;
        fold["fold"] = fold_index;
        for (const auto& [top_n, c] : per_top_n) {
            fold["counts"].push_back({{"top_n", top_n},
                                      {"true_positive", c.true_positive},
                                      {"false_positive", c.false_positive},
                                      {"false_negative", c.false_negative}});
        }
        folds.push_back(std::move(fold));
    }

    auto& rows = doc["aggregated"] = nlohmann::json::array();
    for (const auto& row : report.aggregated)
        rows.push_back({{"top_n", row.top_n},
                        {"precision", row.precision},
                        {"recall", row.recall},
                        {"f_measure", row.f_measure}});
    out << doc.dump(2) << '\n';
}

}  // namespace paperrec
