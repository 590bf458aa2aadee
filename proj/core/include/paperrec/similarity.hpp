#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "paperrec/corpus.hpp"

namespace paperrec {

// Ensemble coefficients for the weighted similarity combination.
// Normalized to sum 1 at construction; raw weights must be finite,
// non-negative, and not all zero.
class SimilarityWeights {
public:
    SimilarityWeights();  // equal weights 0.25 each
    SimilarityWeights(double alpha, double beta, double gamma, double mu);

    double alpha() const { return alpha_; }  // keyword
    double beta() const { return beta_; }    // reference
    double gamma() const { return gamma_; }  // co-author
    double mu() const { return mu_; }        // citation

private:
    double alpha_, beta_, gamma_, mu_;
};

struct SimilarityBreakdown {
    double sim_key = 0.0;
    double sim_ref = 0.0;
    double sim_coauth = 0.0;
    double sim_cit = 0.0;
    double sim_final = 0.0;
};

// |a∩b| / |a∪b|; 0 when both sets are empty.
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

double sim_keyword(const UserProfile& u, const UserProfile& v);
double sim_coauthor(const UserProfile& u, const UserProfile& v);
double sim_citation(const UserProfile& u, const UserProfile& v);
double sim_reference(const UserProfile& u, const UserProfile& v);

SimilarityBreakdown ensemble_sim(const UserProfile& u, const UserProfile& v,
                                 const SimilarityWeights& w);

// Symmetric user×user ensemble scores. Only the upper triangle is stored;
// the accessor mirrors indices. Diagonal is excluded.
class SimilarityMatrix {
public:
    // Direct construction from scores: users must be distinct; scores holds
    // the upper triangle row by row, size n*(n-1)/2. Users are kept in the
    // given order for indexing but score() accepts ids in either order.
    SimilarityMatrix(std::vector<std::string> users, std::vector<double> scores);

    const std::vector<std::string>& users() const { return users_; }
    std::size_t size() const { return users_.size(); }
    bool contains(const std::string& user_id) const;

    double score(const std::string& u, const std::string& v) const;

    // The n other users with highest score, descending, ties broken by
    // ascending user id. Returns all others when fewer than n exist.
    std::vector<std::pair<std::string, double>> top_n_neighbors(
        const std::string& target, std::size_t n) const;

private:
    std::size_t index_of(const std::string& user_id) const;
    double at(std::size_t i, std::size_t j) const;

    std::vector<std::string> users_;
    std::map<std::string, std::size_t> index_;
    std::vector<double> scores_;
};

// One sim_final per unordered user pair, users ordered ascending by id.
// threads = 0 picks the hardware concurrency; output is identical to the
// sequential computation for any thread count. Throws ParamError on
// corpora with fewer than 2 users.
SimilarityMatrix build_matrix(const Corpus& corpus, const SimilarityWeights& w,
                              std::size_t threads = 0);

// CSV with per-component breakdowns, one row per unordered pair sorted by
// (user_a, user_b) ascending.
void export_matrix_csv(const Corpus& corpus, const SimilarityWeights& w,
                       std::ostream& out);

}  // namespace paperrec
