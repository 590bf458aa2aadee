#include "paperrec/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "paperrec/errors.hpp"

namespace paperrec {

namespace {

// Sorted-id view of a profile, used by the matrix builder so the hot loop
// compares integers instead of strings.
struct InternedProfile {
    std::vector<std::uint32_t> keywords;
    std::vector<std::uint32_t> coauthors;
    std::vector<std::uint32_t> citations;
    std::vector<std::uint32_t> references;
};

class Interner {
public:
    std::uint32_t id(const std::string& s) {
        auto [it, inserted] = ids_.try_emplace(s, static_cast<std::uint32_t>(ids_.size()));
        return it->second;
    }

    std::vector<std::uint32_t> intern(const std::set<std::string>& set) {
        std::vector<std::uint32_t> out;
        out.reserve(set.size());
        for (const auto& s : set) out.push_back(id(s));
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::unordered_map<std::string, std::uint32_t> ids_;
};

double jaccard_sorted(const std::vector<std::uint32_t>& a,
                      const std::vector<std::uint32_t>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else { ++inter; ++ia; ++ib; }
    }
    return static_cast<double>(inter) /
           static_cast<double>(a.size() + b.size() - inter);
}

double combine(double key, double ref, double coauth, double cit,
               const SimilarityWeights& w) {
    double wsum = w.alpha() + w.beta() + w.gamma() + w.mu();
    return (w.alpha() * key + w.beta() * ref + w.gamma() * coauth + w.mu() * cit) / wsum;
}

}  // namespace

SimilarityWeights::SimilarityWeights() : alpha_(0.25), beta_(0.25), gamma_(0.25), mu_(0.25) {}

SimilarityWeights::SimilarityWeights(double alpha, double beta, double gamma, double mu) {
    for (double w : {alpha, beta, gamma, mu}) {
        if (!std::isfinite(w)) throw ParamError("similarity weights must be finite");
        if (w < 0.0) throw ParamError("similarity weights must be non-negative");
    }
    double sum = alpha + beta + gamma + mu;
    if (sum <= 0.0) throw ParamError("similarity weights must not all be zero");
    alpha_ = alpha / sum;
    beta_ = beta / sum;
    gamma_ = gamma / sum;
    mu_ = mu / sum;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else { ++inter; ++ia; ++ib; }
    }
    return static_cast<double>(inter) /
           static_cast<double>(a.size() + b.size() - inter);
}

double sim_keyword(const UserProfile& u, const UserProfile& v) {
    return jaccard(u.keyword_set, v.keyword_set);
}

double sim_coauthor(const UserProfile& u, const UserProfile& v) {
    return jaccard(u.coauthor_set, v.coauthor_set);
}

double sim_citation(const UserProfile& u, const UserProfile& v) {
    return jaccard(u.citation_set, v.citation_set);
}

double sim_reference(const UserProfile& u, const UserProfile& v) {
    return jaccard(u.reference_set, v.reference_set);
}

SimilarityBreakdown ensemble_sim(const UserProfile& u, const UserProfile& v,
                                 const SimilarityWeights& w) {
    SimilarityBreakdown b;
    b.sim_key = sim_keyword(u, v);
    b.sim_ref = sim_reference(u, v);
    b.sim_coauth = sim_coauthor(u, v);
    b.sim_cit = sim_citation(u, v);
    b.sim_final = combine(b.sim_key, b.sim_ref, b.sim_coauth, b.sim_cit, w);
    return b;
}

SimilarityMatrix::SimilarityMatrix(std::vector<std::string> users,
                                   std::vector<double> scores)
    : users_(std::move(users)), scores_(std::move(scores)) {
    std::size_t n = users_.size();
    if (n < 2) throw ParamError("similarity matrix needs at least 2 users");
    if (scores_.size() != n * (n - 1) / 2)
        throw ParamError("similarity score count does not match user count");
    for (std::size_t i = 0; i < n; ++i) {
        if (!index_.emplace(users_[i], i).second)
            throw ParamError("duplicate user id in similarity matrix: " + users_[i]);
    }
}

bool SimilarityMatrix::contains(const std::string& user_id) const {
    return index_.contains(user_id);
}

std::size_t SimilarityMatrix::index_of(const std::string& user_id) const {
    auto it = index_.find(user_id);
    if (it == index_.end()) throw ParamError("unknown user id: " + user_id);
    return it->second;
}

double SimilarityMatrix::at(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    // row i of the upper triangle starts after rows 0..i-1
    std::size_t n = users_.size();
    std::size_t offset = i * n - i * (i + 1) / 2;
    return scores_[offset + (j - i - 1)];
}

double SimilarityMatrix::score(const std::string& u, const std::string& v) const {
    std::size_t i = index_of(u);
    std::size_t j = index_of(v);
    if (i == j) throw ParamError("self-similarity is not stored: " + u);
    return at(i, j);
}

std::vector<std::pair<std::string, double>> SimilarityMatrix::top_n_neighbors(
    const std::string& target, std::size_t n) const {
    if (n == 0) throw ParamError("top-n count must be >= 1");
    std::size_t t = index_of(target);

    std::vector<std::pair<std::string, double>> others;
    others.reserve(users_.size() - 1);
    for (std::size_t i = 0; i < users_.size(); ++i) {
        if (i == t) continue;
        others.emplace_back(users_[i], at(t, i));
    }
    auto better = [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;  // tie-break: ascending user id
    };
    if (n < others.size()) {
        std::partial_sort(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(n),
                          others.end(), better);
        others.resize(n);
    } else {
        std::sort(others.begin(), others.end(), better);
    }
    return others;
}

SimilarityMatrix build_matrix(const Corpus& corpus, const SimilarityWeights& w,
                              std::size_t threads) {
    std::size_t n = corpus.users.size();
    if (n < 2) throw ParamError("corpus too small: need at least 2 users to build a matrix");

    std::vector<std::string> users;
    users.reserve(n);
    for (const auto& [uid, _] : corpus.users) users.push_back(uid);

    Interner interner;
    std::vector<InternedProfile> profiles;
    profiles.reserve(n);
    for (const auto& uid : users) {
        const auto& p = corpus.users.at(uid);
        profiles.push_back({interner.intern(p.keyword_set),
                            interner.intern(p.coauthor_set),
                            interner.intern(p.citation_set),
                            interner.intern(p.reference_set)});
    }

    std::vector<double> scores(n * (n - 1) / 2);
    auto compute_rows = [&](std::size_t row_begin, std::size_t row_end) {
        for (std::size_t i = row_begin; i < row_end; ++i) {
            std::size_t offset = i * n - i * (i + 1) / 2;
            const auto& pi = profiles[i];
            for (std::size_t j = i + 1; j < n; ++j) {
                const auto& pj = profiles[j];
                scores[offset + (j - i - 1)] =
                    combine(jaccard_sorted(pi.keywords, pj.keywords),
                            jaccard_sorted(pi.references, pj.references),
                            jaccard_sorted(pi.coauthors, pj.coauthors),
                            jaccard_sorted(pi.citations, pj.citations), w);
            }
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, n - 1);
    if (threads <= 1) {
        compute_rows(0, n - 1);
    } else {
        // contiguous row blocks; each worker writes disjoint entries
        std::vector<std::thread> workers;
        workers.reserve(threads);
        std::size_t rows = n - 1;
        for (std::size_t t = 0; t < threads; ++t) {
            std::size_t begin = rows * t / threads;
            std::size_t end = rows * (t + 1) / threads;
            workers.emplace_back(compute_rows, begin, end);
        }
        for (auto& worker : workers) worker.join();
    }

    return SimilarityMatrix(std::move(users), std::move(scores));
}

void export_matrix_csv(const Corpus& corpus, const SimilarityWeights& w,
                       std::ostream& out) {
    out << "user_a,user_b,sim_key,sim_ref,sim_coauth,sim_cit,sim_final\n";
    out.precision(12);
    for (auto iu = corpus.users.begin(); iu != corpus.users.end(); ++iu) {
        for (auto iv = std::next(iu); iv != corpus.users.end(); ++iv) {
            auto b = ensemble_sim(iu->second, iv->second, w);
            out << iu->first << ',' << iv->first << ',' << b.sim_key << ','
                << b.sim_ref << ',' << b.sim_coauth << ',' << b.sim_cit << ','
                << b.sim_final << '\n';
        }
    }
}

}  // namespace paperrec
