#include "paperrec/recommend.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include <nlohmann/json.hpp>

#include "paperrec/errors.hpp"

namespace paperrec {

void RecommendationParams::validate() const {
    if (top_n < 1) throw ParamError("top_n must be >= 1");
    if (min_threshold_pct < 0.0 || min_threshold_pct > 100.0)
        throw ParamError("min_threshold_pct must be in [0,100]");
}

namespace {

const UserProfile& profile_of(const Corpus& corpus, const std::string& user_id) {
    auto it = corpus.users.find(user_id);
    if (it == corpus.users.end()) throw ParamError("unknown user id: " + user_id);
    return it->second;
}

// target's own authored papers and already-referenced papers
std::set<std::string> exclusions_for(const UserProfile& target) {
    std::set<std::string> excluded = target.authored_papers;
    excluded.insert(target.reference_set.begin(), target.reference_set.end());
    return excluded;
}

}  // namespace

std::vector<std::string> candidate_pool(
    const Corpus& corpus, const SimilarityMatrix& matrix,
    const std::string& target, CandidateStrategy strategy, std::size_t top_n,
    const std::vector<std::string>& explicit_list) {
    const auto& profile = profile_of(corpus, target);
    auto excluded = exclusions_for(profile);

    std::set<std::string> pool;
    switch (strategy) {
        case CandidateStrategy::all_referenced_by_neighbors:
            for (const auto& [neighbor_id, _] : matrix.top_n_neighbors(target, top_n)) {
                auto it = corpus.users.find(neighbor_id);
                if (it == corpus.users.end()) continue;
                for (const auto& pid : it->second.reference_set)
                    if (!excluded.contains(pid)) pool.insert(pid);
            }
            break;
        case CandidateStrategy::full_corpus:
            for (const auto& [pid, _] : corpus.papers)
                if (!excluded.contains(pid)) pool.insert(pid);
            break;
        case CandidateStrategy::explicit_list:
            for (const auto& pid : explicit_list)
                if (!excluded.contains(pid)) pool.insert(pid);
            break;
    }
    return {pool.begin(), pool.end()};
}

std::vector<Recommendation> recommend(
    const Corpus& corpus, const SimilarityMatrix& matrix,
    const std::string& target, const std::vector<std::string>& candidates,
    const RecommendationParams& params) {
    params.validate();
    const auto& profile = profile_of(corpus, target);
    auto excluded = exclusions_for(profile);

    auto neighbors = matrix.top_n_neighbors(target, params.top_n);
    // Fewer users than top_n: the actual neighbor count is the denominator,
    // otherwise the majority percentage could never be reached.
    double denom = static_cast<double>(neighbors.size());

    std::vector<const std::set<std::string>*> neighbor_refs;
    neighbor_refs.reserve(neighbors.size());
    for (const auto& [neighbor_id, _] : neighbors) {
        auto it = corpus.users.find(neighbor_id);
        if (it != corpus.users.end()) neighbor_refs.push_back(&it->second.reference_set);
    }

    std::set<std::string> seen;
    std::vector<Recommendation> out;
    for (const auto& pid : candidates) {
        if (excluded.contains(pid)) continue;
        if (!seen.insert(pid).second) continue;
        std::size_t count = 0;
        for (const auto* refs : neighbor_refs)
            if (refs->contains(pid)) ++count;
        double majority = denom > 0.0 ? static_cast<double>(count) * 100.0 / denom : 0.0;
        if (majority >= params.min_threshold_pct)
            out.push_back({pid, count, majority});
    }

    std::sort(out.begin(), out.end(), [](const Recommendation& a, const Recommendation& b) {
        if (a.supporter_count != b.supporter_count)
            return a.supporter_count > b.supporter_count;
        return a.paper_id < b.paper_id;
    });
    if (params.max_recommendations && out.size() > *params.max_recommendations)
        out.resize(*params.max_recommendations);
    return out;
}

void export_recommendations_json(const std::vector<Recommendation>& recs,
                                 std::ostream& out) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& r : recs)
        doc.push_back({{"paper_id", r.paper_id},
                       {"supporter_count", r.supporter_count},
                       {"majority_pct", r.majority_pct}});
    out << doc.dump(2) << '\n';
}

void export_recommendations_csv(const std::vector<Recommendation>& recs,
                                std::ostream& out) {
    out << "paper_id,supporter_count,majority_pct\n";
    out.precision(12);
    for (const auto& r : recs)
        out << r.paper_id << ',' << r.supporter_count << ',' << r.majority_pct << '\n';
}

}  // namespace paperrec
