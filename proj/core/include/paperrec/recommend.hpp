#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "paperrec/corpus.hpp"
#include "paperrec/similarity.hpp"

namespace paperrec {

struct RecommendationParams {
    std::size_t top_n = 10;
    double min_threshold_pct = 30.0;  // in [0,100]
    std::optional<std::size_t> max_recommendations;

    void validate() const;  // throws ParamError
};

struct Recommendation {
    std::string paper_id;
    std::size_t supporter_count = 0;  // neighbors whose reference_set has it
    double majority_pct = 0.0;        // supporter_count * 100 / neighbor count

    bool operator==(const Recommendation&) const = default;
};

enum class CandidateStrategy {
    all_referenced_by_neighbors,
    full_corpus,
    explicit_list,
};

// Candidate papers for a target user, with the target's own authored and
// already-referenced papers excluded. For the neighbor strategy the pool is
// the union of the top-N neighbors' reference sets.
std::vector<std::string> candidate_pool(
    const Corpus& corpus, const SimilarityMatrix& matrix,
    const std::string& target, CandidateStrategy strategy, std::size_t top_n,
    const std::vector<std::string>& explicit_list = {});

// Majority-vote recommendation: counts, per candidate, how many of the
// target's top-N neighbors reference it, converts to a percentage and keeps
// papers at or above the threshold. When fewer than top_n other users exist
// the actual neighbor count is the percentage denominator. Output sorted by
// supporter_count descending, then paper id ascending.
std::vector<Recommendation> recommend(
    const Corpus& corpus, const SimilarityMatrix& matrix,
    const std::string& target, const std::vector<std::string>& candidates,
    const RecommendationParams& params);

void export_recommendations_json(const std::vector<Recommendation>& recs,
                                 std::ostream& out);
void export_recommendations_csv(const std::vector<Recommendation>& recs,
                                std::ostream& out);

}  // namespace paperrec
