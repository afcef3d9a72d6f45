#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "poolrank/metric.hpp"
#include "poolrank/types.hpp"

namespace poolrank {

struct RerankParams {
    /// Depth of the main image's candidate window.
    std::size_t k1 = 70;
    /// Depth of each non-main member's candidate list.
    std::size_t k2 = 2;
    /// Scale factor for deriving per-member candidate counts from weights.
    /// Only consulted when derive_counts_from_weights is set.
    double eta_count = 0.0;
    /// Derive each member's list depth from its weight instead of using the
    /// direct k1/k2 values.
    bool derive_counts_from_weights = false;
    /// Honor a second main member: co-membership in its list promotes an
    /// entry to the top of the output.
    bool use_second_main = false;
    DistanceParams distance;
};

inline void validate(const RerankParams& p) {
    if (p.k1 < 1 || p.k2 < 1) {
        throw std::invalid_argument("RerankParams: k1 and k2 must be >= 1");
    }
    if (p.k2 > p.k1) {
        throw std::invalid_argument("RerankParams: k2 must not exceed k1");
    }
    if (p.derive_counts_from_weights && (!(p.eta_count > 0.0) || !std::isfinite(p.eta_count))) {
        throw std::invalid_argument("RerankParams: eta_count must be positive and finite");
    }
    validate(p.distance);
}

/// Truncated ranking list of one pool member.
struct TopKList {
    MemberRole probe_role = MemberRole::kAssist;
    std::vector<std::size_t> entries;

    std::size_t k() const { return entries.size(); }
};

/// Gallery sorted by distance to the probe, ascending; ties keep ascending
/// gallery index.
inline RankedList baseline_ranking(const FeatureVector& probe,
                                   std::span<const GalleryEntry> gallery,
                                   const DistanceParams& params,
                                   const DistanceFn& fn = euclidean_fn()) {
    validate(params);
    if (gallery.empty()) {
        throw std::invalid_argument("baseline_ranking: gallery must be non-empty");
    }
    std::vector<double> scores(gallery.size(), 0.0);
    const FeatureVector measured = params.normalize ? unit_normalized(probe) : probe;
    for (std::size_t j = 0; j < gallery.size(); ++j) {
        const FeatureVector& target =
            params.normalize ? unit_normalized(gallery[j].feature) : gallery[j].feature;
        scores[j] = fn(measured, target);
    }
    return rank_ascending(scores, "baseline");
}

/// First min(k, |list|) indices of a ranked list, order preserved.
inline TopKList top_k(const RankedList& list, std::size_t k,
                      MemberRole probe_role = MemberRole::kAssist) {
    if (k < 1) {
        throw std::invalid_argument("top_k: k must be >= 1");
    }
    TopKList out;
    out.probe_role = probe_role;
    const std::size_t n = std::min(k, list.items.size());
    out.entries.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.entries.push_back(list.items[i].gallery_index);
    }
    return out;
}

/// Member weights in member order (main first, then second main if present,
/// then assists): main 0.5, second main 0.25, assists sharing the remainder
/// equally. M = 1 degenerates to a single weight of 1.
inline std::vector<double> pool_weights(std::size_t member_count, bool has_second_main = false) {
    if (member_count < 1) {
        throw std::invalid_argument("pool_weights: member count must be >= 1");
    }
    if (member_count == 1) {
        if (has_second_main) {
            throw std::invalid_argument("pool_weights: second main requires at least 2 members");
        }
        return {1.0};
    }
    std::vector<double> weights;
    weights.reserve(member_count);
    weights.push_back(0.5);
    if (has_second_main) {
        if (member_count == 2) {
            weights.push_back(0.5);
            return weights;
        }
        weights.push_back(0.25);
        const double assist_weight = 0.25 / static_cast<double>(member_count - 2);
        weights.insert(weights.end(), member_count - 2, assist_weight);
        return weights;
    }
    const double assist_weight = 0.5 / static_cast<double>(member_count - 1);
    weights.insert(weights.end(), member_count - 1, assist_weight);
    return weights;
}

/// Candidate list depth derived from a member's weight share, never below 1.
inline std::size_t candidate_count(double eta_count, double weight, double weight_sum) {
    if (!(eta_count > 0.0) || !std::isfinite(eta_count)) {
        throw std::invalid_argument("candidate_count: eta_count must be positive and finite");
    }
    if (!(weight > 0.0) || !(weight <= weight_sum)) {
        throw std::invalid_argument("candidate_count: need 0 < weight <= weight_sum");
    }
    const double raw = std::ceil(eta_count * weight / weight_sum);
    return std::max<std::size_t>(1, static_cast<std::size_t>(raw));
}

/// Reorders the main candidate window by cross-list membership counts.
///
/// T(g) counts how many assist lists contain g; the second main list never
/// contributes to T. Output order, best first:
///   1. entries shared with the second main list (when present), in main-list
///      order among themselves;
///   2. everything else by T descending, stable with respect to main-list
///      order, so T = 0 entries trail in their original order.
/// Scores in the output carry the T counts. The result is always a
/// permutation of the main list.
inline RankedList joint_rerank(const TopKList& main_list,
                               std::span<const TopKList> assist_lists,
                               const std::optional<TopKList>& second_main_list = std::nullopt) {
    if (main_list.probe_role != MemberRole::kMain) {
        throw std::invalid_argument("joint_rerank: main list must carry the main probe role");
    }
    for (const TopKList& list : assist_lists) {
        if (list.probe_role == MemberRole::kMain) {
            throw std::invalid_argument("joint_rerank: assist lists must not carry the main role");
        }
    }
    if (second_main_list && second_main_list->probe_role != MemberRole::kSecondMain) {
        throw std::invalid_argument(
            "joint_rerank: second main list must carry the second_main role");
    }

    std::unordered_map<std::size_t, std::size_t> counts;
    for (const TopKList& list : assist_lists) {
        for (std::size_t g : list.entries) {
            ++counts[g];
        }
    }

    std::unordered_set<std::size_t> topped;
    if (second_main_list) {
        topped.insert(second_main_list->entries.begin(), second_main_list->entries.end());
    }

    struct Candidate {
        std::size_t gallery_index;
        std::size_t count;
        bool shared_with_second_main;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(main_list.entries.size());
    for (std::size_t g : main_list.entries) {
        const auto it = counts.find(g);
        const std::size_t t = it == counts.end() ? 0 : it->second;
        candidates.push_back({g, t, topped.contains(g)});
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) {
                         if (a.shared_with_second_main != b.shared_with_second_main) {
                             return a.shared_with_second_main;
                         }
                         if (a.shared_with_second_main) return false;  // keep main-list order
                         return a.count > b.count;
                     });

    RankedList out;
    out.source = "rerank";
    out.items.reserve(candidates.size());
    for (const Candidate& c : candidates) {
        out.items.push_back({c.gallery_index, static_cast<double>(c.count)});
    }
    return out;
}

/// Full pipeline: per-member baseline rankings, truncation to the candidate
/// windows, membership-count reordering. Only the main top-k1 window is
/// permuted; the rest of the gallery follows in baseline order (with its
/// baseline distances as scores) so full-list metrics still apply.
inline RankedList rerank_with_pool(std::span<const GalleryEntry> gallery, const ImagePool& pool,
                                   const RerankParams& params,
                                   const DistanceFn& fn = euclidean_fn()) {
    validate(params);
    if (gallery.empty()) {
        throw std::invalid_argument("rerank_with_pool: gallery must be non-empty");
    }
    if (!params.derive_counts_from_weights && params.k1 > gallery.size()) {
        throw std::invalid_argument("rerank_with_pool: k1 must not exceed the gallery size");
    }

    const std::size_t main_idx = pool.main_index();
    const RankedList main_ranking =
        baseline_ranking(pool.main().entry.feature, gallery, params.distance, fn);

    std::size_t main_depth = params.k1;
    if (params.derive_counts_from_weights) {
        main_depth = std::min(candidate_count(params.eta_count, pool.main().weight, 1.0),
                              gallery.size());
    }
    const TopKList main_window = top_k(main_ranking, main_depth, MemberRole::kMain);

    std::vector<TopKList> assist_windows;
    std::optional<TopKList> second_main_window;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (i == main_idx) continue;
        const PoolMember& member = pool.members()[i];
        const RankedList ranking =
            baseline_ranking(member.entry.feature, gallery, params.distance, fn);
        std::size_t depth = params.k2;
        if (params.derive_counts_from_weights) {
            depth = std::min(candidate_count(params.eta_count, member.weight, 1.0),
                             gallery.size());
        }
        if (params.use_second_main && member.role == MemberRole::kSecondMain) {
            second_main_window = top_k(ranking, depth, MemberRole::kSecondMain);
        } else {
            assist_windows.push_back(top_k(ranking, depth, MemberRole::kAssist));
        }
    }

    RankedList reranked = joint_rerank(main_window, assist_windows, second_main_window);
    RankedList out;
    out.source = "rerank:main=" + pool.main().entry.image_id;
    out.items = std::move(reranked.items);
    for (std::size_t i = main_window.entries.size(); i < main_ranking.items.size(); ++i) {
        out.items.push_back(main_ranking.items[i]);
    }
    return out;
}

}  // namespace poolrank
