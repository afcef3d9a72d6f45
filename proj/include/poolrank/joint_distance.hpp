#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "poolrank/metric.hpp"
#include "poolrank/types.hpp"

namespace poolrank {

struct JointDistanceParams {
    /// Scale factor on the similarity-weighted correction term.
    double eta_scale = 1.0;
    /// Whether the main image participates in the similarity sum alongside
    /// the assist members. Off is a sensitivity switch only.
    bool include_main_in_sum = true;
    DistanceParams distance;
};

inline void validate(const JointDistanceParams& p) {
    if (!(p.eta_scale > 0.0) || !std::isfinite(p.eta_scale)) {
        throw std::invalid_argument("JointDistanceParams: eta_scale must be positive and finite");
    }
    validate(p.distance);
}

/// Joint score of gallery entry j against the whole pool: the main-image
/// distance minus a correction that weights each member's similarity share.
/// When no member is similar at all (similarity sum 0) the score falls back
/// to the plain main-image distance.
inline double joint_distance(std::size_t gallery_index, const DistanceMatrix& dmat,
                             const ImagePool& pool, const JointDistanceParams& params) {
    validate(params);
    if (dmat.rows() != pool.size()) {
        throw std::invalid_argument("joint_distance: distance matrix rows do not match pool size");
    }
    if (gallery_index >= dmat.cols()) {
        throw std::invalid_argument("joint_distance: gallery index out of range");
    }
    const std::size_t main_idx = pool.main_index();
    const double main_distance = dmat.at(main_idx, gallery_index);

    double similarity_sum = 0.0;
    std::vector<double> member_similarity(pool.size(), 0.0);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (!params.include_main_in_sum && i == main_idx) continue;
        member_similarity[i] = similarity(dmat.at(i, gallery_index), params.distance);
        similarity_sum += member_similarity[i];
    }
    if (similarity_sum == 0.0) {
        return main_distance;
    }

    double correction = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (!params.include_main_in_sum && i == main_idx) continue;
        const double share = params.eta_scale * member_similarity[i] / similarity_sum;
        correction += pool.members()[i].weight * share * main_distance;
    }
    return main_distance - correction;
}

/// Ranks the gallery by ascending joint score; ties keep ascending gallery
/// index.
inline RankedList rank_by_joint_distance(std::span<const GalleryEntry> gallery,
                                         const ImagePool& pool,
                                         const JointDistanceParams& params,
                                         const DistanceFn& fn = euclidean_fn()) {
    validate(params);
    if (gallery.empty()) {
        throw std::invalid_argument("rank_by_joint_distance: gallery must be non-empty");
    }
    const DistanceMatrix dmat = pool_gallery_distances(pool, gallery, params.distance, fn);
    std::vector<double> scores(gallery.size(), 0.0);
    for (std::size_t j = 0; j < gallery.size(); ++j) {
        scores[j] = joint_distance(j, dmat, pool, params);
    }
    return rank_ascending(scores, "jointdist:main=" + pool.main().entry.image_id);
}

}  // namespace poolrank
