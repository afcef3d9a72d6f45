#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "poolrank/metric.hpp"
#include "poolrank/rerank.hpp"
#include "poolrank/types.hpp"

namespace poolrank {

struct UpdateParams {
    /// Acceptance threshold on the mean distance from a new image to the
    /// current members. No default: the useful range depends on the
    /// embedding scale.
    double gamma = 0.0;
    /// Frame sampling stride during pool initialization.
    std::size_t beta = 1;
    std::size_t capacity_M = 1;
};

inline void validate(const UpdateParams& p) {
    if (!(p.gamma > 0.0) || !std::isfinite(p.gamma)) {
        throw std::invalid_argument("UpdateParams: gamma must be positive and finite");
    }
    if (p.beta < 1) {
        throw std::invalid_argument("UpdateParams: beta must be >= 1");
    }
    if (p.capacity_M < 1) {
        throw std::invalid_argument("UpdateParams: capacity_M must be >= 1");
    }
}

/// A confirmed (or not) observation of the target person.
struct CameraEvent {
    GalleryEntry entry;
    bool is_confirmed = false;

    friend bool operator==(const CameraEvent&, const CameraEvent&) = default;
};

enum class UpdateAction {
    kRejectedByGate,
    kReplacedAssist,
    kReplacedMain,
    kIgnoredUnconfirmed,
};

inline const char* to_string(UpdateAction action) {
    switch (action) {
        case UpdateAction::kRejectedByGate: return "rejected_by_gate";
        case UpdateAction::kReplacedAssist: return "replaced_assist";
        case UpdateAction::kReplacedMain: return "replaced_main";
        case UpdateAction::kIgnoredUnconfirmed: return "ignored_unconfirmed";
    }
    return "?";
}

/// Audit record for one applied event. evicted_image_id is empty when the
/// pool merely grew (below capacity) or nothing changed.
struct UpdateTrace {
    UpdateAction action = UpdateAction::kRejectedByGate;
    std::optional<std::string> evicted_image_id;
    double criterion_value = 0.0;
};

struct GateResult {
    bool passes = false;
    double mean_distance = 0.0;
};

/// Initial pool from one camera's tracked frame sequence: the first entry is
/// the main image; further members are taken every beta frames until the pool
/// is full or the track runs out.
inline ImagePool init_pool(std::span<const GalleryEntry> track, const UpdateParams& params) {
    validate(params);
    if (track.empty()) {
        throw std::invalid_argument("init_pool: track must be non-empty");
    }
    const std::uint32_t camera = track.front().camera_id;
    for (const GalleryEntry& e : track) {
        if (e.camera_id != camera) {
            throw std::invalid_argument("init_pool: track entries must share one camera");
        }
    }
    std::vector<PoolMember> members;
    for (std::size_t offset = 0; offset < track.size() && members.size() < params.capacity_M;
         offset += params.beta) {
        members.push_back({track[offset], 0.0,
                           members.empty() ? MemberRole::kMain : MemberRole::kAssist});
    }
    const std::vector<double> weights = pool_weights(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        members[i].weight = weights[i];
    }
    return ImagePool(std::move(members), params.capacity_M, camera);
}

/// The update gate: mean distance from the new image to every current member,
/// accepted only when strictly above gamma.
inline GateResult update_criterion(const GalleryEntry& candidate, const ImagePool& pool,
                                   const UpdateParams& params, const DistanceParams& dparams) {
    validate(params);
    double sum = 0.0;
    for (const PoolMember& m : pool.members()) {
        sum += pair_distance(candidate.feature, m.entry.feature, dparams);
    }
    const double mean = sum / static_cast<double>(pool.size());
    return {mean > params.gamma, mean};
}

/// Index of the member farthest from the new image; ties pick the lowest
/// index.
inline std::size_t farthest_member(const GalleryEntry& candidate, const ImagePool& pool,
                                   const DistanceParams& dparams) {
    std::size_t best = 0;
    double best_distance = -1.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const double d =
            pair_distance(candidate.feature, pool.members()[i].entry.feature, dparams);
        if (d > best_distance) {
            best_distance = d;
            best = i;
        }
    }
    return best;
}

namespace detail {

/// Reassigns canonical weights by role after membership changes that have no
/// weight-copy rule (appends and the demote-and-evict collision).
inline void reassign_weights(std::vector<PoolMember>& members) {
    bool has_second_main = false;
    for (const PoolMember& m : members) {
        if (m.role == MemberRole::kSecondMain) has_second_main = true;
    }
    const std::vector<double> weights = pool_weights(members.size(), has_second_main);
    // pool_weights orders main, second main, assists; map by role.
    std::size_t next_assist = has_second_main ? 2 : 1;
    for (PoolMember& m : members) {
        if (m.role == MemberRole::kMain) {
            m.weight = weights[0];
        } else if (m.role == MemberRole::kSecondMain) {
            m.weight = weights[1];
        } else {
            m.weight = weights[next_assist++];
        }
    }
}

}  // namespace detail

/// Same-camera branch: a gated new image replaces the assist member farthest
/// from it, inheriting that member's weight. The main image is never evicted
/// by this branch. Below capacity the image is appended instead and weights
/// are reassigned.
inline std::pair<ImagePool, UpdateTrace> update_same_camera(const ImagePool& pool,
                                                            const CameraEvent& event,
                                                            const UpdateParams& params,
                                                            const DistanceParams& dparams) {
    validate(params);
    if (!event.is_confirmed) {
        return {pool, {UpdateAction::kIgnoredUnconfirmed, std::nullopt, 0.0}};
    }
    const std::uint32_t reference_camera =
        pool.last_update_camera().value_or(pool.main().entry.camera_id);
    if (event.entry.camera_id != reference_camera) {
        throw std::invalid_argument("update_same_camera: event camera differs from the pool's");
    }
    const GateResult gate = update_criterion(event.entry, pool, params, dparams);
    if (!gate.passes) {
        return {pool, {UpdateAction::kRejectedByGate, std::nullopt, gate.mean_distance}};
    }

    std::vector<PoolMember> members = pool.members();
    if (members.size() < pool.capacity()) {
        members.push_back({event.entry, 0.0, MemberRole::kAssist});
        detail::reassign_weights(members);
        ImagePool updated(std::move(members), pool.capacity(), event.entry.camera_id);
        return {std::move(updated),
                {UpdateAction::kReplacedAssist, std::nullopt, gate.mean_distance}};
    }

    // Farthest non-main member, computed before insertion.
    std::optional<std::size_t> victim;
    double victim_distance = -1.0;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i == pool.main_index()) continue;
        const double d =
            pair_distance(event.entry.feature, members[i].entry.feature, dparams);
        if (d > victim_distance) {
            victim_distance = d;
            victim = i;
        }
    }
    if (!victim) {
        // Capacity-1 pool: the only member is main, which this branch may not
        // touch, so the event cannot be applied.
        return {pool, {UpdateAction::kRejectedByGate, std::nullopt, gate.mean_distance}};
    }
    std::string evicted_id = members[*victim].entry.image_id;
    const double inherited_weight = members[*victim].weight;
    members[*victim] = {event.entry, inherited_weight, MemberRole::kAssist};
    ImagePool updated(std::move(members), pool.capacity(), event.entry.camera_id);
    return {std::move(updated),
            {UpdateAction::kReplacedAssist, std::move(evicted_id), gate.mean_distance}};
}

/// Cross-camera branch: a gated new image takes over as main with the main
/// weight; the previous main is demoted onto the weight of the member
/// farthest from the new image, and that member is evicted. When the old main
/// itself is the farthest member it is removed outright and weights are
/// reassigned.
inline std::pair<ImagePool, UpdateTrace> update_cross_camera(const ImagePool& pool,
                                                             const CameraEvent& event,
                                                             const UpdateParams& params,
                                                             const DistanceParams& dparams) {
    validate(params);
    if (!event.is_confirmed) {
        return {pool, {UpdateAction::kIgnoredUnconfirmed, std::nullopt, 0.0}};
    }
    const std::uint32_t reference_camera =
        pool.last_update_camera().value_or(pool.main().entry.camera_id);
    if (event.entry.camera_id == reference_camera) {
        throw std::invalid_argument("update_cross_camera: event camera matches the pool's");
    }
    const GateResult gate = update_criterion(event.entry, pool, params, dparams);
    if (!gate.passes) {
        return {pool, {UpdateAction::kRejectedByGate, std::nullopt, gate.mean_distance}};
    }

    const std::vector<PoolMember>& old_members = pool.members();
    const std::size_t old_main = pool.main_index();

    std::vector<PoolMember> members;
    members.reserve(pool.size() + 1);

    if (pool.size() < pool.capacity()) {
        members.push_back({event.entry, 0.0, MemberRole::kMain});
        for (std::size_t i = 0; i < old_members.size(); ++i) {
            PoolMember m = old_members[i];
            if (i == old_main) m.role = MemberRole::kAssist;
            members.push_back(std::move(m));
        }
        detail::reassign_weights(members);
        ImagePool updated(std::move(members), pool.capacity(), event.entry.camera_id);
        return {std::move(updated),
                {UpdateAction::kReplacedMain, std::nullopt, gate.mean_distance}};
    }

    const std::size_t victim = farthest_member(event.entry, pool, dparams);
    std::string evicted_id = old_members[victim].entry.image_id;

    if (victim == old_main) {
        // Demoted and evicted at once: the old main simply leaves the pool.
        members.push_back({event.entry, 0.0, MemberRole::kMain});
        for (std::size_t i = 0; i < old_members.size(); ++i) {
            if (i == old_main) continue;
            members.push_back(old_members[i]);
        }
        detail::reassign_weights(members);
    } else {
        members.push_back({event.entry, old_members[old_main].weight, MemberRole::kMain});
        for (std::size_t i = 0; i < old_members.size(); ++i) {
            if (i == victim) continue;
            PoolMember m = old_members[i];
            if (i == old_main) {
                m.role = MemberRole::kAssist;
                m.weight = old_members[victim].weight;
            }
            members.push_back(std::move(m));
        }
    }
    ImagePool updated(std::move(members), pool.capacity(), event.entry.camera_id);
    return {std::move(updated),
            {UpdateAction::kReplacedMain, std::move(evicted_id), gate.mean_distance}};
}

/// Routes an event to the same-camera or cross-camera branch by comparing its
/// camera against the camera of the most recent accepted update (the main
/// image's camera for a never-updated pool).
inline std::pair<ImagePool, UpdateTrace> apply_event(const ImagePool& pool,
                                                     const CameraEvent& event,
                                                     const UpdateParams& params,
                                                     const DistanceParams& dparams) {
    if (!event.is_confirmed) {
        return {pool, {UpdateAction::kIgnoredUnconfirmed, std::nullopt, 0.0}};
    }
    const std::uint32_t reference_camera =
        pool.last_update_camera().value_or(pool.main().entry.camera_id);
    if (event.entry.camera_id == reference_camera) {
        return update_same_camera(pool, event, params, dparams);
    }
    return update_cross_camera(pool, event, params, dparams);
}

}  // namespace poolrank
