#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "poolrank/poolrank.hpp"

namespace testutil {

/// Self-contained deterministic RNG so expected values never shift with
/// standard library updates.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        state = poolrank::detail::splitmix64(state);
        return state;
    }

    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform in [0, n).
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

    /// Uniform in [lo, hi], inclusive.
    std::size_t range(std::size_t lo, std::size_t hi) { return lo + index(hi - lo + 1); }

    bool flip() { return (next_u64() & 1) != 0; }
};

inline poolrank::FeatureVector random_feature(Rng& rng, std::size_t dim,
                                              double half_width = 5.0) {
    std::vector<float> v(dim);
    for (float& x : v) x = static_cast<float>(rng.uniform(-half_width, half_width));
    return poolrank::FeatureVector(std::move(v));
}

inline std::vector<poolrank::GalleryEntry> random_gallery(Rng& rng, std::size_t n,
                                                          std::size_t dim,
                                                          const std::string& prefix = "g") {
    std::vector<poolrank::GalleryEntry> entries;
    entries.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        poolrank::GalleryEntry e;
        e.image_id = prefix + std::to_string(i);
        e.camera_id = static_cast<std::uint32_t>(rng.index(4));
        e.frame_index = i;
        e.feature = random_feature(rng, dim);
        entries.push_back(std::move(e));
    }
    return entries;
}

/// Pool with canonical weights: member 0 is main; member 1 is the second
/// main when requested.
inline poolrank::ImagePool random_pool(Rng& rng, std::size_t member_count, std::size_t dim,
                                       bool second_main = false) {
    const std::vector<double> weights = poolrank::pool_weights(member_count, second_main);
    std::vector<poolrank::PoolMember> members;
    members.reserve(member_count);
    for (std::size_t i = 0; i < member_count; ++i) {
        poolrank::GalleryEntry e;
        e.image_id = "p" + std::to_string(i);
        e.camera_id = static_cast<std::uint32_t>(i);
        e.frame_index = 0;
        e.feature = random_feature(rng, dim);
        poolrank::MemberRole role = poolrank::MemberRole::kAssist;
        if (i == 0) role = poolrank::MemberRole::kMain;
        if (i == 1 && second_main) role = poolrank::MemberRole::kSecondMain;
        members.push_back({std::move(e), weights[i], role});
    }
    return poolrank::ImagePool(std::move(members), member_count, 0);
}

/// 1-based feature builder for terse fixtures.
inline poolrank::FeatureVector vec(std::initializer_list<float> values) {
    return poolrank::FeatureVector(std::vector<float>(values));
}

inline poolrank::GalleryEntry entry(std::string id, std::uint32_t camera,
                                    poolrank::FeatureVector feature,
                                    std::uint64_t frame = 0) {
    poolrank::GalleryEntry e;
    e.image_id = std::move(id);
    e.camera_id = camera;
    e.frame_index = frame;
    e.feature = std::move(feature);
    return e;
}

inline std::vector<std::size_t> order_of(const poolrank::RankedList& list) {
    std::vector<std::size_t> order;
    order.reserve(list.items.size());
    for (const poolrank::RankedItem& item : list.items) {
        order.push_back(item.gallery_index);
    }
    return order;
}

}  // namespace testutil
