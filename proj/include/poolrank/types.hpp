#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace poolrank {

/// Fixed-dimension embedding of one person image. Coordinates are stored as
/// 32-bit floats (the width feature extractors emit); all arithmetic on them
/// is carried out in double precision.
class FeatureVector {
public:
    FeatureVector() = default;

    explicit FeatureVector(std::vector<float> values) : values_(std::move(values)) {
        if (values_.empty()) {
            throw std::invalid_argument("FeatureVector: dimension must be >= 1");
        }
    }

    std::size_t dim() const { return values_.size(); }
    std::span<const float> values() const { return values_; }
    float operator[](std::size_t i) const { return values_[i]; }

    bool is_finite() const {
        for (float v : values_) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

private:
    std::vector<float> values_;
};

/// One gallery image: embedding plus identity metadata. person_label is only
/// present in evaluation data; live ranking runs without it.
struct GalleryEntry {
    std::string image_id;
    std::uint32_t camera_id = 0;
    std::uint64_t frame_index = 0;
    std::optional<std::string> person_label;
    FeatureVector feature;

    friend bool operator==(const GalleryEntry&, const GalleryEntry&) = default;
};

enum class MemberRole { kMain, kSecondMain, kAssist };

inline const char* to_string(MemberRole role) {
    switch (role) {
        case MemberRole::kMain: return "main";
        case MemberRole::kSecondMain: return "second_main";
        case MemberRole::kAssist: return "assist";
    }
    return "?";
}

struct PoolMember {
    GalleryEntry entry;
    double weight = 0.0;
    MemberRole role = MemberRole::kAssist;
};

inline constexpr double kWeightSumTolerance = 1e-9;

/// Capacity-bounded ordered set of pool members for one target person.
/// Immutable after construction: exactly one main member, at most one second
/// main, member weights summing to 1, and all features sharing one dimension.
/// Updates are modeled as producing new pools.
class ImagePool {
public:
    ImagePool(std::vector<PoolMember> members, std::size_t capacity,
              std::optional<std::uint32_t> last_update_camera = std::nullopt)
        : members_(std::move(members)),
          capacity_(capacity),
          last_update_camera_(last_update_camera) {
        if (capacity_ < 1) {
            throw std::invalid_argument("ImagePool: capacity must be >= 1");
        }
        if (members_.empty() || members_.size() > capacity_) {
            throw std::invalid_argument("ImagePool: member count must be in [1, capacity]");
        }
        std::size_t mains = 0;
        std::size_t second_mains = 0;
        double weight_sum = 0.0;
        const std::size_t dim = members_.front().entry.feature.dim();
        for (std::size_t i = 0; i < members_.size(); ++i) {
            const PoolMember& m = members_[i];
            if (m.role == MemberRole::kMain) {
                ++mains;
                main_index_ = i;
            } else if (m.role == MemberRole::kSecondMain) {
                ++second_mains;
                second_main_index_ = i;
            }
            if (!(m.weight > 0.0) || m.weight > 1.0 || !std::isfinite(m.weight)) {
                throw std::invalid_argument("ImagePool: member weight must be in (0, 1]");
            }
            if (m.entry.feature.dim() != dim) {
                throw std::invalid_argument("ImagePool: member feature dimensions disagree");
            }
            weight_sum += m.weight;
        }
        if (mains != 1) {
            throw std::invalid_argument("ImagePool: exactly one main member required");
        }
        if (second_mains > 1) {
            throw std::invalid_argument("ImagePool: at most one second main member allowed");
        }
        if (std::fabs(weight_sum - 1.0) > kWeightSumTolerance) {
            throw std::invalid_argument("ImagePool: member weights must sum to 1");
        }
    }

    const std::vector<PoolMember>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    std::size_t capacity() const { return capacity_; }
    std::size_t dim() const { return members_.front().entry.feature.dim(); }
    std::optional<std::uint32_t> last_update_camera() const { return last_update_camera_; }

    std::size_t main_index() const { return main_index_; }
    const PoolMember& main() const { return members_[main_index_]; }
    std::optional<std::size_t> second_main_index() const { return second_main_index_; }

private:
    std::vector<PoolMember> members_;
    std::size_t capacity_ = 0;
    std::optional<std::uint32_t> last_update_camera_;
    std::size_t main_index_ = 0;
    std::optional<std::size_t> second_main_index_;
};

struct RankedItem {
    std::size_t gallery_index = 0;
    double score = 0.0;

    friend bool operator==(const RankedItem&, const RankedItem&) = default;
};

/// Gallery entries ordered by a score, best first. `source` describes the
/// probe that produced the list. Builders guarantee distinct indices.
struct RankedList {
    std::vector<RankedItem> items;
    std::string source;
};

/// Orders gallery indices by ascending score; equal scores keep ascending
/// index order.
inline RankedList rank_ascending(std::span<const double> scores, std::string source) {
    RankedList list;
    list.source = std::move(source);
    list.items.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        list.items.push_back({i, scores[i]});
    }
    std::stable_sort(list.items.begin(), list.items.end(),
                     [](const RankedItem& a, const RankedItem& b) {
                         if (a.score != b.score) return a.score < b.score;
                         return a.gallery_index < b.gallery_index;
                     });
    return list;
}

struct Violation {
    enum class Kind { kDimensionMismatch, kDuplicateImageId, kNonFinite };

    Kind kind;
    std::size_t record_index = 0;
    std::string message;
};

inline const char* to_string(Violation::Kind kind) {
    switch (kind) {
        case Violation::Kind::kDimensionMismatch: return "dimension_mismatch";
        case Violation::Kind::kDuplicateImageId: return "duplicate_image_id";
        case Violation::Kind::kNonFinite: return "non_finite";
    }
    return "?";
}

/// Report-only dataset check: dimension agreement (against the first entry),
/// unique image ids, finite coordinates. Empty result means valid.
inline std::vector<Violation> validate_dataset(std::span<const GalleryEntry> entries) {
    std::vector<Violation> violations;
    if (entries.empty()) return violations;
    const std::size_t dim = entries.front().feature.dim();
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const GalleryEntry& e = entries[i];
        if (e.feature.dim() != dim) {
            violations.push_back({Violation::Kind::kDimensionMismatch, i,
                                  "entry '" + e.image_id + "' has dim " +
                                      std::to_string(e.feature.dim()) + ", expected " +
                                      std::to_string(dim)});
        }
        if (!seen.insert(e.image_id).second) {
            violations.push_back({Violation::Kind::kDuplicateImageId, i,
                                  "duplicate image_id '" + e.image_id + "'"});
        }
        if (!e.feature.is_finite()) {
            violations.push_back({Violation::Kind::kNonFinite, i,
                                  "entry '" + e.image_id + "' has non-finite coordinates"});
        }
    }
    return violations;
}

}  // namespace poolrank
