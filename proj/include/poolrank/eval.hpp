#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "poolrank/metric.hpp"
#include "poolrank/pool_update.hpp"
#include "poolrank/rerank.hpp"
#include "poolrank/synthetic.hpp"
#include "poolrank/types.hpp"

namespace poolrank {

/// One query's ranking reduced to labels. Unlabeled gallery entries appear as
/// empty strings, which can never match a truth label.
struct QueryResult {
    std::string query_id;
    std::vector<std::string> ranked_labels;
    std::string truth_label;
    std::size_t num_relevant = 0;
};

/// Projects a ranked list onto labels for metric computation. With
/// cross_camera_only set, gallery entries that match the truth label from the
/// query's own camera are dropped from the list entirely and do not count as
/// relevant (the usual cross-camera matching protocol).
inline QueryResult make_query_result(std::string query_id, std::string truth_label,
                                     const RankedList& ranking,
                                     std::span<const GalleryEntry> gallery,
                                     std::uint32_t query_camera, bool cross_camera_only) {
    QueryResult result;
    result.query_id = std::move(query_id);
    result.truth_label = std::move(truth_label);
    result.ranked_labels.reserve(ranking.items.size());
    for (const RankedItem& item : ranking.items) {
        const GalleryEntry& entry = gallery[item.gallery_index];
        const std::string label = entry.person_label.value_or("");
        const bool is_match = !label.empty() && label == result.truth_label;
        if (cross_camera_only && is_match && entry.camera_id == query_camera) {
            continue;
        }
        if (is_match) ++result.num_relevant;
        result.ranked_labels.push_back(label);
    }
    return result;
}

struct CmcCurve {
    /// accuracy[r - 1] = fraction of evaluated queries whose first correct
    /// match appears at rank <= r.
    std::vector<double> accuracy;
    std::size_t queries_evaluated = 0;
    std::size_t queries_excluded = 0;
};

inline CmcCurve cmc_curve(std::span<const QueryResult> results, std::size_t max_rank) {
    if (max_rank < 1) {
        throw std::invalid_argument("cmc_curve: max_rank must be >= 1");
    }
    CmcCurve curve;
    curve.accuracy.assign(max_rank, 0.0);
    std::vector<std::size_t> hits(max_rank, 0);
    for (const QueryResult& q : results) {
        if (q.num_relevant == 0) {
            ++curve.queries_excluded;
            continue;
        }
        ++curve.queries_evaluated;
        std::size_t first_correct = 0;  // 1-based; 0 = not found
        for (std::size_t p = 0; p < q.ranked_labels.size(); ++p) {
            if (q.ranked_labels[p] == q.truth_label) {
                first_correct = p + 1;
                break;
            }
        }
        if (first_correct == 0) continue;
        for (std::size_t r = first_correct; r <= max_rank; ++r) {
            ++hits[r - 1];
        }
    }
    if (curve.queries_evaluated > 0) {
        for (std::size_t r = 0; r < max_rank; ++r) {
            curve.accuracy[r] =
                static_cast<double>(hits[r]) / static_cast<double>(curve.queries_evaluated);
        }
    }
    return curve;
}

struct MeanAveragePrecision {
    double value = 0.0;
    std::vector<double> per_query_ap;
    std::size_t queries_evaluated = 0;
    std::size_t queries_excluded = 0;
};

/// Interpolation-free average precision: the mean over a query's relevant
/// positions p_1 < ... < p_R of i / p_i, averaged across queries.
inline MeanAveragePrecision mean_average_precision(std::span<const QueryResult> results) {
    MeanAveragePrecision out;
    double ap_sum = 0.0;
    for (const QueryResult& q : results) {
        if (q.num_relevant == 0) {
            ++out.queries_excluded;
            continue;
        }
        ++out.queries_evaluated;
        double precision_sum = 0.0;
        std::size_t found = 0;
        for (std::size_t p = 0; p < q.ranked_labels.size() && found < q.num_relevant; ++p) {
            if (q.ranked_labels[p] == q.truth_label) {
                ++found;
                precision_sum +=
                    static_cast<double>(found) / static_cast<double>(p + 1);
            }
        }
        const double ap = precision_sum / static_cast<double>(q.num_relevant);
        out.per_query_ap.push_back(ap);
        ap_sum += ap;
    }
    if (out.queries_evaluated > 0) {
        out.value = ap_sum / static_cast<double>(out.queries_evaluated);
    }
    return out;
}

struct EvalReport {
    std::vector<double> cmc;  // cmc[r - 1] = accuracy at rank r
    double map_score = 0.0;
    std::vector<double> per_query_ap;
    std::size_t queries_evaluated = 0;
    std::size_t queries_excluded = 0;
    double wall_time_seconds = 0.0;
    std::string config_echo;

    double rank1() const { return cmc.empty() ? 0.0 : cmc.front(); }
    double cmc_at(std::size_t rank) const {
        if (rank < 1 || rank > cmc.size()) return cmc.empty() ? 0.0 : cmc.back();
        return cmc[rank - 1];
    }
};

inline EvalReport make_report(std::span<const QueryResult> results, std::size_t max_rank,
                              std::string config_echo, double wall_time_seconds) {
    const CmcCurve curve = cmc_curve(results, max_rank);
    const MeanAveragePrecision map = mean_average_precision(results);
    EvalReport report;
    report.cmc = curve.accuracy;
    report.map_score = map.value;
    report.per_query_ap = map.per_query_ap;
    report.queries_evaluated = curve.queries_evaluated;
    report.queries_excluded = curve.queries_excluded;
    report.wall_time_seconds = wall_time_seconds;
    report.config_echo = std::move(config_echo);
    return report;
}

/// How assist members are chosen for each identity's pool.
enum class AblationMode {
    kBaseline,          // main image only
    kSameCameraRandom,  // (a) random frames from the main camera
    kSameCameraRules,   // (b) gated same-camera updates
    kMixedRandom,       // (c) random frames from any camera
    kCrossCameraRules,  // (d) cross-camera updates
};

inline const char* to_string(AblationMode mode) {
    switch (mode) {
        case AblationMode::kBaseline: return "baseline";
        case AblationMode::kSameCameraRandom: return "same_camera_random";
        case AblationMode::kSameCameraRules: return "same_camera_rules";
        case AblationMode::kMixedRandom: return "mixed_random";
        case AblationMode::kCrossCameraRules: return "cross_camera_rules";
    }
    return "?";
}

struct ExperimentParams {
    std::size_t capacity_M = 3;
    RerankParams rerank;
    /// Update gate threshold; consulted by the rules-based modes.
    double gamma = 1.0;
    std::size_t beta = 1;
    /// Drop same-camera true matches from relevance (the standard protocol).
    bool cross_camera_eval = true;
    std::size_t max_rank = 20;
    /// Seed for the random member-selection modes.
    std::uint64_t selection_seed = 0;
};

namespace detail {

class IndexPicker {
public:
    explicit IndexPicker(std::uint64_t seed) : state_(seed) {}

    /// First `count` elements of a deterministic partial shuffle of 0..n-1.
    std::vector<std::size_t> pick(std::size_t n, std::size_t count) {
        std::vector<std::size_t> indices(n);
        for (std::size_t i = 0; i < n; ++i) indices[i] = i;
        count = std::min(count, n);
        for (std::size_t j = 0; j < count; ++j) {
            state_ = splitmix64(state_);
            const std::size_t r = j + static_cast<std::size_t>(state_ % (n - j));
            std::swap(indices[j], indices[r]);
        }
        indices.resize(count);
        return indices;
    }

private:
    std::uint64_t state_;
};

inline ImagePool main_only_pool(const GalleryEntry& main, std::size_t capacity) {
    std::vector<PoolMember> members{{main, 1.0, MemberRole::kMain}};
    return ImagePool(std::move(members), capacity, main.camera_id);
}

inline ImagePool pool_from_members(const GalleryEntry& main,
                                   std::vector<GalleryEntry> assists) {
    std::vector<PoolMember> members;
    members.reserve(1 + assists.size());
    members.push_back({main, 0.0, MemberRole::kMain});
    for (GalleryEntry& e : assists) {
        members.push_back({std::move(e), 0.0, MemberRole::kAssist});
    }
    const std::vector<double> weights = pool_weights(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) members[i].weight = weights[i];
    return ImagePool(std::move(members), members.size(), main.camera_id);
}

/// Builds one identity's pool under the given selection mode.
inline ImagePool build_ablation_pool(AblationMode mode,
                                     const std::vector<std::vector<GalleryEntry>>& identity_tracks,
                                     const ExperimentParams& params, std::uint64_t pick_seed) {
    const std::vector<GalleryEntry>& home_track = identity_tracks.front();
    const GalleryEntry& main = home_track.front();
    const std::size_t capacity = params.capacity_M;
    const UpdateParams update{params.gamma, params.beta, capacity};
    const DistanceParams& dparams = params.rerank.distance;

    switch (mode) {
        case AblationMode::kBaseline:
            return main_only_pool(main, 1);
        case AblationMode::kSameCameraRandom: {
            IndexPicker picker(pick_seed);
            const std::size_t n = home_track.size() - 1;
            std::vector<GalleryEntry> assists;
            for (std::size_t idx : picker.pick(n, capacity - 1)) {
                assists.push_back(home_track[idx + 1]);
            }
            return pool_from_members(main, std::move(assists));
        }
        case AblationMode::kSameCameraRules: {
            ImagePool pool = main_only_pool(main, capacity);
            for (std::size_t f = 1; f < home_track.size(); ++f) {
                pool = update_same_camera(pool, {home_track[f], true}, update, dparams).first;
            }
            return pool;
        }
        case AblationMode::kMixedRandom: {
            std::vector<GalleryEntry> candidates;
            for (std::size_t c = 0; c < identity_tracks.size(); ++c) {
                for (std::size_t f = 0; f < identity_tracks[c].size(); ++f) {
                    if (c == 0 && f == 0) continue;  // the main frame itself
                    candidates.push_back(identity_tracks[c][f]);
                }
            }
            IndexPicker picker(pick_seed);
            std::vector<GalleryEntry> assists;
            for (std::size_t idx : picker.pick(candidates.size(), capacity - 1)) {
                assists.push_back(candidates[idx]);
            }
            return pool_from_members(main, std::move(assists));
        }
        case AblationMode::kCrossCameraRules: {
            ImagePool pool = main_only_pool(main, capacity);
            const std::size_t frames = home_track.size();
            for (std::size_t f = 0; f < frames; ++f) {
                for (std::size_t c = 1; c < identity_tracks.size(); ++c) {
                    if (f >= identity_tracks[c].size()) continue;
                    pool = apply_event(pool, {identity_tracks[c][f], true}, update, dparams).first;
                }
            }
            return pool;
        }
    }
    throw std::invalid_argument("build_ablation_pool: unknown mode");
}

inline std::string echo_params(AblationMode mode, const ExperimentParams& p) {
    std::ostringstream os;
    os << "mode=" << to_string(mode) << " M=" << p.capacity_M << " k1=" << p.rerank.k1
       << " k2=" << p.rerank.k2 << " gamma=" << p.gamma << " beta=" << p.beta
       << " kappa=" << p.rerank.distance.kappa
       << " normalize=" << (p.rerank.distance.normalize ? 1 : 0)
       << " use_second_main=" << (p.rerank.use_second_main ? 1 : 0)
       << " derive_counts=" << (p.rerank.derive_counts_from_weights ? 1 : 0)
       << " eta_count=" << p.rerank.eta_count
       << " cross_camera_eval=" << (p.cross_camera_eval ? 1 : 0)
       << " max_rank=" << p.max_rank << " selection_seed=" << p.selection_seed;
    return os.str();
}

}  // namespace detail

/// Builds per-identity pools under the named selection mode, ranks the
/// gallery with joint re-ranking, and scores the result. Each ranking is
/// attributed to its pool's main image.
inline EvalReport run_ablation(AblationMode mode, const SynthDataset& data,
                               const ExperimentParams& params) {
    if (data.tracks.empty() || data.gallery.empty()) {
        throw std::invalid_argument("run_ablation: dataset has no tracks or no gallery");
    }
    const bool needs_cross_camera =
        mode == AblationMode::kMixedRandom || mode == AblationMode::kCrossCameraRules;
    if (needs_cross_camera && data.tracks.front().size() < 2) {
        throw std::invalid_argument("run_ablation: mode requires at least 2 cameras");
    }
    validate(params.rerank);

    const auto start = std::chrono::steady_clock::now();
    RerankParams rparams = params.rerank;
    rparams.k1 = std::min(rparams.k1, data.gallery.size());
    rparams.k2 = std::min(rparams.k2, rparams.k1);

    std::vector<QueryResult> results;
    results.reserve(data.tracks.size());
    for (std::size_t i = 0; i < data.tracks.size(); ++i) {
        const ImagePool pool = detail::build_ablation_pool(
            mode, data.tracks[i], params, detail::mix(params.selection_seed, i));
        const RankedList ranking = rerank_with_pool(data.gallery, pool, rparams);
        const GalleryEntry& main = pool.main().entry;
        results.push_back(make_query_result(main.image_id,
                                            main.person_label.value_or(""), ranking,
                                            data.gallery, main.camera_id,
                                            params.cross_camera_eval));
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return make_report(results, params.max_rank, detail::echo_params(mode, params), elapsed);
}

enum class SweepAxis { kCapacityM, kK1, kK2, kGamma };

inline const char* to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::kCapacityM: return "M";
        case SweepAxis::kK1: return "k1";
        case SweepAxis::kK2: return "k2";
        case SweepAxis::kGamma: return "gamma";
    }
    return "?";
}

struct SweepPoint {
    double value = 0.0;
    std::optional<EvalReport> report;
    /// Set when the grid value was invalid and the point was skipped.
    std::string diagnostic;
};

/// One report per grid value with everything else held fixed. Invalid values
/// are skipped with a diagnostic instead of aborting the sweep.
inline std::vector<SweepPoint> run_sweep(SweepAxis axis, std::span<const double> grid,
                                         const SynthDataset& data,
                                         const ExperimentParams& fixed_params,
                                         AblationMode pool_mode = AblationMode::kSameCameraRules) {
    if (grid.empty()) {
        throw std::invalid_argument("run_sweep: grid must be non-empty");
    }
    std::vector<SweepPoint> points;
    points.reserve(grid.size());
    for (double value : grid) {
        SweepPoint point;
        point.value = value;
        ExperimentParams params = fixed_params;
        try {
            switch (axis) {
                case SweepAxis::kCapacityM:
                    if (value < 1 || value != std::floor(value)) {
                        throw std::invalid_argument("M must be a positive integer");
                    }
                    params.capacity_M = static_cast<std::size_t>(value);
                    break;
                case SweepAxis::kK1:
                    if (value < 1 || value != std::floor(value)) {
                        throw std::invalid_argument("k1 must be a positive integer");
                    }
                    params.rerank.k1 = static_cast<std::size_t>(value);
                    break;
                case SweepAxis::kK2:
                    if (value < 1 || value != std::floor(value)) {
                        throw std::invalid_argument("k2 must be a positive integer");
                    }
                    params.rerank.k2 = static_cast<std::size_t>(value);
                    break;
                case SweepAxis::kGamma:
                    params.gamma = value;
                    break;
            }
            if (params.rerank.k2 > params.rerank.k1) {
                throw std::invalid_argument("k2 must not exceed k1");
            }
            validate(UpdateParams{params.gamma, params.beta, params.capacity_M});
            point.report = run_ablation(pool_mode, data, params);
        } catch (const std::invalid_argument& e) {
            point.report.reset();
            point.diagnostic = e.what();
        }
        points.push_back(std::move(point));
    }
    return points;
}

}  // namespace poolrank
