#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "poolrank/types.hpp"

namespace poolrank {

/// Similarity assigned to an exact match (distance 0). Finite so that capped
/// values keep dominating every realistic inverse distance without turning
/// downstream normalization sums into infinities.
inline constexpr double kZeroDistanceSimilarityCap = 1e12;

struct DistanceParams {
    /// Distance threshold above which similarity is zero. Defaults to
    /// "disabled": every pair contributes.
    double kappa = std::numeric_limits<double>::infinity();
    /// Scale both vectors to unit length before measuring.
    bool normalize = false;
};

inline void validate(const DistanceParams& p) {
    if (!(p.kappa > 0.0)) {
        throw std::invalid_argument("DistanceParams: kappa must be > 0");
    }
}

/// Plain Euclidean distance, accumulated in double precision with a fixed
/// summation order.
inline double euclidean_distance(const FeatureVector& a, const FeatureVector& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("euclidean_distance: dimension mismatch (" +
                                    std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) +
                                    ")");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        sum += d * d;
    }
    return std::sqrt(sum);
}

/// Contract for pluggable distance functions: symmetric, non-negative, finite
/// on finite inputs. Euclidean is the shipped implementation.
using DistanceFn = std::function<double(const FeatureVector&, const FeatureVector&)>;

inline const DistanceFn& euclidean_fn() {
    static const DistanceFn fn = [](const FeatureVector& a, const FeatureVector& b) {
        return euclidean_distance(a, b);
    };
    return fn;
}

inline FeatureVector unit_normalized(const FeatureVector& v) {
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        norm_sq += static_cast<double>(v[i]) * static_cast<double>(v[i]);
    }
    const double norm = std::sqrt(norm_sq);
    if (norm == 0.0) return v;
    std::vector<float> scaled(v.dim());
    for (std::size_t i = 0; i < v.dim(); ++i) {
        scaled[i] = static_cast<float>(static_cast<double>(v[i]) / norm);
    }
    return FeatureVector(std::move(scaled));
}

/// Distance between two vectors under the given params (optional unit
/// normalization of both sides first).
inline double pair_distance(const FeatureVector& a, const FeatureVector& b,
                            const DistanceParams& params,
                            const DistanceFn& fn = euclidean_fn()) {
    if (params.normalize) {
        return fn(unit_normalized(a), unit_normalized(b));
    }
    return fn(a, b);
}

/// Maps a distance to a similarity: inverse distance below the threshold,
/// zero above it. An exact match is capped at kZeroDistanceSimilarityCap so
/// it still dominates every other pair.
inline double similarity(double distance, const DistanceParams& params) {
    if (distance < 0.0) {
        throw std::invalid_argument("similarity: distance must be >= 0");
    }
    if (distance > params.kappa) return 0.0;
    if (distance == 0.0) return kZeroDistanceSimilarityCap;
    return std::min(1.0 / distance, kZeroDistanceSimilarityCap);
}

/// Row-major pool-by-gallery distance cache.
class DistanceMatrix {
public:
    DistanceMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double at(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
    double& at(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> values_;
};

/// matrix[i][j] = distance(pool member i, gallery entry j). Normalization,
/// when requested, is applied to both sides before measuring.
inline DistanceMatrix pool_gallery_distances(const ImagePool& pool,
                                             std::span<const GalleryEntry> gallery,
                                             const DistanceParams& params,
                                             const DistanceFn& fn = euclidean_fn()) {
    validate(params);
    DistanceMatrix matrix(pool.size(), gallery.size());
    std::vector<FeatureVector> probes;
    probes.reserve(pool.size());
    for (const PoolMember& m : pool.members()) {
        probes.push_back(params.normalize ? unit_normalized(m.entry.feature) : m.entry.feature);
    }
    std::vector<FeatureVector> targets;
    if (params.normalize) {
        targets.reserve(gallery.size());
        for (const GalleryEntry& g : gallery) {
            targets.push_back(unit_normalized(g.feature));
        }
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (std::size_t j = 0; j < gallery.size(); ++j) {
            const FeatureVector& target = params.normalize ? targets[j] : gallery[j].feature;
            matrix.at(i, j) = fn(probes[i], target);
        }
    }
    return matrix;
}

}  // namespace poolrank
