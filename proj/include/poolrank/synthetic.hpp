#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "poolrank/types.hpp"

namespace poolrank {

/// Shape of a synthetic multi-camera embedding dataset. Each identity gets a
/// base vector; each camera adds a systematic bias offset; each identity's
/// appearance additionally walks along a fixed direction as frames advance,
/// the same walk in every camera; each frame adds isotropic noise. Everything
/// is a pure function of the seed.
struct SynthSpec {
    std::size_t num_identities = 1;
    std::size_t num_cameras = 1;
    std::size_t dim = 1;
    std::size_t frames_per_identity_per_camera = 1;
    /// Within-identity noise sigma per coordinate.
    double cluster_spread = 0.0;
    /// Magnitude of the per-camera additive offset.
    double camera_bias_scale = 0.0;
    /// Distance the identity's appearance moves per frame index; 0 keeps
    /// conditions static.
    double drift_per_frame = 0.0;
    /// Linear growth of the camera offset per frame index, as a fraction of
    /// camera_bias_scale; models camera conditions worsening over time.
    double camera_drift_per_frame = 0.0;
    std::uint64_t seed = 0;
};

inline void validate(const SynthSpec& s) {
    if (s.num_identities < 1 || s.num_cameras < 1 || s.dim < 1 ||
        s.frames_per_identity_per_camera < 1) {
        throw std::invalid_argument("SynthSpec: all counts must be >= 1");
    }
    if (!(s.cluster_spread >= 0.0) || !std::isfinite(s.cluster_spread) ||
        !(s.camera_bias_scale >= 0.0) || !std::isfinite(s.camera_bias_scale) ||
        !(s.drift_per_frame >= 0.0) || !std::isfinite(s.drift_per_frame) ||
        !(s.camera_drift_per_frame >= 0.0) || !std::isfinite(s.camera_drift_per_frame)) {
        throw std::invalid_argument("SynthSpec: spread, bias, and drift must be finite and >= 0");
    }
}

struct SynthDataset {
    /// One canonical probe per identity: the first track frame of camera 0.
    std::vector<GalleryEntry> probes;
    /// Held-out frames ranked against probes and pools; frame indices follow
    /// the track frames in time.
    std::vector<GalleryEntry> gallery;
    /// tracks[identity][camera] = ordered frame sequence feeding pools and
    /// event streams.
    std::vector<std::vector<std::vector<GalleryEntry>>> tracks;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

/// Small counter-based gaussian source. Self-contained so generated datasets
/// stay byte-stable across standard library versions.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : state_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_unit();
        if (u1 <= 0.0) u1 = 0x1p-53;
        const double u2 = next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        constexpr double two_pi = 6.283185307179586476925286766559;
        spare_ = radius * std::sin(two_pi * u2);
        have_spare_ = true;
        return radius * std::cos(two_pi * u2);
    }

    std::vector<double> next_vector(std::size_t dim) {
        std::vector<double> v(dim);
        for (double& x : v) x = next();
        return v;
    }

private:
    double next_unit() {
        state_ = splitmix64(state_);
        return static_cast<double>(state_ >> 11) * 0x1p-53;
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

inline std::vector<double> unit_direction(std::uint64_t seed, std::size_t dim) {
    GaussianStream stream(seed);
    std::vector<double> v = stream.next_vector(dim);
    double norm_sq = 0.0;
    for (double x : v) norm_sq += x * x;
    const double norm = std::sqrt(norm_sq);
    if (norm == 0.0) {
        v.assign(dim, 0.0);
        v[0] = 1.0;
        return v;
    }
    for (double& x : v) x /= norm;
    return v;
}

enum : std::uint64_t {
    kStreamIdentity = 0x11,
    kStreamCamera = 0x22,
    kStreamTrack = 0x33,
    kStreamGallery = 0x44,
    kStreamDrift = 0x55,
};

}  // namespace detail

/// Fully deterministic dataset: probes, a held-out gallery, and per-identity
/// per-camera tracks. Track frames occupy frame indices [0, F); gallery
/// frames follow at [F, 2F), so under drift the gallery is always "later"
/// than the tracks.
inline SynthDataset generate_synthetic(const SynthSpec& spec) {
    validate(spec);
    const std::size_t frames = spec.frames_per_identity_per_camera;

    std::vector<std::vector<double>> bases(spec.num_identities);
    for (std::size_t i = 0; i < spec.num_identities; ++i) {
        detail::GaussianStream stream(
            detail::mix(spec.seed, detail::mix(detail::kStreamIdentity, i)));
        bases[i] = stream.next_vector(spec.dim);
    }
    std::vector<std::vector<double>> camera_dirs(spec.num_cameras);
    for (std::size_t c = 0; c < spec.num_cameras; ++c) {
        camera_dirs[c] =
            detail::unit_direction(detail::mix(spec.seed, detail::mix(detail::kStreamCamera, c)),
                                   spec.dim);
    }
    std::vector<std::vector<double>> walk_dirs(spec.num_identities);
    for (std::size_t i = 0; i < spec.num_identities; ++i) {
        walk_dirs[i] =
            detail::unit_direction(detail::mix(spec.seed, detail::mix(detail::kStreamDrift, i)),
                                   spec.dim);
    }

    const auto make_entry = [&](std::uint64_t stream_tag, const char* id_prefix, std::size_t i,
                                std::size_t c, std::size_t frame) {
        const std::uint64_t frame_seed = detail::mix(
            spec.seed,
            detail::mix(stream_tag, detail::mix(i, detail::mix(c, frame))));
        detail::GaussianStream noise(frame_seed);
        const double walk_gain = spec.drift_per_frame * static_cast<double>(frame);
        const double bias_gain =
            spec.camera_bias_scale *
            (1.0 + spec.camera_drift_per_frame * static_cast<double>(frame));
        std::vector<float> values(spec.dim);
        for (std::size_t d = 0; d < spec.dim; ++d) {
            const double x = bases[i][d] + bias_gain * camera_dirs[c][d] +
                             walk_gain * walk_dirs[i][d] + spec.cluster_spread * noise.next();
            values[d] = static_cast<float>(x);
        }
        GalleryEntry entry;
        entry.image_id = std::string(id_prefix) + "_i" + std::to_string(i) + "_c" +
                         std::to_string(c) + "_f" + std::to_string(frame);
        entry.camera_id = static_cast<std::uint32_t>(c);
        entry.frame_index = frame;
        entry.person_label = "id" + std::to_string(i);
        entry.feature = FeatureVector(std::move(values));
        return entry;
    };

    SynthDataset data;
    data.tracks.resize(spec.num_identities);
    data.probes.reserve(spec.num_identities);
    data.gallery.reserve(spec.num_identities * spec.num_cameras * frames);
    for (std::size_t i = 0; i < spec.num_identities; ++i) {
        data.tracks[i].resize(spec.num_cameras);
        for (std::size_t c = 0; c < spec.num_cameras; ++c) {
            data.tracks[i][c].reserve(frames);
            for (std::size_t f = 0; f < frames; ++f) {
                data.tracks[i][c].push_back(make_entry(detail::kStreamTrack, "t", i, c, f));
            }
            for (std::size_t f = frames; f < 2 * frames; ++f) {
                data.gallery.push_back(make_entry(detail::kStreamGallery, "g", i, c, f));
            }
        }
        data.probes.push_back(data.tracks[i][0][0]);
    }
    return data;
}

}  // namespace poolrank
