#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "poolrank/metric.hpp"
#include "poolrank/synthetic.hpp"

using namespace poolrank;

namespace {

SynthSpec small_spec() {
    SynthSpec spec;
    spec.num_identities = 4;
    spec.num_cameras = 3;
    spec.dim = 8;
    spec.frames_per_identity_per_camera = 5;
    spec.cluster_spread = 0.4;
    spec.camera_bias_scale = 1.5;
    spec.seed = 42;
    return spec;
}

bool same_entries(const std::vector<GalleryEntry>& a, const std::vector<GalleryEntry>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i] == b[i])) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("generation is a pure function of its parameters", "[synthetic]") {
    const SynthSpec spec = small_spec();
    const SynthDataset a = generate_synthetic(spec);
    const SynthDataset b = generate_synthetic(spec);
    CHECK(same_entries(a.probes, b.probes));
    CHECK(same_entries(a.gallery, b.gallery));
    REQUIRE(a.tracks.size() == b.tracks.size());
    for (std::size_t i = 0; i < a.tracks.size(); ++i) {
        REQUIRE(a.tracks[i].size() == b.tracks[i].size());
        for (std::size_t c = 0; c < a.tracks[i].size(); ++c) {
            CHECK(same_entries(a.tracks[i][c], b.tracks[i][c]));
        }
    }

    SynthSpec reseeded = spec;
    reseeded.seed = 43;
    const SynthDataset c = generate_synthetic(reseeded);
    CHECK_FALSE(same_entries(a.gallery, c.gallery));
}

TEST_CASE("dataset shapes follow the requested counts", "[synthetic]") {
    const SynthSpec spec = small_spec();
    const SynthDataset data = generate_synthetic(spec);

    CHECK(data.probes.size() == spec.num_identities);
    CHECK(data.gallery.size() ==
          spec.num_identities * spec.num_cameras * spec.frames_per_identity_per_camera);
    REQUIRE(data.tracks.size() == spec.num_identities);
    for (const auto& per_camera : data.tracks) {
        REQUIRE(per_camera.size() == spec.num_cameras);
        for (const auto& track : per_camera) {
            CHECK(track.size() == spec.frames_per_identity_per_camera);
        }
    }

    SECTION("every probe is the first camera-0 track frame of its identity") {
        for (std::size_t i = 0; i < data.probes.size(); ++i) {
            CHECK(data.probes[i] == data.tracks[i][0][0]);
        }
    }
    SECTION("identifiers are unique and features clean") {
        std::vector<GalleryEntry> all = data.gallery;
        for (const auto& per_camera : data.tracks) {
            for (const auto& track : per_camera) {
                all.insert(all.end(), track.begin(), track.end());
            }
        }
        CHECK(validate_dataset(all).empty());
    }
    SECTION("labels and ids are structured") {
        CHECK(data.probes[2].person_label == std::optional<std::string>("id2"));
        CHECK(data.probes[2].image_id == "t_i2_c0_f0");
        CHECK(data.tracks[1][2][3].image_id == "t_i1_c2_f3");
        CHECK(data.tracks[1][2][3].camera_id == 2);
        CHECK(data.tracks[1][2][3].frame_index == 3);
        bool found = false;
        for (const GalleryEntry& g : data.gallery) {
            if (g.image_id == "g_i1_c2_f7") {
                found = true;
                CHECK(g.person_label == std::optional<std::string>("id1"));
                CHECK(g.camera_id == 2);
                CHECK(g.frame_index == 7);
            }
        }
        CHECK(found);
    }
    SECTION("track frames precede gallery frames in time") {
        const std::uint64_t frames = spec.frames_per_identity_per_camera;
        for (const auto& per_camera : data.tracks) {
            for (const auto& track : per_camera) {
                for (const GalleryEntry& e : track) CHECK(e.frame_index < frames);
            }
        }
        for (const GalleryEntry& g : data.gallery) {
            CHECK(g.frame_index >= frames);
            CHECK(g.frame_index < 2 * frames);
        }
    }
}

TEST_CASE("zero spread collapses each identity-camera cell to one point", "[synthetic]") {
    SynthSpec spec = small_spec();
    spec.cluster_spread = 0.0;
    spec.drift_per_frame = 0.0;
    const SynthDataset data = generate_synthetic(spec);

    for (std::size_t i = 0; i < spec.num_identities; ++i) {
        for (std::size_t c = 0; c < spec.num_cameras; ++c) {
            const FeatureVector& first = data.tracks[i][c][0].feature;
            for (const GalleryEntry& e : data.tracks[i][c]) {
                CHECK(e.feature == first);
            }
            // Gallery frames repeat the same point too once noise is off.
            for (const GalleryEntry& g : data.gallery) {
                if (g.person_label == data.tracks[i][c][0].person_label &&
                    g.camera_id == c) {
                    CHECK(g.feature == first);
                }
            }
        }
    }
}

TEST_CASE("drift walks each identity at a known rate, shared across cameras", "[synthetic]") {
    SynthSpec spec = small_spec();
    spec.cluster_spread = 0.0;
    spec.drift_per_frame = 0.25;
    spec.camera_bias_scale = 2.0;
    const SynthDataset data = generate_synthetic(spec);

    // With no noise, frame f sits at base + bias*camera_dir + drift*f*walk_dir
    // with a unit walk direction, so consecutive frames of a track are exactly
    // one drift step apart and the walk accumulates linearly.
    const double step = spec.drift_per_frame;
    for (std::size_t c = 0; c < spec.num_cameras; ++c) {
        const auto& track = data.tracks[0][c];
        for (std::size_t f = 1; f < track.size(); ++f) {
            const double d =
                euclidean_distance(track[f - 1].feature, track[f].feature);
            CHECK(d == Catch::Approx(step).epsilon(1e-5));
        }
        const double span =
            euclidean_distance(track.front().feature, track.back().feature);
        CHECK(span == Catch::Approx(step * static_cast<double>(track.size() - 1)).epsilon(1e-5));
    }

    // The walk is the identity's, not the camera's: same identity, same frame,
    // different cameras stay exactly two camera offsets apart at every frame.
    for (std::size_t f = 0; f < data.tracks[0][0].size(); ++f) {
        const double d0 = euclidean_distance(data.tracks[0][0][0].feature,
                                             data.tracks[0][1][0].feature);
        const double df = euclidean_distance(data.tracks[0][0][f].feature,
                                             data.tracks[0][1][f].feature);
        CHECK(df == Catch::Approx(d0).epsilon(1e-4));
    }
}

TEST_CASE("camera drift grows the camera offset at a known rate", "[synthetic]") {
    SynthSpec spec = small_spec();
    spec.cluster_spread = 0.0;
    spec.drift_per_frame = 0.0;
    spec.camera_drift_per_frame = 0.25;
    spec.camera_bias_scale = 2.0;
    const SynthDataset data = generate_synthetic(spec);

    // With no noise and no appearance walk, frame f sits at
    // base + bias*(1 + camera_drift*f)*camera_dir, so consecutive frames of a
    // track are exactly bias*camera_drift apart along the camera direction.
    const double step = spec.camera_bias_scale * spec.camera_drift_per_frame;
    for (std::size_t c = 0; c < spec.num_cameras; ++c) {
        const auto& track = data.tracks[0][c];
        for (std::size_t f = 1; f < track.size(); ++f) {
            const double d = euclidean_distance(track[f - 1].feature, track[f].feature);
            CHECK(d == Catch::Approx(step).epsilon(1e-5));
        }
    }

    spec.camera_drift_per_frame = -0.1;
    CHECK_THROWS_AS(generate_synthetic(spec), std::invalid_argument);
}

TEST_CASE("camera bias separates cameras but not identities", "[synthetic]") {
    SynthSpec spec = small_spec();
    spec.cluster_spread = 0.0;
    spec.camera_bias_scale = 3.0;
    const SynthDataset data = generate_synthetic(spec);

    // Same identity, different cameras: distance comes only from the two
    // camera offsets, so it is at most 2*bias (triangle) and positive.
    for (std::size_t i = 0; i < spec.num_identities; ++i) {
        const double d = euclidean_distance(data.tracks[i][0][0].feature,
                                            data.tracks[i][1][0].feature);
        CHECK(d > 0.0);
        CHECK(d <= 2.0 * spec.camera_bias_scale + 1e-4);
    }
}

TEST_CASE("spec validation rejects degenerate shapes", "[synthetic]") {
    SynthSpec spec = small_spec();
    spec.num_identities = 0;
    CHECK_THROWS_AS(generate_synthetic(spec), std::invalid_argument);
    spec = small_spec();
    spec.dim = 0;
    CHECK_THROWS_AS(generate_synthetic(spec), std::invalid_argument);
    spec = small_spec();
    spec.cluster_spread = -0.1;
    CHECK_THROWS_AS(generate_synthetic(spec), std::invalid_argument);
    spec = small_spec();
    spec.drift_per_frame = std::nan("");
    CHECK_THROWS_AS(generate_synthetic(spec), std::invalid_argument);
}

TEST_CASE("the gaussian source has the right first two moments", "[synthetic]") {
    detail::GaussianStream stream(12345);
    const std::size_t n = 20000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = stream.next();
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = sum_sq / static_cast<double>(n) - mean * mean;
    CHECK(std::fabs(mean) < 0.05);
    CHECK(std::fabs(var - 1.0) < 0.1);
}

TEST_CASE("camera directions are unit vectors", "[synthetic]") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::vector<double> v = detail::unit_direction(seed, 16);
        double norm_sq = 0.0;
        for (double x : v) norm_sq += x * x;
        CHECK(std::sqrt(norm_sq) == Catch::Approx(1.0).margin(1e-12));
    }
}
