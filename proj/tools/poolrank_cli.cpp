// Command-line surface over the ranking engine: baseline and joint-distance
// ranking, pool-driven re-ranking, event-stream simulation, synthetic data
// generation, evaluation, and parameter sweeps.
//
// Exit codes: 0 success, 1 computation failure, 2 config or file errors.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "poolrank/poolrank.hpp"

namespace {

using namespace poolrank;

std::string format_score(double v, bool full_precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), full_precision ? "%.17g" : "%.6g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    detail::io::write_file(path, text);
}

std::string ranked_table(const RankedList& list, std::span<const GalleryEntry> gallery,
                         std::size_t limit) {
    std::string out = "      rank  image_id                          score\n";
    const std::size_t n = std::min(limit, list.items.size());
    for (std::size_t i = 0; i < n; ++i) {
        const RankedItem& item = list.items[i];
        char line[160];
        std::snprintf(line, sizeof(line), "%10zu  %-28s  %s\n", i + 1,
                      gallery[item.gallery_index].image_id.c_str(),
                      format_score(item.score, false).c_str());
        out += line;
    }
    if (n < list.items.size()) {
        out += "  ... " + std::to_string(list.items.size() - n) + " more\n";
    }
    return out;
}

std::string ranked_csv(const RankedList& list, std::span<const GalleryEntry> gallery) {
    std::string out = "rank,image_id,score\n";
    for (std::size_t i = 0; i < list.items.size(); ++i) {
        const RankedItem& item = list.items[i];
        out += std::to_string(i + 1) + "," + gallery[item.gallery_index].image_id + "," +
               format_score(item.score, true) + "\n";
    }
    return out;
}

/// Pool files are plain embeddings files: the first record is the main image,
/// the rest are assists in order (record 2 is the second main when
/// designated). Weights are derived from the member count, not stored.
ImagePool load_pool(const std::string& path, std::optional<std::size_t> capacity,
                    bool second_main) {
    const std::vector<GalleryEntry> entries = load_embeddings(path);
    if (entries.empty()) {
        throw std::invalid_argument("pool file has no records: " + path);
    }
    const std::vector<double> weights = pool_weights(entries.size(), second_main);
    std::vector<PoolMember> members;
    members.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        MemberRole role = MemberRole::kAssist;
        if (i == 0) role = MemberRole::kMain;
        if (i == 1 && second_main) role = MemberRole::kSecondMain;
        members.push_back({entries[i], weights[i], role});
    }
    const std::size_t cap = std::max(capacity.value_or(entries.size()), entries.size());
    return ImagePool(std::move(members), cap, members.front().entry.camera_id);
}

void save_pool(const ImagePool& pool, const std::string& path, FileFormat format) {
    std::vector<GalleryEntry> entries;
    entries.reserve(pool.size());
    entries.push_back(pool.main().entry);
    if (pool.second_main_index().has_value()) {
        entries.push_back(pool.members()[*pool.second_main_index()].entry);
    }
    for (const PoolMember& m : pool.members()) {
        if (m.role == MemberRole::kAssist) entries.push_back(m.entry);
    }
    save_embeddings(entries, path, format);
}

AblationMode parse_rules(const std::string& name) {
    if (name == "baseline") return AblationMode::kBaseline;
    if (name == "a" || name == "same_camera_random") return AblationMode::kSameCameraRandom;
    if (name == "b" || name == "same_camera_rules") return AblationMode::kSameCameraRules;
    if (name == "c" || name == "mixed_random") return AblationMode::kMixedRandom;
    if (name == "d" || name == "cross_camera_rules") return AblationMode::kCrossCameraRules;
    throw std::invalid_argument("unknown --rules value '" + name +
                                "' (expected baseline|a|b|c|d)");
}

SweepAxis parse_axis(const std::string& name) {
    if (name == "M") return SweepAxis::kCapacityM;
    if (name == "k1") return SweepAxis::kK1;
    if (name == "k2") return SweepAxis::kK2;
    if (name == "gamma") return SweepAxis::kGamma;
    throw std::invalid_argument("unknown --axis value '" + name + "' (expected M|k1|k2|gamma)");
}

struct SynthFlags {
    std::size_t identities = 50;
    std::size_t cameras = 4;
    std::size_t dim = 32;
    std::size_t frames = 6;
    double spread = 0.5;
    double bias = 2.0;
    double drift = 0.0;
    double camera_drift = 0.0;
    std::uint64_t seed = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--identities", identities, "Number of synthetic identities");
        cmd->add_option("--cameras", cameras, "Number of cameras");
        cmd->add_option("--dim", dim, "Embedding dimension");
        cmd->add_option("--frames", frames, "Track frames per identity per camera");
        cmd->add_option("--spread", spread, "Within-identity noise sigma");
        cmd->add_option("--bias", bias, "Per-camera offset magnitude");
        cmd->add_option("--drift", drift, "Appearance walk distance per frame");
        cmd->add_option("--camera-drift", camera_drift,
                        "Camera offset growth per frame, relative to --bias");
        cmd->add_option("--seed", seed, "Generator seed");
    }

    SynthSpec spec() const {
        SynthSpec s;
        s.num_identities = identities;
        s.num_cameras = cameras;
        s.dim = dim;
        s.frames_per_identity_per_camera = frames;
        s.cluster_spread = spread;
        s.camera_bias_scale = bias;
        s.drift_per_frame = drift;
        s.camera_drift_per_frame = camera_drift;
        s.seed = seed;
        return s;
    }
};

struct RankCmd {
    std::string gallery_path;
    std::string pool_path;
    std::string mode = "baseline";
    double eta_scale = 0.0;
    bool joint_exclude_main = false;
    double kappa = std::numeric_limits<double>::infinity();
    bool normalize = false;
    std::string format = "table";
    std::string out = "-";
    std::size_t limit = 50;
    CLI::Option* eta_opt = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--gallery", gallery_path, "Gallery embeddings file")->required();
        cmd->add_option("--pool", pool_path, "Pool embeddings file (first record = main)")
            ->required();
        cmd->add_option("--mode", mode, "baseline|jointdist")
            ->check(CLI::IsMember({"baseline", "jointdist"}));
        eta_opt = cmd->add_option("--eta-scale", eta_scale,
                                  "Correction scale for jointdist mode");
        cmd->add_flag("--joint-exclude-main", joint_exclude_main,
                      "Leave the main image out of the similarity sum");
        cmd->add_option("--kappa", kappa, "Similarity distance cutoff (default: none)");
        cmd->add_flag("--normalize", normalize, "Unit-normalize features before distances");
        cmd->add_option("--format", format, "table|csv")
            ->check(CLI::IsMember({"table", "csv"}));
        cmd->add_option("--out", out, "Output path, '-' for stdout");
        cmd->add_option("--limit", limit, "Max rows in table output");
    }

    int run() const {
        const std::vector<GalleryEntry> gallery = load_embeddings(gallery_path);
        const ImagePool pool = load_pool(pool_path, std::nullopt, false);
        DistanceParams dparams;
        dparams.kappa = kappa;
        dparams.normalize = normalize;

        RankedList list;
        if (mode == "baseline") {
            list = baseline_ranking(pool.main().entry.feature, gallery, dparams);
        } else {
            if (eta_opt == nullptr || eta_opt->count() == 0) {
                throw std::invalid_argument("--eta-scale is required with --mode jointdist");
            }
            JointDistanceParams jparams;
            jparams.eta_scale = eta_scale;
            jparams.include_main_in_sum = !joint_exclude_main;
            jparams.distance = dparams;
            list = rank_by_joint_distance(gallery, pool, jparams);
        }
        write_text(out, format == "csv" ? ranked_csv(list, gallery)
                                        : ranked_table(list, gallery, limit));
        return 0;
    }
};

struct RerankCmd {
    std::string gallery_path;
    std::string pool_path;
    std::size_t k1 = 70;
    std::size_t k2 = 2;
    bool second_main = false;
    bool derive_counts = false;
    double eta_count = 0.0;
    double kappa = std::numeric_limits<double>::infinity();
    bool normalize = false;
    std::string format = "table";
    std::string out = "-";
    std::size_t limit = 50;
    bool no_trace = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--gallery", gallery_path, "Gallery embeddings file")->required();
        cmd->add_option("--pool", pool_path, "Pool embeddings file (first record = main)")
            ->required();
        cmd->add_option("--k1", k1, "Main candidate window depth");
        cmd->add_option("--k2", k2, "Assist candidate list depth");
        cmd->add_flag("--second-main", second_main,
                      "Treat the pool file's second record as the second main image");
        cmd->add_flag("--derive-counts", derive_counts,
                      "Derive per-member list depths from weights");
        cmd->add_option("--eta-count", eta_count, "Scale for derived list depths");
        cmd->add_option("--kappa", kappa, "Similarity distance cutoff (default: none)");
        cmd->add_flag("--normalize", normalize, "Unit-normalize features before distances");
        cmd->add_option("--format", format, "table|csv")
            ->check(CLI::IsMember({"table", "csv"}));
        cmd->add_option("--out", out, "Output path, '-' for stdout");
        cmd->add_option("--limit", limit, "Max rows in table output");
        cmd->add_flag("--no-trace", no_trace, "Skip the promotion trace section");
    }

    int run() const {
        const std::vector<GalleryEntry> gallery = load_embeddings(gallery_path);
        if (k1 > gallery.size()) {
            throw std::invalid_argument("--k1 must not exceed the gallery size (" +
                                        std::to_string(gallery.size()) + ")");
        }
        const ImagePool pool = load_pool(pool_path, std::nullopt, second_main);
        RerankParams params;
        params.k1 = k1;
        params.k2 = k2;
        params.derive_counts_from_weights = derive_counts;
        params.eta_count = eta_count;
        params.use_second_main = second_main;
        params.distance.kappa = kappa;
        params.distance.normalize = normalize;
        const RankedList list = rerank_with_pool(gallery, pool, params);

        std::string text;
        if (format == "csv") {
            text = ranked_csv(list, gallery);
        } else {
            text = ranked_table(list, gallery, limit);
            if (!no_trace && pool.size() > 1) {
                const std::size_t window = std::min(k1, list.items.size());
                text += "\ncandidate window (top " + std::to_string(window) +
                        "), matches across member lists:\n";
                for (std::size_t i = 0; i < window; ++i) {
                    const RankedItem& item = list.items[i];
                    char line[160];
                    std::snprintf(line, sizeof(line), "%10zu  %-28s  T=%.0f\n", i + 1,
                                  gallery[item.gallery_index].image_id.c_str(), item.score);
                    text += line;
                }
            }
        }
        write_text(out, text);
        return 0;
    }
};

struct SimulateCmd {
    std::string events_path;
    std::string init_track_path;
    std::string pool_path;
    std::string gallery_path;
    std::string target_label;
    std::string save_pool_path;
    std::string save_format = "bin";
    double gamma = 0.0;
    std::size_t beta = 1;
    std::size_t capacity = 3;
    std::size_t k1 = 70;
    std::size_t k2 = 2;
    double kappa = std::numeric_limits<double>::infinity();
    bool normalize = false;
    std::size_t eval_every = 0;
    bool quiet = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--events", events_path, "Event stream file")->required();
        auto* track = cmd->add_option("--init-track", init_track_path,
                                      "Single-camera track embeddings to seed the pool");
        auto* pool = cmd->add_option("--pool", pool_path, "Pre-built pool embeddings file");
        track->excludes(pool);
        pool->excludes(track);
        cmd->add_option("--gamma", gamma, "Update acceptance threshold")->required();
        cmd->add_option("--beta", beta, "Init sampling stride")->required();
        cmd->add_option("--capacity", capacity, "Pool capacity M");
        cmd->add_option("--gallery", gallery_path, "Gallery for periodic accuracy snapshots");
        cmd->add_option("--target-label", target_label,
                        "Ground-truth label of the tracked person (for snapshots)");
        cmd->add_option("--eval-every", eval_every,
                        "Snapshot the ranking after every N accepted updates (0 = never)");
        cmd->add_option("--k1", k1, "Snapshot re-ranking window depth");
        cmd->add_option("--k2", k2, "Snapshot assist list depth");
        cmd->add_option("--kappa", kappa, "Similarity distance cutoff (default: none)");
        cmd->add_flag("--normalize", normalize, "Unit-normalize features before distances");
        cmd->add_option("--save-pool", save_pool_path, "Write the final pool here");
        cmd->add_option("--save-format", save_format, "bin|txt for --save-pool")
            ->check(CLI::IsMember({"bin", "txt"}));
        cmd->add_flag("--quiet", quiet, "Suppress per-event trace lines");
    }

    int run() const {
        if (init_track_path.empty() && pool_path.empty()) {
            throw std::invalid_argument("one of --init-track or --pool is required");
        }
        UpdateParams params;
        params.gamma = gamma;
        params.beta = beta;
        params.capacity_M = capacity;

        ImagePool pool = init_track_path.empty()
                             ? load_pool(pool_path, capacity, false)
                             : init_pool(load_embeddings(init_track_path), params);

        std::vector<GalleryEntry> gallery;
        if (!gallery_path.empty()) {
            gallery = load_embeddings(gallery_path);
            if (target_label.empty()) {
                throw std::invalid_argument("--target-label is required with --gallery");
            }
        }
        DistanceParams dparams;
        dparams.kappa = kappa;
        dparams.normalize = normalize;

        const std::vector<CameraEvent> events = load_event_stream(events_path);
        std::size_t accepted = 0;
        for (std::size_t i = 0; i < events.size(); ++i) {
            auto [next, trace] = apply_event(pool, events[i], params, dparams);
            pool = std::move(next);
            if (!quiet) {
                std::printf("event %6zu  camera=%u  id=%-24s  action=%-18s  criterion=%s%s%s\n",
                            i + 1, events[i].entry.camera_id,
                            events[i].entry.image_id.c_str(), to_string(trace.action),
                            format_score(trace.criterion_value, false).c_str(),
                            trace.evicted_image_id ? "  evicted=" : "",
                            trace.evicted_image_id ? trace.evicted_image_id->c_str() : "");
            }
            const bool was_accepted = trace.action == UpdateAction::kReplacedAssist ||
                                      trace.action == UpdateAction::kReplacedMain;
            if (!was_accepted) continue;
            ++accepted;
            if (!gallery.empty() && eval_every > 0 && accepted % eval_every == 0) {
                snapshot(pool, gallery, dparams, accepted);
            }
        }

        std::printf("events=%zu accepted=%zu final pool:\n", events.size(), accepted);
        for (const PoolMember& m : pool.members()) {
            std::printf("  %-12s weight=%-8s id=%s camera=%u\n", to_string(m.role),
                        format_score(m.weight, false).c_str(), m.entry.image_id.c_str(),
                        m.entry.camera_id);
        }
        if (!save_pool_path.empty()) {
            save_pool(pool, save_pool_path,
                      save_format == "txt" ? FileFormat::kText : FileFormat::kBinary);
        }
        return 0;
    }

    void snapshot(const ImagePool& pool, std::span<const GalleryEntry> gallery,
                  const DistanceParams& dparams, std::size_t accepted) const {
        RerankParams rparams;
        rparams.k1 = std::min(k1, gallery.size());
        rparams.k2 = std::min(k2, rparams.k1);
        rparams.distance = dparams;
        const RankedList list = rerank_with_pool(gallery, pool, rparams);
        std::size_t first = 0;
        for (std::size_t i = 0; i < list.items.size(); ++i) {
            const auto& label = gallery[list.items[i].gallery_index].person_label;
            if (label.has_value() && *label == target_label) {
                first = i + 1;
                break;
            }
        }
        std::printf("snapshot accepted=%zu rank_of_first_match=%s hit@1=%d\n", accepted,
                    first == 0 ? "none" : std::to_string(first).c_str(),
                    first == 1 ? 1 : 0);
    }
};

struct EvalCmd {
    SynthFlags synth;
    std::string mode = "ablation";
    std::string rules = "d";
    std::size_t capacity = 3;
    std::size_t k1 = 70;
    std::size_t k2 = 2;
    double gamma = 0.0;
    std::size_t beta = 1;
    double kappa = std::numeric_limits<double>::infinity();
    bool normalize = false;
    bool same_camera_eval = false;
    std::size_t max_rank = 20;
    std::uint64_t selection_seed = 0;
    std::string csv_path;
    bool records = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--mode", mode, "Evaluation mode")
            ->check(CLI::IsMember({"ablation"}));
        cmd->add_option("--rules", rules,
                        "Pool member selection: baseline|a|b|c|d (random vs rule-based, "
                        "same-camera vs cross-camera)");
        synth.attach(cmd);
        cmd->add_option("-M,--capacity", capacity, "Pool capacity M");
        cmd->add_option("--k1", k1, "Main candidate window depth");
        cmd->add_option("--k2", k2, "Assist candidate list depth");
        cmd->add_option("--gamma", gamma, "Update acceptance threshold")->required();
        cmd->add_option("--beta", beta, "Init sampling stride");
        cmd->add_option("--kappa", kappa, "Similarity distance cutoff (default: none)");
        cmd->add_flag("--normalize", normalize, "Unit-normalize features before distances");
        cmd->add_flag("--same-camera-eval", same_camera_eval,
                      "Keep same-camera true matches as relevant (off = standard protocol)");
        cmd->add_option("--max-rank", max_rank, "Deepest CMC rank to report");
        cmd->add_option("--selection-seed", selection_seed, "Seed for random member selection");
        cmd->add_option("--csv", csv_path, "Write the CMC curve as CSV here");
        cmd->add_flag("--records", records, "Emit machine-readable records instead of a table");
    }

    ExperimentParams experiment_params() const {
        ExperimentParams p;
        p.capacity_M = capacity;
        p.rerank.k1 = k1;
        p.rerank.k2 = k2;
        p.rerank.distance.kappa = kappa;
        p.rerank.distance.normalize = normalize;
        p.gamma = gamma;
        p.beta = beta;
        p.cross_camera_eval = !same_camera_eval;
        p.max_rank = max_rank;
        p.selection_seed = selection_seed;
        return p;
    }

    int run() const {
        const SynthDataset data = generate_synthetic(synth.spec());
        const EvalReport report = run_ablation(parse_rules(rules), data, experiment_params());
        std::cout << (records ? format_report_records(report) : format_report_table(report));
        if (!csv_path.empty()) {
            detail::io::write_file(csv_path, format_cmc_csv(report));
        }
        return 0;
    }
};

struct SweepCmd {
    EvalCmd base;
    std::string axis = "M";
    std::vector<double> grid;
    std::string csv_path;

    void attach(CLI::App* cmd) {
        base.rules = "b";
        cmd->add_option("--axis", axis, "Swept parameter: M|k1|k2|gamma")->required();
        cmd->add_option("--grid", grid, "Comma-separated grid values")
            ->required()
            ->delimiter(',');
        cmd->add_option("--rules", base.rules, "Pool selection mode for every point");
        base.synth.attach(cmd);
        cmd->add_option("-M,--capacity", base.capacity, "Pool capacity M (fixed axes)");
        cmd->add_option("--k1", base.k1, "Main candidate window depth (fixed axes)");
        cmd->add_option("--k2", base.k2, "Assist candidate list depth (fixed axes)");
        cmd->add_option("--gamma", base.gamma, "Update acceptance threshold (fixed axes)")
            ->required();
        cmd->add_option("--beta", base.beta, "Init sampling stride");
        cmd->add_option("--kappa", base.kappa, "Similarity distance cutoff (default: none)");
        cmd->add_flag("--normalize", base.normalize, "Unit-normalize features");
        cmd->add_flag("--same-camera-eval", base.same_camera_eval,
                      "Keep same-camera true matches as relevant");
        cmd->add_option("--max-rank", base.max_rank, "Deepest CMC rank to report");
        cmd->add_option("--selection-seed", base.selection_seed,
                        "Seed for random member selection");
        cmd->add_option("--csv", csv_path, "Write the sweep results as CSV here");
    }

    int run() const {
        const SynthDataset data = generate_synthetic(base.synth.spec());
        const std::vector<SweepPoint> points = run_sweep(
            parse_axis(axis), grid, data, base.experiment_params(), parse_rules(base.rules));
        std::cout << format_sweep_table(parse_axis(axis), points);
        if (!csv_path.empty()) {
            detail::io::write_file(csv_path, format_sweep_csv(parse_axis(axis), points));
        }
        return 0;
    }
};

struct SynthCmd {
    SynthFlags synth;
    std::string out_dir;
    std::string format = "bin";
    std::size_t target = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--out", out_dir, "Output directory")->required();
        synth.attach(cmd);
        cmd->add_option("--format", format, "bin|txt")
            ->check(CLI::IsMember({"bin", "txt"}));
        cmd->add_option("--target", target,
                        "Identity whose track and event stream are also written");
    }

    int run() const {
        const SynthDataset data = generate_synthetic(synth.spec());
        if (target >= data.tracks.size()) {
            throw std::invalid_argument("--target out of range (have " +
                                        std::to_string(data.tracks.size()) + " identities)");
        }
        const FileFormat ff = format == "txt" ? FileFormat::kText : FileFormat::kBinary;
        const std::string ext = format == "txt" ? ".txt" : ".bin";
        std::filesystem::create_directories(out_dir);
        const auto path = [&](const std::string& stem) { return out_dir + "/" + stem + ext; };

        save_embeddings(data.gallery, path("gallery"), ff);
        save_embeddings(data.probes, path("probes"), ff);
        save_embeddings(data.tracks[target][0], path("init_track"), ff);

        // Cross-camera sightings of the target, interleaved in frame order,
        // ready for the simulate command.
        std::vector<CameraEvent> events;
        const auto& cams = data.tracks[target];
        for (std::size_t f = 0; f < synth.frames; ++f) {
            for (std::size_t c = 1; c < cams.size(); ++c) {
                if (f < cams[c].size()) events.push_back({cams[c][f], true});
            }
        }
        save_event_stream(events, path("events"), ff);

        std::printf("wrote gallery (%zu), probes (%zu), init_track (%zu), events (%zu) to %s\n",
                    data.gallery.size(), data.probes.size(), data.tracks[target][0].size(),
                    events.size(), out_dir.c_str());
        return 0;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Image-pool ranking engine: multi-camera person search with joint "
                 "re-ranking and online pool updates"};
    app.require_subcommand(1);

    RankCmd rank_cmd;
    RerankCmd rerank_cmd;
    SimulateCmd simulate_cmd;
    EvalCmd eval_cmd;
    SweepCmd sweep_cmd;
    SynthCmd synth_cmd;

    rank_cmd.attach(app.add_subcommand("rank", "Rank a gallery against a pool's main image"));
    rerank_cmd.attach(app.add_subcommand(
        "rerank", "Re-rank the main image's candidate window using the whole pool"));
    simulate_cmd.attach(app.add_subcommand(
        "simulate", "Replay a camera event stream through the pool update rules"));
    eval_cmd.attach(
        app.add_subcommand("eval", "Score pool selection strategies on synthetic data"));
    sweep_cmd.attach(
        app.add_subcommand("sweep", "Evaluate a grid of values for one parameter"));
    synth_cmd.attach(
        app.add_subcommand("synth", "Generate a deterministic synthetic dataset"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand("rank")) return rank_cmd.run();
        if (app.got_subcommand("rerank")) return rerank_cmd.run();
        if (app.got_subcommand("simulate")) return simulate_cmd.run();
        if (app.got_subcommand("eval")) return eval_cmd.run();
        if (app.got_subcommand("sweep")) return sweep_cmd.run();
        if (app.got_subcommand("synth")) return synth_cmd.run();
    } catch (const poolrank::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const poolrank::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
