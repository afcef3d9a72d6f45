#include <catch2/catch_amalgamated.hpp>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "helpers.hpp"
#include "poolrank/io.hpp"

using namespace poolrank;
using testutil::Rng;

namespace {

std::string temp_path(const std::string& name) {
    static const std::filesystem::path dir = [] {
        std::filesystem::path p = std::filesystem::temp_directory_path() /
                                  ("poolrank_io_" + std::to_string(::getpid()));
        std::filesystem::create_directories(p);
        return p;
    }();
    return (dir / name).string();
}

std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_bytes(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    REQUIRE(out.good());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

std::vector<GalleryEntry> sample_entries(std::size_t n, std::size_t dim, bool with_labels,
                                         std::uint64_t seed = 99) {
    Rng rng(seed);
    std::vector<GalleryEntry> entries;
    for (std::size_t i = 0; i < n; ++i) {
        GalleryEntry e;
        e.image_id = "img" + std::to_string(i);
        e.camera_id = static_cast<std::uint32_t>(rng.index(6));
        e.frame_index = rng.next_u64() % 100000;
        if (with_labels && i % 3 != 2) {
            e.person_label = "person" + std::to_string(i % 5);
        }
        e.feature = testutil::random_feature(rng, dim);
        entries.push_back(std::move(e));
    }
    return entries;
}

bool same_entries(const std::vector<GalleryEntry>& a, const std::vector<GalleryEntry>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i] == b[i])) return false;
    }
    return true;
}

std::vector<CameraEvent> sample_events(std::size_t n, std::size_t dim, std::uint64_t seed = 7) {
    Rng rng(seed);
    std::vector<CameraEvent> events;
    for (std::size_t i = 0; i < n; ++i) {
        CameraEvent ev;
        ev.entry.image_id = "ev" + std::to_string(i);
        ev.entry.camera_id = static_cast<std::uint32_t>(rng.index(4));
        ev.entry.frame_index = i;
        ev.entry.feature = testutil::random_feature(rng, dim);
        ev.is_confirmed = rng.flip();
        events.push_back(std::move(ev));
    }
    return events;
}

}  // namespace

TEST_CASE("embeddings round-trip exactly in both formats", "[io]") {
    const auto format = GENERATE(FileFormat::kBinary, FileFormat::kText);
    const std::string path =
        temp_path(format == FileFormat::kBinary ? "round.bin" : "round.txt");

    SECTION("fully labeled") {
        std::vector<GalleryEntry> entries = sample_entries(25, 7, true);
        for (GalleryEntry& e : entries) {
            if (!e.person_label) e.person_label = "filler";
        }
        save_embeddings(entries, path, format);
        CHECK(same_entries(load_embeddings(path), entries));
    }
    SECTION("unlabeled") {
        const std::vector<GalleryEntry> entries = sample_entries(25, 7, false);
        save_embeddings(entries, path, format);
        CHECK(same_entries(load_embeddings(path), entries));
    }
    SECTION("mixed labels survive as written") {
        const std::vector<GalleryEntry> entries = sample_entries(25, 7, true);
        bool has_gap = false;
        for (const GalleryEntry& e : entries) has_gap |= !e.person_label.has_value();
        REQUIRE(has_gap);
        save_embeddings(entries, path, format);
        const std::vector<GalleryEntry> loaded = load_embeddings(path);
        CHECK(same_entries(loaded, entries));
    }
    SECTION("an empty dataset is just a header") {
        save_embeddings(std::vector<GalleryEntry>{}, path, format);
        CHECK(load_embeddings(path).empty());
    }
}

TEST_CASE("saving is byte-stable and loading inverts it", "[io]") {
    const std::vector<GalleryEntry> entries = sample_entries(1000, 16, true);
    const std::string path_a = temp_path("stable_a.bin");
    const std::string path_b = temp_path("stable_b.bin");

    save_embeddings(entries, path_a);
    save_embeddings(entries, path_b);
    CHECK(read_bytes(path_a) == read_bytes(path_b));

    const std::vector<GalleryEntry> loaded = load_embeddings(path_a);
    REQUIRE(same_entries(loaded, entries));
    save_embeddings(loaded, path_b);
    CHECK(read_bytes(path_a) == read_bytes(path_b));

    const std::string path_t = temp_path("stable_t.txt");
    save_embeddings(entries, path_t, FileFormat::kText);
    const std::string text_once = read_bytes(path_t);
    save_embeddings(load_embeddings(path_t), path_t, FileFormat::kText);
    CHECK(read_bytes(path_t) == text_once);
}

TEST_CASE("the label mode is a single header byte", "[io]") {
    const std::string path = temp_path("labelmode.bin");

    save_embeddings(sample_entries(3, 4, false), path);
    CHECK(read_bytes(path)[7] == 0);

    save_embeddings(sample_entries(3, 4, true), path);
    CHECK(read_bytes(path)[7] == 1);
}

TEST_CASE("malformed embeddings files fail with precise errors", "[io]") {
    const std::string good = temp_path("good.bin");
    save_embeddings(sample_entries(2, 4, true), good);
    const std::string bytes = read_bytes(good);

    SECTION("unknown magic") {
        const std::string path = temp_path("badmagic.bin");
        write_bytes(path, "NOTPOOL" + bytes.substr(7));
        CHECK_THROWS_AS(load_embeddings(path), FormatError);
    }
    SECTION("a truncated final record") {
        const std::string path = temp_path("chopped.bin");
        write_bytes(path, bytes.substr(0, bytes.size() - 5));
        try {
            load_embeddings(path);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.record_index() == 2);
            CHECK(std::string(e.what()).find("record 2") != std::string::npos);
        }
    }
    SECTION("a count larger than the payload") {
        // The record count is the 8 bytes after magic, label byte, and dim.
        std::string patched = bytes;
        patched[12] = 3;
        const std::string path = temp_path("overcount.bin");
        write_bytes(path, patched);
        try {
            load_embeddings(path);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.record_index() == 3);
        }
    }
    SECTION("trailing junk after the last record") {
        const std::string path = temp_path("trailing.bin");
        write_bytes(path, bytes + "xyz");
        CHECK_THROWS_AS(load_embeddings(path), ParseError);
    }
    SECTION("a text record with the wrong field count") {
        const std::string path = temp_path("fields.txt");
        write_bytes(path, "#PRPOOL1 dim=2\na\t0\t0\t-\t1.0\t2.0\nb\t0\t0\t-\t1.0\n");
        try {
            load_embeddings(path);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.record_index() == 2);
        }
    }
    SECTION("a text record with a non-numeric coordinate") {
        const std::string path = temp_path("badfloat.txt");
        write_bytes(path, "#PRPOOL1 dim=1\na\t0\t0\t-\tbanana\n");
        CHECK_THROWS_AS(load_embeddings(path), ParseError);
    }
}

TEST_CASE("structural violations surface on load", "[io]") {
    // Two records sharing one id: representable on disk, invalid as a dataset.
    const std::string path = temp_path("dupid.txt");
    write_bytes(path, "#PRPOOL1 dim=1\nsame\t0\t0\t-\t1.0\nsame\t1\t1\t-\t2.0\n");

    SECTION("the default is to throw") {
        try {
            load_embeddings(path);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.record_index() == 2);
            CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
        }
    }
    SECTION("a violations sink converts the throw into a report") {
        std::vector<Violation> violations;
        const std::vector<GalleryEntry> entries = load_embeddings(path, &violations);
        CHECK(entries.size() == 2);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].kind == Violation::Kind::kDuplicateImageId);
        CHECK(violations[0].record_index == 1);
    }
}

TEST_CASE("hand-written text files parse as documented", "[io]") {
    const std::string path = temp_path("hand.txt");
    write_bytes(path,
                "#PRPOOL1 dim=3\n"
                "cam0_shot1\t0\t12\talice\t1.5\t-2\t0.25\n"
                "cam1_shot9\t1\t90\t-\t0\t0\t1e-3\n");
    const std::vector<GalleryEntry> entries = load_embeddings(path);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].image_id == "cam0_shot1");
    CHECK(entries[0].camera_id == 0);
    CHECK(entries[0].frame_index == 12);
    CHECK(entries[0].person_label == std::optional<std::string>("alice"));
    CHECK(entries[0].feature == FeatureVector(std::vector<float>{1.5f, -2.0f, 0.25f}));
    CHECK_FALSE(entries[1].person_label.has_value());
    CHECK(entries[1].feature.values()[2] == 1e-3f);

    SECTION("carriage returns and a missing final newline are tolerated") {
        const std::string crlf = temp_path("hand_crlf.txt");
        write_bytes(crlf, "#PRPOOL1 dim=1\r\nx\t0\t0\t-\t4.0\r\ny\t0\t1\t-\t5.0");
        const std::vector<GalleryEntry> loaded = load_embeddings(crlf);
        REQUIRE(loaded.size() == 2);
        CHECK(loaded[1].feature.values()[0] == 5.0f);
    }
}

TEST_CASE("unsaveable datasets are rejected before any bytes hit disk", "[io]") {
    const std::string path = temp_path("reject.bin");

    SECTION("duplicate ids") {
        std::vector<GalleryEntry> entries = sample_entries(2, 4, false);
        entries[1].image_id = entries[0].image_id;
        CHECK_THROWS_AS(save_embeddings(entries, path), std::invalid_argument);
    }
    SECTION("an empty label has no representation") {
        std::vector<GalleryEntry> entries = sample_entries(2, 4, false);
        entries[0].person_label = "";
        CHECK_THROWS_AS(save_embeddings(entries, path), std::invalid_argument);
    }
    SECTION("text tokens cannot contain tabs") {
        std::vector<GalleryEntry> entries = sample_entries(2, 4, false);
        entries[0].image_id = "bad\tid";
        CHECK_THROWS_AS(save_embeddings(entries, temp_path("reject.txt"), FileFormat::kText),
                        std::invalid_argument);
    }
    SECTION("the dash label is reserved in the text format") {
        std::vector<GalleryEntry> entries = sample_entries(2, 4, false);
        entries[0].person_label = "-";
        CHECK_THROWS_AS(save_embeddings(entries, temp_path("reject.txt"), FileFormat::kText),
                        std::invalid_argument);
        // The binary format has no marker collision to worry about.
        save_embeddings(entries, path);
        CHECK(load_embeddings(path)[0].person_label == std::optional<std::string>("-"));
    }
}

TEST_CASE("event streams round-trip in both formats", "[io]") {
    const auto format = GENERATE(FileFormat::kBinary, FileFormat::kText);
    const std::string path =
        temp_path(format == FileFormat::kBinary ? "events.bin" : "events.txt");

    const std::vector<CameraEvent> events = sample_events(40, 5);
    save_event_stream(events, path, format);
    const std::vector<CameraEvent> loaded = load_event_stream(path);
    REQUIRE(loaded.size() == events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        CHECK(loaded[i] == events[i]);
    }

    SECTION("an empty stream is just a header") {
        save_event_stream(std::vector<CameraEvent>{}, path, format);
        CHECK(load_event_stream(path).empty());
    }
}

TEST_CASE("event timestamps must never move backwards", "[io]") {
    const std::vector<CameraEvent> events = sample_events(3, 2);
    const std::string path = temp_path("stamps.bin");

    SECTION("equal consecutive timestamps are allowed") {
        const std::vector<std::uint64_t> stamps{1, 2, 2};
        save_event_stream(events, path, FileFormat::kBinary, stamps);
        CHECK(load_event_stream(path).size() == 3);
    }
    SECTION("a decreasing pair is rejected at save time") {
        const std::vector<std::uint64_t> stamps{2, 1, 3};
        CHECK_THROWS_AS(save_event_stream(events, path, FileFormat::kBinary, stamps),
                        std::invalid_argument);
    }
    SECTION("a mismatched timestamp count is rejected") {
        const std::vector<std::uint64_t> stamps{1, 2};
        CHECK_THROWS_AS(save_event_stream(events, path, FileFormat::kBinary, stamps),
                        std::invalid_argument);
    }
    SECTION("a decreasing pair in a text file is caught on load") {
        const std::string text = temp_path("stamps.txt");
        write_bytes(text,
                    "#PREVNT1 dim=1\n"
                    "2\t0\t0\ta\t1\t1.0\n"
                    "1\t0\t1\tb\t1\t2.0\n");
        try {
            load_event_stream(text);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.record_index() == 2);
            CHECK(std::string(e.what()).find("timestamp") != std::string::npos);
        }
    }
    SECTION("a bad confirmed flag is caught on load") {
        const std::string text = temp_path("confirmed.txt");
        write_bytes(text, "#PREVNT1 dim=1\n1\t0\t0\ta\t7\t1.0\n");
        CHECK_THROWS_AS(load_event_stream(text), ParseError);
    }
}

TEST_CASE("event files do not carry labels", "[io]") {
    std::vector<CameraEvent> events = sample_events(4, 3);
    events[0].entry.person_label = "in_memory_only";
    const std::string path = temp_path("nolabel.bin");
    save_event_stream(events, path);
    const std::vector<CameraEvent> loaded = load_event_stream(path);
    CHECK_FALSE(loaded[0].entry.person_label.has_value());
    // Everything except the label survives.
    CHECK(loaded[0].entry.image_id == events[0].entry.image_id);
    CHECK(loaded[0].entry.feature == events[0].entry.feature);
}
