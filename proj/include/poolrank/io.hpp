#pragma once

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "poolrank/pool_update.hpp"
#include "poolrank/types.hpp"

namespace poolrank {

/// Malformed header or unrecognized magic.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad record inside an otherwise recognized file. record_index is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t record_index)
        : std::runtime_error(message), record_index_(record_index) {}

    std::size_t record_index() const { return record_index_; }

private:
    std::size_t record_index_;
};

enum class FileFormat { kBinary, kText };

// Binary layout, little-endian throughout:
//   embeddings  "PRPOOL1" u8 label_mode  u32 dim  u64 count, then per record
//               u32 id_len, id bytes, u32 camera_id, u64 frame_index,
//               [u32 label_len, label bytes   when label_mode = 1; len 0 = absent],
//               dim x f32
//   events      "PREVNT1" u32 dim  u64 count, then per record
//               u64 timestamp, u32 camera_id, u64 frame_index,
//               u32 id_len, id bytes, u8 confirmed, dim x f32
// The text variants start with "#PRPOOL1 dim=<d>" / "#PREVNT1 dim=<d>" and
// carry one tab-separated record per line, "-" for an absent label.

namespace detail::io {

constexpr std::string_view kEmbeddingsMagic = "PRPOOL1";
constexpr std::string_view kEventsMagic = "PREVNT1";

inline void put_u8(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) {
        out.push_back(static_cast<char>((v >> shift) & 0xff));
    }
}

inline void put_u64(std::string& out, std::uint64_t v) {
    for (int shift = 0; shift < 64; shift += 8) {
        out.push_back(static_cast<char>((v >> shift) & 0xff));
    }
}

inline void put_f32(std::string& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

inline void put_string(std::string& out, std::string_view s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.append(s);
}

/// Sequential reader over an in-memory file image. Any shortfall is reported
/// against the record being read.
class Cursor {
public:
    explicit Cursor(std::string_view data) : data_(data) {}

    void set_record(std::size_t record_1based) { record_ = record_1based; }
    bool at_end() const { return pos_ == data_.size(); }

    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(data_[pos_++]);
    }

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int shift = 0; shift < 32; shift += 8) {
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_++])) << shift;
        }
        return v;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int shift = 0; shift < 64; shift += 8) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_++])) << shift;
        }
        return v;
    }

    float f32() { return std::bit_cast<float>(u32()); }

    std::string string() {
        const std::uint32_t len = u32();
        need(len);
        std::string s(data_.substr(pos_, len));
        pos_ += len;
        return s;
    }

private:
    void need(std::size_t n) {
        if (data_.size() - pos_ < n) {
            throw ParseError("truncated file: record " + std::to_string(record_) +
                                 " is incomplete or missing",
                             record_);
        }
    }

    std::string_view data_;
    std::size_t pos_ = 0;
    std::size_t record_ = 0;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open file: " + path);
    }
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw FormatError("read failure: " + path);
    }
    return data;
}

inline void write_file(const std::string& path, std::string_view data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open file for writing: " + path);
    }
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) {
        throw std::runtime_error("write failure: " + path);
    }
}

inline std::string format_f32(float v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(v));
    return buf;
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

template <typename T>
T parse_integer(std::string_view field, const char* what, std::size_t record) {
    T value{};
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError("record " + std::to_string(record) + ": bad " + what + " '" +
                             std::string(field) + "'",
                         record);
    }
    return value;
}

inline float parse_f32(std::string_view field, std::size_t record) {
    float value = 0.0f;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError("record " + std::to_string(record) + ": bad coordinate '" +
                             std::string(field) + "'",
                         record);
    }
    return value;
}

/// Splits into lines, tolerating trailing \r and a missing final newline.
inline std::vector<std::string_view> split_lines(std::string_view data) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < data.size()) {
        std::size_t end = data.find('\n', start);
        if (end == std::string_view::npos) end = data.size();
        std::string_view line = data.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

inline std::size_t parse_text_header(std::string_view line, std::string_view magic) {
    const std::string expected = "#" + std::string(magic) + " dim=";
    if (line.substr(0, expected.size()) != expected) {
        throw FormatError("bad header line, expected '" + expected + "<d>'");
    }
    std::string_view rest = line.substr(expected.size());
    std::size_t dim = 0;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), dim);
    if (ec != std::errc() || ptr != rest.data() + rest.size()) {
        throw FormatError("bad dim in header line");
    }
    return dim;
}

inline void check_text_token(std::string_view token, const char* what) {
    if (token.find('\t') != std::string_view::npos ||
        token.find('\n') != std::string_view::npos) {
        throw std::invalid_argument(std::string(what) +
                                    " contains tab or newline; use the binary format");
    }
}

}  // namespace detail::io

/// Writes entries in the self-describing layout documented above. Entries
/// must already be a valid dataset; the first structural violation aborts the
/// save. label_mode is labeled as soon as any entry carries a label.
inline void save_embeddings(std::span<const GalleryEntry> entries, const std::string& path,
                            FileFormat format = FileFormat::kBinary) {
    const std::vector<Violation> violations = validate_dataset(entries);
    if (!violations.empty()) {
        const Violation& v = violations.front();
        throw std::invalid_argument("save_embeddings: record " +
                                    std::to_string(v.record_index + 1) + ": " + v.message);
    }
    bool labeled = false;
    for (const GalleryEntry& e : entries) {
        if (e.person_label.has_value()) {
            if (e.person_label->empty()) {
                throw std::invalid_argument(
                    "save_embeddings: empty person_label is not representable; use nullopt");
            }
            labeled = true;
        }
    }
    const std::size_t dim = entries.empty() ? 0 : entries.front().feature.dim();

    std::string out;
    if (format == FileFormat::kBinary) {
        out.append(detail::io::kEmbeddingsMagic);
        detail::io::put_u8(out, labeled ? 1 : 0);
        detail::io::put_u32(out, static_cast<std::uint32_t>(dim));
        detail::io::put_u64(out, entries.size());
        for (const GalleryEntry& e : entries) {
            detail::io::put_string(out, e.image_id);
            detail::io::put_u32(out, e.camera_id);
            detail::io::put_u64(out, e.frame_index);
            if (labeled) {
                detail::io::put_string(out, e.person_label.value_or(""));
            }
            for (float v : e.feature.values()) detail::io::put_f32(out, v);
        }
    } else {
        out = "#" + std::string(detail::io::kEmbeddingsMagic) + " dim=" + std::to_string(dim) +
              "\n";
        for (const GalleryEntry& e : entries) {
            detail::io::check_text_token(e.image_id, "image_id");
            const std::string label = e.person_label.value_or("-");
            detail::io::check_text_token(label, "person_label");
            if (e.person_label.has_value() && *e.person_label == "-") {
                throw std::invalid_argument(
                    "save_embeddings: label '-' collides with the absent marker; "
                    "use the binary format");
            }
            out += e.image_id;
            out += '\t' + std::to_string(e.camera_id);
            out += '\t' + std::to_string(e.frame_index);
            out += '\t' + label;
            for (float v : e.feature.values()) out += '\t' + detail::io::format_f32(v);
            out += '\n';
        }
    }
    detail::io::write_file(path, out);
}

namespace detail::io {

inline std::vector<GalleryEntry> load_embeddings_binary(std::string_view data) {
    Cursor cur(data.substr(kEmbeddingsMagic.size()));
    const std::uint8_t label_mode = cur.u8();
    if (label_mode > 1) {
        throw FormatError("bad label_mode byte " + std::to_string(label_mode));
    }
    const std::uint32_t dim = cur.u32();
    const std::uint64_t count = cur.u64();
    if (count > 0 && dim == 0) {
        throw FormatError("dim must be positive when records are present");
    }

    std::vector<GalleryEntry> entries;
    entries.reserve(count);
    for (std::uint64_t r = 1; r <= count; ++r) {
        cur.set_record(r);
        GalleryEntry e;
        e.image_id = cur.string();
        e.camera_id = cur.u32();
        e.frame_index = cur.u64();
        if (label_mode == 1) {
            std::string label = cur.string();
            if (!label.empty()) e.person_label = std::move(label);
        }
        std::vector<float> values(dim);
        for (std::uint32_t d = 0; d < dim; ++d) values[d] = cur.f32();
        e.feature = FeatureVector(std::move(values));
        entries.push_back(std::move(e));
    }
    if (!cur.at_end()) {
        throw ParseError("trailing bytes after record " + std::to_string(count), count);
    }
    return entries;
}

inline std::vector<GalleryEntry> load_embeddings_text(std::string_view data) {
    const std::vector<std::string_view> lines = split_lines(data);
    if (lines.empty()) {
        throw FormatError("empty file");
    }
    const std::size_t dim = parse_text_header(lines.front(), kEmbeddingsMagic);
    std::vector<GalleryEntry> entries;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        if (dim == 0) {
            throw FormatError("dim must be positive when records are present");
        }
        const std::size_t record = entries.size() + 1;
        const std::vector<std::string_view> fields = split_tabs(lines[i]);
        if (fields.size() != 4 + dim) {
            throw ParseError("record " + std::to_string(record) + ": expected " +
                                 std::to_string(4 + dim) + " fields, got " +
                                 std::to_string(fields.size()),
                             record);
        }
        GalleryEntry e;
        e.image_id = std::string(fields[0]);
        e.camera_id = parse_integer<std::uint32_t>(fields[1], "camera_id", record);
        e.frame_index = parse_integer<std::uint64_t>(fields[2], "frame_index", record);
        if (fields[3] != "-") e.person_label = std::string(fields[3]);
        std::vector<float> values(dim);
        for (std::size_t d = 0; d < dim; ++d) values[d] = parse_f32(fields[4 + d], record);
        e.feature = FeatureVector(std::move(values));
        entries.push_back(std::move(e));
    }
    return entries;
}

}  // namespace detail::io

/// Loads either format, auto-detected from the leading bytes. The loaded
/// dataset is checked with validate_dataset; the first violation is thrown as
/// a ParseError unless the caller supplies `violations` to inspect instead.
inline std::vector<GalleryEntry> load_embeddings(const std::string& path,
                                                 std::vector<Violation>* violations = nullptr) {
    const std::string data = detail::io::read_file(path);
    std::vector<GalleryEntry> entries;
    if (data.rfind(detail::io::kEmbeddingsMagic, 0) == 0) {
        entries = detail::io::load_embeddings_binary(data);
    } else if (!data.empty() && data.front() == '#') {
        entries = detail::io::load_embeddings_text(data);
    } else {
        throw FormatError("unrecognized embeddings file (bad magic): " + path);
    }
    std::vector<Violation> found = validate_dataset(entries);
    if (violations != nullptr) {
        *violations = std::move(found);
    } else if (!found.empty()) {
        const Violation& v = found.front();
        throw ParseError("record " + std::to_string(v.record_index + 1) + ": " + v.message,
                         v.record_index + 1);
    }
    return entries;
}

/// Serializes events with explicit timestamps (default: record index), which
/// must be non-decreasing. Event entries carry no person labels on disk.
inline void save_event_stream(std::span<const CameraEvent> events, const std::string& path,
                              FileFormat format = FileFormat::kBinary,
                              std::span<const std::uint64_t> timestamps = {}) {
    if (!timestamps.empty() && timestamps.size() != events.size()) {
        throw std::invalid_argument("save_event_stream: timestamps size must match events");
    }
    for (std::size_t i = 1; i < timestamps.size(); ++i) {
        if (timestamps[i] < timestamps[i - 1]) {
            throw std::invalid_argument("save_event_stream: timestamps must be non-decreasing");
        }
    }
    const std::size_t dim = events.empty() ? 0 : events.front().entry.feature.dim();
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (events[i].entry.feature.dim() != dim) {
            throw std::invalid_argument("save_event_stream: record " + std::to_string(i + 1) +
                                        ": dimension mismatch");
        }
    }
    const auto stamp = [&](std::size_t i) {
        return timestamps.empty() ? static_cast<std::uint64_t>(i) : timestamps[i];
    };

    std::string out;
    if (format == FileFormat::kBinary) {
        out.append(detail::io::kEventsMagic);
        detail::io::put_u32(out, static_cast<std::uint32_t>(dim));
        detail::io::put_u64(out, events.size());
        for (std::size_t i = 0; i < events.size(); ++i) {
            const CameraEvent& ev = events[i];
            detail::io::put_u64(out, stamp(i));
            detail::io::put_u32(out, ev.entry.camera_id);
            detail::io::put_u64(out, ev.entry.frame_index);
            detail::io::put_string(out, ev.entry.image_id);
            detail::io::put_u8(out, ev.is_confirmed ? 1 : 0);
            for (float v : ev.entry.feature.values()) detail::io::put_f32(out, v);
        }
    } else {
        out = "#" + std::string(detail::io::kEventsMagic) + " dim=" + std::to_string(dim) + "\n";
        for (std::size_t i = 0; i < events.size(); ++i) {
            const CameraEvent& ev = events[i];
            detail::io::check_text_token(ev.entry.image_id, "image_id");
            out += std::to_string(stamp(i));
            out += '\t' + std::to_string(ev.entry.camera_id);
            out += '\t' + std::to_string(ev.entry.frame_index);
            out += '\t' + ev.entry.image_id;
            out += '\t' + std::string(ev.is_confirmed ? "1" : "0");
            for (float v : ev.entry.feature.values()) out += '\t' + detail::io::format_f32(v);
            out += '\n';
        }
    }
    detail::io::write_file(path, out);
}

namespace detail::io {

inline std::vector<CameraEvent> load_events_binary(std::string_view data) {
    Cursor cur(data.substr(kEventsMagic.size()));
    const std::uint32_t dim = cur.u32();
    const std::uint64_t count = cur.u64();
    if (count > 0 && dim == 0) {
        throw FormatError("dim must be positive when records are present");
    }

    std::vector<CameraEvent> events;
    events.reserve(count);
    std::uint64_t prev_stamp = 0;
    for (std::uint64_t r = 1; r <= count; ++r) {
        cur.set_record(r);
        const std::uint64_t stamp = cur.u64();
        if (r > 1 && stamp < prev_stamp) {
            throw ParseError("record " + std::to_string(r) + ": timestamp " +
                                 std::to_string(stamp) + " is earlier than its predecessor " +
                                 std::to_string(prev_stamp),
                             r);
        }
        prev_stamp = stamp;
        CameraEvent ev;
        ev.entry.camera_id = cur.u32();
        ev.entry.frame_index = cur.u64();
        ev.entry.image_id = cur.string();
        const std::uint8_t confirmed = cur.u8();
        if (confirmed > 1) {
            throw ParseError("record " + std::to_string(r) + ": bad confirmed byte " +
                                 std::to_string(confirmed),
                             r);
        }
        ev.is_confirmed = confirmed == 1;
        std::vector<float> values(dim);
        for (std::uint32_t d = 0; d < dim; ++d) values[d] = cur.f32();
        ev.entry.feature = FeatureVector(std::move(values));
        events.push_back(std::move(ev));
    }
    if (!cur.at_end()) {
        throw ParseError("trailing bytes after record " + std::to_string(count), count);
    }
    return events;
}

inline std::vector<CameraEvent> load_events_text(std::string_view data) {
    const std::vector<std::string_view> lines = split_lines(data);
    if (lines.empty()) {
        throw FormatError("empty file");
    }
    const std::size_t dim = parse_text_header(lines.front(), kEventsMagic);
    std::vector<CameraEvent> events;
    std::uint64_t prev_stamp = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        if (dim == 0) {
            throw FormatError("dim must be positive when records are present");
        }
        const std::size_t record = events.size() + 1;
        const std::vector<std::string_view> fields = split_tabs(lines[i]);
        if (fields.size() != 5 + dim) {
            throw ParseError("record " + std::to_string(record) + ": expected " +
                                 std::to_string(5 + dim) + " fields, got " +
                                 std::to_string(fields.size()),
                             record);
        }
        const std::uint64_t stamp = parse_integer<std::uint64_t>(fields[0], "timestamp", record);
        if (record > 1 && stamp < prev_stamp) {
            throw ParseError("record " + std::to_string(record) + ": timestamp " +
                                 std::to_string(stamp) + " is earlier than its predecessor " +
                                 std::to_string(prev_stamp),
                             record);
        }
        prev_stamp = stamp;
        CameraEvent ev;
        ev.entry.camera_id = parse_integer<std::uint32_t>(fields[1], "camera_id", record);
        ev.entry.frame_index = parse_integer<std::uint64_t>(fields[2], "frame_index", record);
        ev.entry.image_id = std::string(fields[3]);
        if (fields[4] != "0" && fields[4] != "1") {
            throw ParseError("record " + std::to_string(record) + ": bad confirmed flag '" +
                                 std::string(fields[4]) + "'",
                             record);
        }
        ev.is_confirmed = fields[4] == "1";
        std::vector<float> values(dim);
        for (std::size_t d = 0; d < dim; ++d) values[d] = parse_f32(fields[5 + d], record);
        ev.entry.feature = FeatureVector(std::move(values));
        events.push_back(std::move(ev));
    }
    return events;
}

}  // namespace detail::io

/// Loads either format, auto-detected. Timestamps are validated (must be
/// non-decreasing) and then dropped; order in the returned vector is file
/// order.
inline std::vector<CameraEvent> load_event_stream(const std::string& path) {
    const std::string data = detail::io::read_file(path);
    if (data.rfind(detail::io::kEventsMagic, 0) == 0) {
        return detail::io::load_events_binary(data);
    }
    if (!data.empty() && data.front() == '#') {
        return detail::io::load_events_text(data);
    }
    throw FormatError("unrecognized event stream file (bad magic): " + path);
}

}  // namespace poolrank
