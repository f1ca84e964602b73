#include "icecast/store.hpp"

#include <fcntl.h>
#include <unistd.h>
#include <zlib.h>

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "icecast/error.hpp"

namespace icecast {
namespace fs = std::filesystem;

namespace {

constexpr std::string_view kHeader = "#icestore v1";
constexpr std::string_view kLockName = "LOCK";

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

bool is_segment_name(const std::string& name) {
    return name.size() == 14 && name.rfind("seg-", 0) == 0 && name.substr(10) == ".ice" &&
           std::all_of(name.begin() + 4, name.begin() + 10, [](char c) { return c >= '0' && c <= '9'; });
}

std::vector<fs::path> list_segments(const fs::path& root) {
    std::vector<fs::path> out;
    if (!fs::exists(root)) return out;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_regular_file() && is_segment_name(entry.path().filename().string()))
            out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

bool parse_hex32(std::string_view text, std::uint32_t& value) {
    if (text.size() != 8) return false;
    value = 0;
    for (char c : text) {
        int digit;
        if (c >= '0' && c <= '9') digit = c - '0';
        else if (c >= 'a' && c <= 'f') digit = c - 'a' + 10;
        else return false;  // uppercase is rejected so every byte change is visible
        value = (value << 4) | static_cast<std::uint32_t>(digit);
    }
    return true;
}

struct ScannedSegment {
    std::vector<IceObservation> records;
    std::vector<IntegrityFailure> failures;
    std::size_t record_lines = 0;
};

// Checks one segment file line by line.  Lines are split on '\n' only.
ScannedSegment scan_segment(const fs::path& path, std::string_view text) {
    ScannedSegment out;
    auto fail = [&](std::size_t line, std::string reason) {
        out.failures.push_back({path, line, std::move(reason)});
    };

    std::size_t lineno = 0;
    std::size_t pos = 0;
    const IceObservation* prev = nullptr;
    if (text.empty()) fail(1, "empty segment (missing header)");
    while (pos < text.size()) {
        ++lineno;
        std::size_t end = text.find('\n', pos);
        const bool terminated = end != std::string_view::npos;
        if (!terminated) end = text.size();
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        if (lineno > 1) ++out.record_lines;

        if (!terminated) {
            fail(lineno, "unterminated final line (torn write?)");
            continue;
        }
        if (lineno == 1) {
            if (line != kHeader) fail(lineno, "bad segment header");
            continue;
        }
        const auto tab = line.find('\t');
        std::uint32_t stored = 0;
        if (tab == std::string_view::npos || !parse_hex32(line.substr(0, tab), stored)) {
            fail(lineno, "malformed checksum field");
            continue;
        }
        const std::string_view body = line.substr(tab + 1);
        if (crc32_of(body) != stored) {
            fail(lineno, "checksum mismatch");
            continue;
        }
        try {
            IceObservation obs = parse_record(body, "store");
            validate(obs);
            if (prev && !(prev->point_id < obs.point_id ||
                          (prev->point_id == obs.point_id && prev->timestamp < obs.timestamp))) {
                fail(lineno, "record out of (point, timestamp) order");
                continue;
            }
            out.records.push_back(std::move(obs));
            prev = &out.records.back();
        } catch (const Error& e) {
            fail(lineno, e.message());
        }
    }
    return out;
}

// Exclusive-create lock file, removed on destruction.
class LockFile {
public:
    explicit LockFile(fs::path path) : path_(std::move(path)) {
        fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd_ < 0) {
            if (errno == EEXIST)
                throw Error(ErrorKind::Lock, path_.string() + " exists; another writer is active");
            throw Error(ErrorKind::Io, "cannot create " + path_.string() + ": " + std::strerror(errno));
        }
        const std::string pid = std::to_string(::getpid()) + "\n";
        [[maybe_unused]] auto n = ::write(fd_, pid.data(), pid.size());
    }
    ~LockFile() {
        ::close(fd_);
        std::error_code ec;
        fs::remove(path_, ec);
    }
    LockFile(const LockFile&) = delete;
    LockFile& operator=(const LockFile&) = delete;

private:
    fs::path path_;
    int fd_ = -1;
};

void write_durably(const fs::path& path, std::string_view content) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw Error(ErrorKind::Io, "cannot create " + path.string());
    const bool ok = std::fwrite(content.data(), 1, content.size(), f) == content.size() &&
                    std::fflush(f) == 0 && ::fsync(::fileno(f)) == 0;
    std::fclose(f);
    if (!ok) {
        std::error_code ec;
        fs::remove(path, ec);
        throw Error(ErrorKind::Io, "short write to " + path.string());
    }
}

}  // namespace

std::uint32_t crc32_of(std::string_view text) {
    return static_cast<std::uint32_t>(
        ::crc32(0L, reinterpret_cast<const Bytef*>(text.data()), static_cast<uInt>(text.size())));
}

std::string encode_segment_line(const IceObservation& obs) {
    const std::string body = serialize_record(obs);
    char hex[9];
    std::snprintf(hex, sizeof hex, "%08x", crc32_of(body));
    return std::string(hex) + '\t' + body;
}

Store Store::open(const fs::path& root) {
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec || !fs::is_directory(root))
        throw Error(ErrorKind::Io, "cannot use store directory " + root.string());

    Store store(root);
    for (const auto& path : list_segments(root)) {
        ScannedSegment seg = scan_segment(path, read_file(path));
        if (!seg.failures.empty()) {
            const auto& f = seg.failures.front();
            throw Error(ErrorKind::Corruption,
                        f.file.string() + ":" + std::to_string(f.line) + ": " + f.reason);
        }
        for (const auto& r : seg.records) {
            if (!store.index_.emplace(std::pair{r.point_id, r.timestamp}, r.concentration).second)
                throw Error(ErrorKind::IntegrityConflict,
                            "point " + std::to_string(r.point_id) + " at " + format_timestamp(r.timestamp) +
                                " appears in more than one segment (again in " + path.string() + ")");
        }
        store.segments_.push_back(path);
    }
    return store;
}

std::size_t Store::append_records(std::vector<IceObservation> records) {
    for (const auto& r : records) validate(r);
    sort_by_key(records);
    records = dedupe(records);

    std::vector<IceObservation> fresh;
    for (const auto& r : records) {
        const auto it = index_.find({r.point_id, r.timestamp});
        if (it == index_.end()) {
            fresh.push_back(r);
        } else if (it->second != r.concentration) {
            throw Error(ErrorKind::IntegrityConflict,
                        "point " + std::to_string(r.point_id) + " at " + format_timestamp(r.timestamp) +
                            ": stored " + serialize_record({r.point_id, r.timestamp, it->second}) +
                            " conflicts with incoming " + serialize_record(r));
        }
    }
    if (fresh.empty()) return 0;

    LockFile lock(root_ / kLockName);
    unsigned next = 1;
    for (const auto& p : list_segments(root_))
        next = std::max(next, static_cast<unsigned>(std::stoul(p.filename().string().substr(4, 6))) + 1);
    char name[32];
    std::snprintf(name, sizeof name, "seg-%06u.ice", next);
    const fs::path final_path = root_ / name;
    const fs::path tmp_path = root_ / (std::string(name) + ".tmp");

    std::string content(kHeader);
    content += '\n';
    for (const auto& r : fresh) {
        content += encode_segment_line(r);
        content += '\n';
    }
    write_durably(tmp_path, content);
    std::error_code ec;
    fs::rename(tmp_path, final_path, ec);
    if (ec) {
        fs::remove(tmp_path, ec);
        throw Error(ErrorKind::Io, "cannot publish segment " + final_path.string());
    }

    segments_.push_back(final_path);
    for (const auto& r : fresh) index_.emplace(std::pair{r.point_id, r.timestamp}, r.concentration);
    return fresh.size();
}

std::vector<IceObservation> Store::query_range(const SeriesQuery& query) const {
    std::vector<IceObservation> out;
    const auto lo = index_.lower_bound({query.point_id, Instant(query.from)});
    const auto hi = index_.upper_bound({query.point_id, Instant(query.to)});
    for (auto it = lo; it != hi; ++it) out.push_back({it->first.first, it->first.second, it->second, "store"});
    return out;
}

std::vector<IceObservation> Store::all_records() const {
    std::vector<IceObservation> out;
    out.reserve(index_.size());
    for (const auto& [key, value] : index_) out.push_back({key.first, key.second, value, "store"});
    return out;
}

std::vector<PointId> Store::point_ids() const {
    std::vector<PointId> out;
    for (const auto& [key, value] : index_)
        if (out.empty() || out.back() != key.first) out.push_back(key.first);
    return out;
}

IntegrityReport Store::verify_integrity() const { return verify_store(root_); }

IntegrityReport verify_store(const fs::path& root) {
    IntegrityReport report;
    std::map<std::pair<PointId, Instant>, fs::path> seen;
    for (const auto& path : list_segments(root)) {
        ++report.segments_checked;
        std::string text;
        try {
            text = read_file(path);
        } catch (const Error& e) {
            report.failures.push_back({path, 0, e.message()});
            continue;
        }
        ScannedSegment seg = scan_segment(path, text);
        report.records_checked += seg.record_lines;
        for (auto& f : seg.failures) report.failures.push_back(std::move(f));
        for (const auto& r : seg.records) {
            const auto [it, inserted] = seen.emplace(std::pair{r.point_id, r.timestamp}, path);
            if (!inserted)
                report.failures.push_back({path, 0,
                                           "key " + serialize_record(r) + " duplicates a record in " +
                                               it->second.filename().string()});
        }
    }
    return report;
}

}  // namespace icecast
