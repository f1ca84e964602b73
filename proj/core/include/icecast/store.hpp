#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "icecast/ingest.hpp"

namespace icecast {

// Append-only observation store.
//
// Layout: <root>/seg-NNNNNN.ice, one file per append batch.  Each file starts
// with `#icestore v1` followed by `crc32_hex<TAB>timestamp,point_id,concentration`
// lines sorted by (point_id, timestamp).  The CRC-32 (IEEE) covers the record
// text after the tab and is written as eight lowercase hex digits.  Segments
// are written to a temporary name and renamed into place, so readers never
// observe a partial segment.  Existing segment files are never rewritten.
//
// Writers take <root>/LOCK (exclusive create) for the duration of an append.

struct IntegrityFailure {
    std::filesystem::path file;
    std::size_t line = 0;  // 1-based; the header is line 1
    std::string reason;
};

struct IntegrityReport {
    std::size_t segments_checked = 0;
    std::size_t records_checked = 0;
    std::vector<IntegrityFailure> failures;

    bool clean() const noexcept { return failures.empty(); }
};

std::uint32_t crc32_of(std::string_view text);

// One segment line for `obs`, without the trailing newline.
std::string encode_segment_line(const IceObservation& obs);

class Store {
public:
    // Creates `root` if needed, loads every segment and verifies every line.
    // Corruption names the file and line; a key present in two segments
    // raises IntegrityConflict.
    static Store open(const std::filesystem::path& root);

    // Validates and appends `records` as one new segment.  Exact duplicates
    // (within the batch or against stored data) are skipped; a conflicting
    // value raises IntegrityConflict and nothing is written.  Returns the
    // number of newly persisted records.
    std::size_t append_records(std::vector<IceObservation> records);

    // Equivalent to sort_by_interval over all stored records.
    std::vector<IceObservation> query_range(const SeriesQuery& query) const;

    // Every stored record, sorted by (point_id, timestamp).
    std::vector<IceObservation> all_records() const;
    std::vector<PointId> point_ids() const;

    // Re-reads every segment from disk and recomputes every checksum.
    IntegrityReport verify_integrity() const;

    const std::filesystem::path& root() const noexcept { return root_; }
    std::size_t segment_count() const noexcept { return segments_.size(); }
    std::size_t size() const noexcept { return index_.size(); }

private:
    explicit Store(std::filesystem::path root) : root_(std::move(root)) {}

    std::filesystem::path root_;
    std::vector<std::filesystem::path> segments_;
    std::map<std::pair<PointId, Instant>, double> index_;
};

// Checks a store directory without opening it; never throws on bad content.
IntegrityReport verify_store(const std::filesystem::path& root);

}  // namespace icecast
