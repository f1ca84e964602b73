#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "icecast/dates.hpp"
#include "icecast/grid.hpp"

namespace icecast {

// One daily concentration reading for one grid point.  Concentration is the
// ice-covered fraction of the cell: 0 = open water, 1 = full cover.
struct IceObservation {
    PointId point_id = 0;
    Instant timestamp{};
    double concentration = 0.0;
    std::string source = "file";

    Day day() const { return day_of(timestamp); }

    // Source tag is provenance, not data; it does not take part in equality.
    friend bool operator==(const IceObservation& a, const IceObservation& b) {
        return a.point_id == b.point_id && a.timestamp == b.timestamp &&
               a.concentration == b.concentration;
    }
};

struct SeriesQuery {
    PointId point_id = 0;
    Day from{};
    Day to{};

    // Throws InvalidArgument when from > to or point_id == 0.
    static SeriesQuery make(PointId point, Day from, Day to);
};

// Parses `#obs v1` text (`timestamp,point_id,concentration` per line).
// Comment and blank lines are skipped.  Out-of-range concentrations raise
// Range, anything else unreadable raises Parse; both carry the line number.
// Time of day is kept as written; validate() enforces midnight.
std::vector<IceObservation> parse_records(std::string_view text, std::string_view source = "file");

// A single `timestamp,point_id,concentration` record (no line number).
IceObservation parse_record(std::string_view line, std::string_view source = "file");

std::string serialize_record(const IceObservation& obs);
// Header plus one line per record, in the given order.
std::string serialize_records(const std::vector<IceObservation>& records);

// Returns `obs` unchanged when the point id is positive, the concentration
// lies in [0,1] and the timestamp is exactly 00:00:00Z in years 0000..9999;
// otherwise Range / Timestamp.
const IceObservation& validate(const IceObservation& obs);

// Truncates the timestamp to midnight.  Used by `ingest --coerce-midnight`.
IceObservation coerce_midnight(IceObservation obs);

// Records of query.point_id within [from, to], ascending by timestamp,
// stable for equal timestamps.
std::vector<IceObservation> sort_by_interval(const std::vector<IceObservation>& records,
                                             const SeriesQuery& query);

// Input must be sorted by (point_id, timestamp).  Exact duplicates collapse;
// same key with a different concentration raises IntegrityConflict.
std::vector<IceObservation> dedupe(const std::vector<IceObservation>& records);

// Sorts by (point_id, timestamp), stable.
void sort_by_key(std::vector<IceObservation>& records);

}  // namespace icecast
