#include "icecast/ingest.hpp"

#include <algorithm>
#include <cmath>

#include "icecast/error.hpp"
#include "icecast/numfmt.hpp"
#include "text_lines.hpp"

namespace icecast {

SeriesQuery SeriesQuery::make(PointId point, Day from, Day to) {
    if (point == 0) throw Error(ErrorKind::InvalidArgument, "point id must be positive");
    if (from > to)
        throw Error(ErrorKind::InvalidArgument,
                    "query window " + format_day(from) + ".." + format_day(to) + " is reversed");
    return {point, from, to};
}

IceObservation parse_record(std::string_view line, std::string_view source) {
    const auto fields = split(line, ',');
    if (fields.size() != 3) throw Error(ErrorKind::Parse, "expected timestamp,point_id,concentration");
    IceObservation obs;
    obs.source = std::string(source);
    obs.timestamp = parse_timestamp(fields[0]);
    const long long id = parse_integer(fields[1]);
    if (id <= 0 || id > 0xFFFFFFFFLL)
        throw Error(ErrorKind::Parse, "point id must be a positive 32-bit integer");
    obs.point_id = static_cast<PointId>(id);
    obs.concentration = parse_double(fields[2]);
    if (!(obs.concentration >= 0.0 && obs.concentration <= 1.0))
        throw Error(ErrorKind::Range, "concentration " + std::string(fields[2]) + " outside [0,1]");
    return obs;
}

std::vector<IceObservation> parse_records(std::string_view text, std::string_view source) {
    std::vector<IceObservation> out;
    for_each_line(text, [&](std::string_view line, std::size_t lineno) {
        if (line.empty() || line.front() == '#') {
            if (line.rfind("#obs ", 0) == 0 && line != "#obs v1")
                throw Error(ErrorKind::Parse, "unsupported header '" + std::string(line) + "'", lineno);
            return;
        }
        try {
            out.push_back(parse_record(line, source));
        } catch (const Error& e) {
            throw Error(e.kind(), e.message(), lineno);
        }
    });
    return out;
}

std::string serialize_record(const IceObservation& obs) {
    return format_timestamp(obs.timestamp) + ',' + std::to_string(obs.point_id) + ',' +
           format_exact(obs.concentration);
}

std::string serialize_records(const std::vector<IceObservation>& records) {
    std::string out = "#obs v1\n";
    for (const auto& r : records) {
        out += serialize_record(r);
        out += '\n';
    }
    return out;
}

const IceObservation& validate(const IceObservation& obs) {
    if (obs.point_id == 0) throw Error(ErrorKind::Range, "point id must be positive");
    if (!(obs.concentration >= 0.0 && obs.concentration <= 1.0))
        throw Error(ErrorKind::Range, "concentration " + format_exact(obs.concentration) +
                                          " outside [0,1] for point " + std::to_string(obs.point_id));
    const int year = static_cast<int>(std::chrono::year_month_day{obs.day()}.year());
    if (year < 0 || year > 9999)
        throw Error(ErrorKind::Timestamp, "year " + std::to_string(year) + " is outside 0000..9999 (point " +
                                              std::to_string(obs.point_id) + ")");
    if (!is_midnight(obs.timestamp))
        throw Error(ErrorKind::Timestamp,
                    format_timestamp(obs.timestamp) + " is not 00:00:00Z (point " +
                        std::to_string(obs.point_id) + ")");
    return obs;
}

IceObservation coerce_midnight(IceObservation obs) {
    obs.timestamp = Instant(obs.day());
    return obs;
}

std::vector<IceObservation> sort_by_interval(const std::vector<IceObservation>& records,
                                             const SeriesQuery& query) {
    const Instant lo(query.from);
    const Instant hi(query.to);
    std::vector<IceObservation> out;
    for (const auto& r : records)
        if (r.point_id == query.point_id && r.timestamp >= lo && r.timestamp <= hi) out.push_back(r);
    std::stable_sort(out.begin(), out.end(),
                     [](const IceObservation& a, const IceObservation& b) { return a.timestamp < b.timestamp; });
    return out;
}

void sort_by_key(std::vector<IceObservation>& records) {
    std::stable_sort(records.begin(), records.end(), [](const IceObservation& a, const IceObservation& b) {
        if (a.point_id != b.point_id) return a.point_id < b.point_id;
        return a.timestamp < b.timestamp;
    });
}

std::vector<IceObservation> dedupe(const std::vector<IceObservation>& records) {
    std::vector<IceObservation> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        if (!out.empty() && out.back().point_id == r.point_id && out.back().timestamp == r.timestamp) {
            if (out.back().concentration != r.concentration)
                throw Error(ErrorKind::IntegrityConflict,
                            "point " + std::to_string(r.point_id) + " at " + format_timestamp(r.timestamp) +
                                " has conflicting concentrations " + format_exact(out.back().concentration) +
                                " and " + format_exact(r.concentration));
            continue;
        }
        out.push_back(r);
    }
    return out;
}

}  // namespace icecast
