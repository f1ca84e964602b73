#include "icecast/risk.hpp"

#include <cmath>

#include "icecast/error.hpp"
#include "icecast/numfmt.hpp"
#include "text_lines.hpp"

namespace icecast {

std::string_view to_string(HazardClass c) noexcept {
    switch (c) {
        case HazardClass::Low: return "Low";
        case HazardClass::Moderate: return "Moderate";
        case HazardClass::High: return "High";
        case HazardClass::Extreme: return "Extreme";
    }
    return "Low";
}

HazardClass parse_hazard_class(std::string_view text) {
    if (text == "Low") return HazardClass::Low;
    if (text == "Moderate") return HazardClass::Moderate;
    if (text == "High") return HazardClass::High;
    if (text == "Extreme") return HazardClass::Extreme;
    throw Error(ErrorKind::Parse, "unknown hazard class '" + std::string(text) + "'");
}

double cell_hazard(const Forecast& forecast, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw Error(ErrorKind::InvalidArgument, "threshold must lie in (0, 1)");
    if (!(forecast.variance >= 0.0) || !std::isfinite(forecast.mean))
        throw Error(ErrorKind::InvalidArgument, "forecast needs a finite mean and non-negative variance");
    if (forecast.variance == 0.0) return forecast.mean > threshold ? 1.0 : 0.0;
    // 1 - Phi(z) = erfc(z / sqrt 2) / 2, accurate in the upper tail.
    const double z = (threshold - forecast.mean) / std::sqrt(forecast.variance);
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

HazardClass classify_hazard(double p, const HazardThresholds& bands) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidArgument, "probability outside [0, 1]");
    if (p >= bands.extreme) return HazardClass::Extreme;
    if (p >= bands.high) return HazardClass::High;
    if (p >= bands.moderate) return HazardClass::Moderate;
    return HazardClass::Low;
}

double RiskField::probability(PointId id) const {
    const auto it = cells.find(id);
    if (it == cells.end()) throw Error(ErrorKind::NotFound, "point " + std::to_string(id) + " not in risk field");
    return it->second.exceedance_probability;
}

RiskField build_risk_field(const GridModel& grid, const std::map<PointId, PointModel>& models, int horizon,
                           double threshold, Day target_date, const HazardThresholds& bands) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw Error(ErrorKind::InvalidArgument, "threshold must lie in (0, 1)");
    RiskField field;
    field.target_date = target_date;
    field.threshold = threshold;
    for (const GridPoint& p : grid.points()) {
        const auto it = models.find(p.id);
        if (it == models.end())
            throw Error(ErrorKind::MissingModel, "no fitted model for point " + std::to_string(p.id));
        const Forecast f = forecast(it->second.state, it->second.model, horizon).back();
        const double prob = cell_hazard(f, threshold);
        field.cells.emplace(p.id, HazardAssessment{p.id, prob, classify_hazard(prob, bands)});
    }
    return field;
}

std::string serialize_risk_field(const RiskField& field) {
    std::string out = "#riskfield v1 date=" + format_day(field.target_date) +
                      " threshold=" + format_sig9(field.threshold) + '\n';
    for (const auto& [id, cell] : field.cells)
        out += std::to_string(id) + ',' + format_sig9(cell.exceedance_probability) + ',' +
               std::string(to_string(cell.hazard_class)) + '\n';
    return out;
}

RiskField parse_risk_field(std::string_view text) {
    RiskField field;
    bool saw_header = false;
    for_each_line(text, [&](std::string_view line, std::size_t lineno) {
        if (line.empty()) return;
        try {
            if (line.front() == '#') {
                if (line.rfind("#riskfield", 0) != 0) return;
                const auto parts = split(line, ' ');
                if (parts.size() != 4 || parts[1] != "v1" || parts[2].rfind("date=", 0) != 0 ||
                    parts[3].rfind("threshold=", 0) != 0)
                    throw Error(ErrorKind::Parse, "expected '#riskfield v1 date=<day> threshold=<c>'");
                field.target_date = parse_day(parts[2].substr(5));
                field.threshold = parse_double(parts[3].substr(10));
                saw_header = true;
                return;
            }
            const auto fields = split(line, ',');
            if (fields.size() != 3) throw Error(ErrorKind::Parse, "expected point_id,probability,class");
            const long long id = parse_integer(fields[0]);
            if (id < 0 || id > 0xFFFFFFFFLL) throw Error(ErrorKind::Parse, "point id out of range");
            const double p = parse_double(fields[1]);
            if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::Range, "probability outside [0, 1]");
            const auto pid = static_cast<PointId>(id);
            if (!field.cells.emplace(pid, HazardAssessment{pid, p, parse_hazard_class(fields[2])}).second)
                throw Error(ErrorKind::Parse, "duplicate point " + std::to_string(pid));
        } catch (const Error& e) {
            if (e.line()) throw;
            throw Error(e.kind(), e.message(), lineno);
        }
    });
    if (!saw_header) throw Error(ErrorKind::Parse, "missing '#riskfield v1' header");
    return field;
}

}  // namespace icecast
