#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "icecast/grid.hpp"
#include "icecast/kalman.hpp"

namespace icecast {

enum class HazardClass { Low, Moderate, High, Extreme };

std::string_view to_string(HazardClass c) noexcept;
HazardClass parse_hazard_class(std::string_view text);

// Lower bounds of Moderate, High and Extreme.  The defaults are conventions,
// not calibrated values.
struct HazardThresholds {
    double moderate = 0.1;
    double high = 0.4;
    double extreme = 0.7;
};

inline constexpr double kDefaultIceThreshold = 0.7;

// P(concentration > threshold) under the unclipped Gaussian forecast.  A zero
// variance is a point mass: 1 if mean > threshold else 0.  Throws
// InvalidArgument unless 0 < threshold < 1 and variance >= 0.
double cell_hazard(const Forecast& forecast, double threshold);

// Step function; each band's lower bound is inclusive.  Throws
// InvalidArgument for p outside [0, 1].
HazardClass classify_hazard(double p, const HazardThresholds& bands = {});

struct HazardAssessment {
    PointId point_id = 0;
    double exceedance_probability = 0.0;
    HazardClass hazard_class = HazardClass::Low;
};

struct RiskField {
    Day target_date{};
    double threshold = kDefaultIceThreshold;
    std::map<PointId, HazardAssessment> cells;

    // Throws NotFound.
    double probability(PointId id) const;
};

struct PointModel {
    StateSpaceModel model;
    FilterState state;
};

// Forecasts every grid point `horizon` days ahead, then scores and classifies
// it.  Throws MissingModel naming the first point without a model.
RiskField build_risk_field(const GridModel& grid, const std::map<PointId, PointModel>& models, int horizon,
                           double threshold, Day target_date, const HazardThresholds& bands = {});

// `#riskfield v1 date=<YYYY-MM-DD> threshold=<c>` then `point_id,probability,class`.
std::string serialize_risk_field(const RiskField& field);
RiskField parse_risk_field(std::string_view text);

}  // namespace icecast
