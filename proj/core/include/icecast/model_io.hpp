#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "icecast/fit.hpp"

namespace icecast {

// A fitted model for one point together with the filtered state at the end
// of its training series; this is everything forecast/risk need.
struct ModelDocument {
    PointId point_id = 0;
    FitResult fit;
    FilterState final_state;
    Day final_day{};
};

// `#icemodel v1` text.  Several documents may be concatenated; each starts
// with the header line and holds `key=value` lines:
//   point, kind, harmonics, period, q (one value per state), r,
//   init_mean, init_cov (row-major), state_day, state_mean, state_cov,
//   log_likelihood, iterations, converged
// Numbers are written in shortest round-trip form so a reload is exact.
std::string serialize_models(const std::vector<ModelDocument>& docs);
std::vector<ModelDocument> parse_models(std::string_view text);

}  // namespace icecast
