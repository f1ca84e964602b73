#pragma once

#include <string>
#include <vector>

#include "icecast/ingest.hpp"

namespace icecast::cli {

// Value-vs-time chart of one point's series.  The y axis always spans [0, 1];
// the x axis spans the first to the last observed day.  Runs of consecutive
// days are drawn as one <polyline> each, so a missing day splits the line;
// an isolated day is drawn as a <circle>.  Throws InvalidArgument when empty.
std::string render_svg(const std::vector<IceObservation>& series);

// Fixed-width terminal chart: 11 rows for 0.0..1.0, one column per day (or
// per bucket of days, averaged, when the span exceeds `width`).  Empty
// columns mark days without data.
std::string render_ascii(const std::vector<IceObservation>& series, int width = 72);

}  // namespace icecast::cli
