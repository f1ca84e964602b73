#pragma once

#include <string>
#include <vector>

#include "icecast/ingest.hpp"

namespace icecast {

// Issues `GET <endpoint>?point=<id>&from=<YYYY-MM-DD>&to=<YYYY-MM-DD>` and
// parses the `#obs v1` body.  All-or-nothing: transport failures and non-2xx
// statuses raise Fetch, any bad line raises Parse/Range/Timestamp and no
// records are returned.  `endpoint` is `http://host[:port][/path]`.
std::vector<IceObservation> fetch_series(const std::string& endpoint, const SeriesQuery& query,
                                         double timeout_seconds = 10.0);

}  // namespace icecast
