#include "icecast/fetch.hpp"

#include <httplib.h>

#include "icecast/error.hpp"

namespace icecast {
namespace {

struct SplitUrl {
    std::string base;  // scheme://host[:port]
    std::string path;
};

SplitUrl split_endpoint(const std::string& endpoint) {
    const auto scheme = endpoint.find("://");
    if (scheme == std::string::npos || endpoint.compare(0, scheme, "http") != 0)
        throw Error(ErrorKind::InvalidArgument, "endpoint must be an http:// URL: '" + endpoint + "'");
    const auto slash = endpoint.find('/', scheme + 3);
    if (slash == std::string::npos) return {endpoint, "/"};
    return {endpoint.substr(0, slash), endpoint.substr(slash)};
}

}  // namespace

std::vector<IceObservation> fetch_series(const std::string& endpoint, const SeriesQuery& query,
                                         double timeout_seconds) {
    const SplitUrl url = split_endpoint(endpoint);
    httplib::Client client(url.base);
    const auto timeout = std::chrono::milliseconds(static_cast<long long>(timeout_seconds * 1000));
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);

    const std::string target = url.path + (url.path.find('?') == std::string::npos ? '?' : '&') +
                               "point=" + std::to_string(query.point_id) +
                               "&from=" + format_day(query.from) + "&to=" + format_day(query.to);
    const auto res = client.Get(target);
    if (!res) throw Error(ErrorKind::Fetch, endpoint + ": " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300)
        throw Error(ErrorKind::Fetch, endpoint + ": HTTP status " + std::to_string(res->status));

    auto records = parse_records(res->body, "fetch");
    for (const auto& r : records) validate(r);
    return records;
}

}  // namespace icecast
