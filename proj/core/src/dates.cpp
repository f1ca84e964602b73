#include "icecast/dates.hpp"

#include <charconv>
#include <cstdio>

#include "icecast/error.hpp"

namespace icecast {
namespace {

int digits(std::string_view text, std::size_t pos, std::size_t count, std::string_view whole) {
    int value = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        const char c = text[i];
        if (c < '0' || c > '9')
            throw Error(ErrorKind::Parse, "bad date/time '" + std::string(whole) + "'");
        value = value * 10 + (c - '0');
    }
    return value;
}

Day checked_day(int y, int m, int d, std::string_view whole) {
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw Error(ErrorKind::Parse, "invalid calendar date '" + std::string(whole) + "'");
    return Day(ymd);
}

Day parse_date_prefix(std::string_view text) {
    if (text.size() < 10 || text[4] != '-' || text[7] != '-')
        throw Error(ErrorKind::Parse, "bad date '" + std::string(text) + "'");
    return checked_day(digits(text, 0, 4, text), digits(text, 5, 2, text),
                       digits(text, 8, 2, text), text);
}

}  // namespace

Day parse_day(std::string_view text) {
    if (text.size() != 10) throw Error(ErrorKind::Parse, "bad date '" + std::string(text) + "'");
    return parse_date_prefix(text);
}

std::string format_day(Day day) {
    const std::chrono::year_month_day ymd{day};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

Instant parse_timestamp(std::string_view text) {
    // 2012-01-01T00:00:00Z
    if (text.size() != 20 || text[10] != 'T' || text[13] != ':' || text[16] != ':' || text[19] != 'Z')
        throw Error(ErrorKind::Parse, "bad timestamp '" + std::string(text) + "'");
    const Day day = parse_date_prefix(text.substr(0, 10));
    const int hh = digits(text, 11, 2, text);
    const int mm = digits(text, 14, 2, text);
    const int ss = digits(text, 17, 2, text);
    if (hh > 23 || mm > 59 || ss > 59)
        throw Error(ErrorKind::Parse, "bad time of day '" + std::string(text) + "'");
    return Instant(day) + std::chrono::hours(hh) + std::chrono::minutes(mm) + std::chrono::seconds(ss);
}

std::string format_timestamp(Instant instant) {
    const Day day = day_of(instant);
    const auto secs = (instant - Instant(day)).count();
    char buf[64];
    std::snprintf(buf, sizeof buf, "T%02lld:%02lld:%02lldZ", static_cast<long long>(secs / 3600),
                  static_cast<long long>(secs / 60 % 60), static_cast<long long>(secs % 60));
    return format_day(day) + buf;
}

}  // namespace icecast
