#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "icecast/error.hpp"
#include "icecast/ingest.hpp"

namespace icecast {
namespace {

Instant at(const char* text) { return parse_timestamp(text); }
Day day(const char* text) { return parse_day(text); }

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an icecast::Error";
    return ErrorKind::InvalidArgument;
}

TEST(Ingest, ParsesARecordVerbatim) {
    const auto recs = parse_records("#obs v1\n2012-01-01T00:00:00Z,1,0.73\n");
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0].point_id, 1u);
    EXPECT_EQ(recs[0].timestamp, at("2012-01-01T00:00:00Z"));
    EXPECT_EQ(recs[0].concentration, 0.73);
}

TEST(Ingest, AcceptsBothBoundsAndSkipsCommentsAndBlanks) {
    const auto recs = parse_records("#obs v1\n\n# note\n2012-01-01T00:00:00Z,1,0.0\n\n2012-01-02T00:00:00Z,1,1.0\n");
    ASSERT_EQ(recs.size(), 2u);
    EXPECT_EQ(recs[0].concentration, 0.0);
    EXPECT_EQ(recs[1].concentration, 1.0);
}

TEST(Ingest, ParseErrorsCarryLineNumbers) {
    try {
        parse_records("#obs v1\n2012-01-01T00:00:00Z,1,0.5\n2012-01-02T00:00:00Z,1,1.2\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Range);
        EXPECT_EQ(e.line(), 3u);
    }
    try {
        parse_records("2012-01-01T00:00:00Z,1,abc\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parse);
        EXPECT_EQ(e.line(), 1u);
    }
    EXPECT_EQ(kind_of([] { parse_records("2012-01-01T00:00:00Z,1\n"); }), ErrorKind::Parse);
    EXPECT_EQ(kind_of([] { parse_records("2012-13-01T00:00:00Z,1,0.2\n"); }), ErrorKind::Parse);
    EXPECT_EQ(kind_of([] { parse_records("2012-01-01T00:00:00Z,0,0.2\n"); }), ErrorKind::Parse);
    EXPECT_EQ(kind_of([] { parse_records("2012-01-01T00:00:00Z,1,nan\n"); }), ErrorKind::Range);
    EXPECT_EQ(kind_of([] { parse_records("#obs v2\n"); }), ErrorKind::Parse);
}

TEST(Ingest, Validate) {
    const IceObservation ok{1, at("2012-01-01T00:00:00Z"), 0.5};
    EXPECT_EQ(&validate(ok), &ok);
    EXPECT_EQ(kind_of([] { validate({1, at("2012-01-01T06:00:00Z"), 0.5}); }), ErrorKind::Timestamp);
    EXPECT_EQ(kind_of([] { validate({1, at("2012-01-01T00:00:00Z"), -0.1}); }), ErrorKind::Range);
    EXPECT_EQ(kind_of([] { validate({0, at("2012-01-01T00:00:00Z"), 0.1}); }), ErrorKind::Range);
    EXPECT_EQ(kind_of([] { validate({1, Instant(parse_day("9999-12-31") + std::chrono::days(1)), 0.1}); }),
              ErrorKind::Timestamp);
    EXPECT_EQ(coerce_midnight({1, at("2012-01-01T06:30:00Z"), 0.5}).timestamp, at("2012-01-01T00:00:00Z"));
}

TEST(Ingest, SortByIntervalOrdersAndFilters) {
    const std::vector<IceObservation> recs{{1, at("2012-01-03T00:00:00Z"), 0.3},
                                           {2, at("2012-01-02T00:00:00Z"), 0.9},
                                           {1, at("2012-01-01T00:00:00Z"), 0.1},
                                           {1, at("2012-01-02T00:00:00Z"), 0.2}};
    const auto out = sort_by_interval(recs, SeriesQuery::make(1, day("2012-01-01"), day("2012-01-03")));
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(out[0].concentration, 0.1);
    EXPECT_EQ(out[1].concentration, 0.2);
    EXPECT_EQ(out[2].concentration, 0.3);
    EXPECT_TRUE(sort_by_interval(recs, SeriesQuery::make(1, day("2013-01-01"), day("2013-02-01"))).empty());
    EXPECT_THROW(SeriesQuery::make(1, day("2012-02-01"), day("2012-01-01")), Error);
}

TEST(Ingest, Dedupe) {
    const IceObservation a{1, at("2012-01-01T00:00:00Z"), 0.5};
    EXPECT_EQ(dedupe({a, a}).size(), 1u);
    try {
        dedupe({a, {1, at("2012-01-01T00:00:00Z"), 0.6}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IntegrityConflict);
        EXPECT_NE(std::string(e.what()).find("0.5"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("0.6"), std::string::npos);
    }
    const std::vector<IceObservation> unique{a, {1, at("2012-01-02T00:00:00Z"), 0.6}, {2, a.timestamp, 0.1}};
    EXPECT_EQ(dedupe(unique), unique);
}

std::vector<IceObservation> random_records(std::mt19937_64& rng, std::size_t count) {
    std::uniform_int_distribution<int> point(1, 4);
    std::uniform_int_distribution<int> offset(0, 600);
    std::uniform_real_distribution<double> value(0.0, 1.0);
    const Day base = parse_day("2012-01-01");
    std::vector<IceObservation> out;
    for (std::size_t i = 0; i < count; ++i) {
        double v = value(rng);
        if (i % 17 == 0) v = 0.0;
        if (i % 19 == 0) v = 1.0;
        out.push_back({static_cast<PointId>(point(rng)), Instant(base + std::chrono::days(offset(rng))), v});
    }
    return out;
}

TEST(IngestProperty, SerializeParseIsIdentity) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto recs = random_records(rng, 1 + trial * 7);
        EXPECT_EQ(parse_records(serialize_records(recs)), recs);
    }
}

TEST(IngestProperty, SortByIntervalMatchesFilterThenSortOracle) {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> offset(0, 600);
    const Day base = parse_day("2012-01-01");
    for (int trial = 0; trial < 40; ++trial) {
        const auto recs = random_records(rng, static_cast<std::size_t>(trial * 25));
        Day lo = base + std::chrono::days(offset(rng));
        Day hi = base + std::chrono::days(offset(rng));
        if (lo > hi) std::swap(lo, hi);
        const SeriesQuery q = SeriesQuery::make(1 + trial % 4, lo, hi);

        std::vector<IceObservation> expected;
        for (const auto& r : recs)
            if (r.point_id == q.point_id && r.day() >= lo && r.day() <= hi) expected.push_back(r);
        // insertion sort keeps equal timestamps in input order
        for (std::size_t i = 1; i < expected.size(); ++i)
            for (std::size_t j = i; j > 0 && expected[j].timestamp < expected[j - 1].timestamp; --j)
                std::swap(expected[j], expected[j - 1]);

        const auto got = sort_by_interval(recs, q);
        ASSERT_EQ(got, expected);
        ASSERT_TRUE(std::is_sorted(got.begin(), got.end(),
                                   [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; }));
    }
}

TEST(IngestProperty, DedupeIsIdempotentAndValidateDoesNotMutate) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        auto recs = random_records(rng, 200);
        // Duplicate a few records exactly, then drop conflicting keys.
        for (std::size_t i = 0; i < 20; ++i) recs.push_back(recs[i * 3]);
        sort_by_key(recs);
        std::vector<IceObservation> clean;
        for (const auto& r : recs)
            if (clean.empty() || clean.back().point_id != r.point_id || clean.back().timestamp != r.timestamp ||
                clean.back().concentration == r.concentration)
                clean.push_back(r);
        const auto once = dedupe(clean);
        EXPECT_EQ(dedupe(once), once);
        for (const auto& r : once) {
            const IceObservation copy = r;
            validate(r);
            EXPECT_EQ(r, copy);
        }
    }
}

TEST(Dates, RoundTripAndRejects) {
    EXPECT_EQ(format_timestamp(at("2013-08-24T00:00:00Z")), "2013-08-24T00:00:00Z");
    EXPECT_EQ(format_timestamp(at("2012-02-29T23:59:58Z")), "2012-02-29T23:59:58Z");
    EXPECT_EQ(format_day(day("2012-01-01") + std::chrono::days(601 - 1)), "2013-08-23");
    EXPECT_THROW(parse_day("2013-02-29"), Error);
    EXPECT_THROW(parse_timestamp("2012-01-01 00:00:00"), Error);
    EXPECT_THROW(parse_timestamp("2012-01-01T24:00:00Z"), Error);
}

}  // namespace
}  // namespace icecast
