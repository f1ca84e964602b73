#include <benchmark/benchmark.h>

#include <filesystem>
#include <unistd.h>

#include "icecast/store.hpp"

namespace icecast {
namespace {

namespace fs = std::filesystem;

std::vector<IceObservation> daily(PointId point, int days, int offset = 0) {
    std::vector<IceObservation> out;
    for (int t = 0; t < days; ++t)
        out.push_back({point, Instant(parse_day("2012-01-01") + std::chrono::days(t + offset)), 0.001 * (t % 1000), ""});
    return out;
}

fs::path scratch(const char* tag) {
    const fs::path p = fs::temp_directory_path() / ("icecast-bench-" + std::to_string(::getpid()) + "-" + tag);
    fs::remove_all(p);
    return p;
}

void BM_Append(benchmark::State& state) {
    const fs::path root = scratch("append");
    int batch = 0;
    for (auto _ : state) {
        Store store = Store::open(root);
        const auto records = daily(static_cast<PointId>(++batch), static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(store.append_records(records));
    }
    fs::remove_all(root);
}
BENCHMARK(BM_Append)->Arg(602)->Unit(benchmark::kMillisecond);

void BM_QueryRange(benchmark::State& state) {
    const fs::path root = scratch("query");
    {
        Store store = Store::open(root);
        for (PointId p = 1; p <= 4; ++p) store.append_records(daily(p, 602));
    }
    const Store store = Store::open(root);
    const auto q = SeriesQuery::make(3, parse_day("2012-06-01"), parse_day("2013-06-01"));
    for (auto _ : state) benchmark::DoNotOptimize(store.query_range(q).size());
    fs::remove_all(root);
}
BENCHMARK(BM_QueryRange);

void BM_Verify(benchmark::State& state) {
    const fs::path root = scratch("verify");
    {
        Store store = Store::open(root);
        for (PointId p = 1; p <= 4; ++p) store.append_records(daily(p, 602));
    }
    for (auto _ : state) benchmark::DoNotOptimize(verify_store(root).records_checked);
    fs::remove_all(root);
}
BENCHMARK(BM_Verify)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace icecast
