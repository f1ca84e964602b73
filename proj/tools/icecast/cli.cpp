#include "icecast_cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "icecast/icecast.hpp"
#include "icecast_cli/plot.hpp"

namespace icecast::cli {
namespace {

constexpr const char* kExitCodesHelp =
    "Exit codes: 0 ok, 1 usage error, 2 data error (bad input, store corruption,\n"
    "integrity conflict, fetch failure), 3 model error (insufficient data,\n"
    "degenerate model).";

// Bad flag values discovered after CLI11 parsing; always exit 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return kExitUsage;
        case ErrorKind::DegenerateModel:
        case ErrorKind::InsufficientData:
        case ErrorKind::Model: return kExitModel;
        default: return kExitData;
    }
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f || !(f << text) || !f.flush()) throw Error(ErrorKind::Io, "cannot write " + path);
}

// Writes to `path`, or to `out` when path is empty or "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") out << text;
    else write_text(path, text);
}

std::optional<Day> day_flag(const std::string& name, const std::string& text) {
    if (text.empty()) return std::nullopt;
    try {
        return parse_day(text);
    } catch (const Error&) {
        throw UsageError("--" + name + " expects YYYY-MM-DD, got '" + text + "'");
    }
}

struct Globals {
    std::string store;
    std::string grid;

    void need_store() const {
        if (store.empty()) throw UsageError("--store <dir> is required for this command");
    }
    GridModel load_grid() const { return grid.empty() ? paper_fixture_grid() : parse_grid(read_text(grid)); }
};

SeriesQuery window(PointId point, const std::string& from, const std::string& to) {
    const Day lo = day_flag("from", from).value_or(Day(std::chrono::year{1} / 1 / 1));
    const Day hi = day_flag("to", to).value_or(Day(std::chrono::year{9999} / 12 / 31));
    if (point == 0) throw UsageError("--point must be positive");
    if (lo > hi) throw UsageError("--from is after --to");
    return SeriesQuery::make(point, lo, hi);
}

// ---- ingest ---------------------------------------------------------------

struct IngestOptions {
    std::string file;
    bool coerce_midnight = false;
};

int cmd_ingest(const Globals& g, const IngestOptions& o, std::ostream& out) {
    g.need_store();
    auto records = parse_records(read_text(o.file));
    if (o.coerce_midnight)
        for (auto& r : records) r = coerce_midnight(std::move(r));
    for (const auto& r : records) validate(r);
    sort_by_key(records);
    const auto unique = dedupe(records);
    Store store = Store::open(g.store);
    const std::size_t appended = store.append_records(unique);
    out << "appended " << appended << " (read " << records.size() << ", skipped " << records.size() - appended
        << ", errors 0)\n";
    return kExitOk;
}

// ---- fetch ----------------------------------------------------------------

struct FetchOptions {
    std::string endpoint;
    PointId point = 0;
    std::string from, to;
    double timeout = 10.0;
};

int cmd_fetch(const Globals& g, const FetchOptions& o, std::ostream& out) {
    std::string endpoint = o.endpoint;
    if (endpoint.empty())
        if (const char* env = std::getenv("ICECAST_ENDPOINT")) endpoint = env;
    if (endpoint.empty()) throw UsageError("no endpoint: pass --endpoint or set ICECAST_ENDPOINT");
    if (o.from.empty() || o.to.empty()) throw UsageError("fetch needs --from and --to");
    const SeriesQuery q = window(o.point, o.from, o.to);

    auto records = fetch_series(endpoint, q, o.timeout);
    if (g.store.empty()) {
        out << serialize_records(records);
        return kExitOk;
    }
    sort_by_key(records);
    Store store = Store::open(g.store);
    const std::size_t appended = store.append_records(dedupe(records));
    out << "appended " << appended << " (fetched " << records.size() << ")\n";
    return kExitOk;
}

// ---- query / plot ---------------------------------------------------------

struct QueryOptions {
    PointId point = 0;
    std::string from, to;
    std::string format = "obs";
};

int cmd_query(const Globals& g, const QueryOptions& o, std::ostream& out) {
    const SeriesQuery q = window(o.point, o.from, o.to);
    g.need_store();
    const auto records = Store::open(g.store).query_range(q);
    if (o.format == "json") {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : records)
            arr.push_back({{"timestamp", format_timestamp(r.timestamp)},
                           {"point_id", r.point_id},
                           {"concentration", r.concentration}});
        out << arr.dump() << '\n';
    } else if (!records.empty()) {
        out << serialize_records(records);
    }
    return kExitOk;
}

struct PlotOptions {
    PointId point = 0;
    std::string from, to;
    bool ascii = false;
    std::string out_file;
    int width = 72;
};

int cmd_plot(const Globals& g, const PlotOptions& o, std::ostream& out, std::ostream& err) {
    const SeriesQuery q = window(o.point, o.from, o.to);
    if (!o.ascii && o.out_file.empty()) throw UsageError("plot needs --ascii or --out <file.svg>");
    g.need_store();
    const auto records = Store::open(g.store).query_range(q);
    if (records.empty()) {
        err << "error: no observations for point " << o.point << " in the requested window\n";
        return kExitData;
    }
    if (o.ascii) out << render_ascii(records, o.width);
    if (!o.out_file.empty()) {
        write_text(o.out_file, render_svg(records));
        out << "wrote " << o.out_file << " (" << records.size() << " observations)\n";
    }
    return kExitOk;
}

// ---- fit / forecast -------------------------------------------------------

struct FitOptionsCli {
    std::vector<PointId> points;
    std::string kind = "level";
    int seasonal = 0;
    double period = 365.25;
    std::string from, to;
    std::string out_file;
};

int cmd_fit(const Globals& g, const FitOptionsCli& o, std::ostream& out) {
    const ModelKind kind = [&] {
        try {
            return parse_model_kind(o.kind);
        } catch (const Error& e) {
            throw UsageError(e.message());
        }
    }();
    if (o.seasonal < 0) throw UsageError("--seasonal must be >= 0");
    if (!(o.period > 0.0)) throw UsageError("--period must be positive");
    day_flag("from", o.from);
    day_flag("to", o.to);
    g.need_store();

    const Store store = Store::open(g.store);
    std::vector<PointId> points = o.points;
    if (points.empty()) {
        if (!g.grid.empty()) {
            const GridModel grid = g.load_grid();
            for (const auto& p : grid.points()) points.push_back(p.id);
        } else {
            points = store.point_ids();
        }
    }
    if (points.empty()) throw Error(ErrorKind::InsufficientData, "store holds no observations");

    std::vector<ModelDocument> docs;
    for (PointId p : points) {
        const auto records = store.query_range(window(p, o.from, o.to));
        if (records.empty())
            throw Error(ErrorKind::InsufficientData, "no observations for point " + std::to_string(p));
        const DailySeries series = to_daily_series(records);
        ModelDocument doc;
        doc.point_id = p;
        try {
            doc.fit = fit(series, kind, o.seasonal, o.period);
        } catch (const Error& e) {
            throw Error(e.kind(), "point " + std::to_string(p) + ": " + e.message());
        }
        doc.final_state = kf_filter(series.values, doc.fit.model, doc.fit.init).filtered.back();
        doc.final_state.t = 0;
        doc.final_day = series.end();
        docs.push_back(std::move(doc));
    }
    const std::string text = serialize_models(docs);
    emit(o.out_file, text, out);
    if (!o.out_file.empty() && o.out_file != "-") {
        for (const auto& d : docs)
            out << "point " << d.point_id << ": log_likelihood=" << format_sig9(d.fit.log_likelihood)
                << " iterations=" << d.fit.iterations << " converged=" << (d.fit.converged ? "true" : "false")
                << '\n';
    }
    return kExitOk;
}

std::vector<ModelDocument> load_models(const std::string& path) {
    if (path.empty()) throw UsageError("--model <file> is required");
    return parse_models(read_text(path));
}

struct ForecastOptions {
    std::string model;
    std::vector<PointId> points;
    int horizon = 0;
    std::string out_file;
};

int cmd_forecast(const ForecastOptions& o, std::ostream& out) {
    if (o.horizon < 1) throw UsageError("--horizon must be >= 1");
    const auto docs = load_models(o.model);
    std::string text;
    bool any = false;
    for (const auto& d : docs) {
        if (!o.points.empty() && std::find(o.points.begin(), o.points.end(), d.point_id) == o.points.end())
            continue;
        any = true;
        text += "#forecast v1 point=" + std::to_string(d.point_id) + " origin=" + format_day(d.final_day) + '\n';
        for (const Forecast& f : forecast(d.final_state, d.fit.model, o.horizon)) {
            text += format_day(d.final_day + std::chrono::days(f.horizon)) + ',' + format_sig9(f.mean) + ',' +
                    format_sig9(f.variance) + ',' + format_sig9(f.mean_clipped) + '\n';
        }
    }
    if (!any) throw Error(ErrorKind::MissingModel, "no model for the requested point(s)");
    emit(o.out_file, text, out);
    return kExitOk;
}

// ---- risk / route ---------------------------------------------------------

struct RiskOptions {
    std::string model;
    int horizon = 0;
    std::string date;
    double threshold = kDefaultIceThreshold;
    std::vector<double> bands;
    std::string out_file;
};

int cmd_risk(const Globals& g, const RiskOptions& o, std::ostream& out) {
    if (!(o.threshold > 0.0 && o.threshold < 1.0)) throw UsageError("--threshold must lie in (0, 1)");
    const auto target = day_flag("date", o.date);
    if ((o.horizon > 0) == target.has_value()) throw UsageError("give exactly one of --horizon or --date");
    HazardThresholds bands;
    if (!o.bands.empty()) {
        if (o.bands.size() != 3 || !(0.0 < o.bands[0] && o.bands[0] < o.bands[1] && o.bands[1] < o.bands[2] &&
                                     o.bands[2] <= 1.0))
            throw UsageError("--bands expects three increasing values in (0, 1]");
        bands = {o.bands[0], o.bands[1], o.bands[2]};
    }
    const GridModel grid = g.load_grid();
    const auto docs = load_models(o.model);

    std::map<PointId, PointModel> models;
    std::map<PointId, Day> origins;
    for (const auto& d : docs) {
        models[d.point_id] = {d.fit.model, d.final_state};
        origins[d.point_id] = d.final_day;
    }

    RiskField field;
    if (target) {
        // Per-point horizon: each model is run from its own origin to the date.
        field.target_date = *target;
        field.threshold = o.threshold;
        for (const auto& p : grid.points()) {
            const auto it = models.find(p.id);
            if (it == models.end())
                throw Error(ErrorKind::MissingModel, "no fitted model for point " + std::to_string(p.id));
            const int h = static_cast<int>((*target - origins[p.id]).count());
            if (h < 1)
                throw Error(ErrorKind::InvalidArgument, "--date must be after the model origin " +
                                                            format_day(origins[p.id]) + " of point " +
                                                            std::to_string(p.id));
            std::map<PointId, PointModel> one{{p.id, it->second}};
            const RiskField single =
                build_risk_field(GridModel({p}), one, h, o.threshold, *target, bands);
            field.cells.insert(single.cells.begin(), single.cells.end());
        }
    } else {
        std::optional<Day> origin;
        for (const auto& p : grid.points()) {
            const auto it = origins.find(p.id);
            if (it == origins.end()) continue;  // reported by build_risk_field
            if (origin && *origin != it->second)
                throw Error(ErrorKind::InvalidArgument, "models end on different days; use --date");
            origin = it->second;
        }
        const Day when = origin.value_or(Day{}) + std::chrono::days(o.horizon);
        field = build_risk_field(grid, models, o.horizon, o.threshold, when, bands);
    }
    emit(o.out_file, serialize_risk_field(field), out);
    return kExitOk;
}

struct RouteOptions {
    std::string riskfield;
    PointId start = 0;
    PointId goal = 0;
    std::vector<PointId> path;
};

int cmd_route(const Globals& g, const RouteOptions& o, std::ostream& out) {
    if (o.riskfield.empty()) throw UsageError("--riskfield <file> is required");
    if (o.path.empty() && (o.start == 0 || o.goal == 0))
        throw UsageError("give --start and --goal, or --path");
    const GridModel grid = g.load_grid();
    const RiskField field = parse_risk_field(read_text(o.riskfield));
    const Route route = o.path.empty() ? best_route(grid, field, o.start, o.goal) : route_risk(grid, o.path, field);
    out << format_route(route) << '\n';
    return kExitOk;
}

// ---- synth / verify -------------------------------------------------------

struct SynthOptions {
    std::uint64_t seed = 0;
    int days = 0;
    std::string start = "2012-01-01";
    std::vector<PointId> points{1};
    std::string kind = "level";
    int seasonal = 0;
    double period = 365.25;
    double level = 0.5;
    double slope = 0.0;
    double amplitude = 0.0;
    double q = 1e-4;
    double r = 1e-3;
    std::string out_file;
};

int cmd_synth(const SynthOptions& o, std::ostream& out) {
    if (o.days < 1) throw UsageError("--days must be >= 1");
    if (o.q < 0.0 || o.r < 0.0) throw UsageError("--q and --r must be non-negative");
    if (o.seasonal < 0 || !(o.period > 0.0)) throw UsageError("bad seasonal specification");
    if (o.amplitude != 0.0 && o.seasonal == 0) throw UsageError("--amplitude needs --seasonal >= 1");
    const Day start = *day_flag("start", o.start);
    for (PointId p : o.points)
        if (p == 0) throw UsageError("point ids must be positive");

    StateSpaceModel model;
    try {
        model = build_model(parse_model_kind(o.kind), o.seasonal, o.period);
        std::vector<double> comps(static_cast<std::size_t>(model.variance_components()), o.q);
        model = model.with_variances(comps, o.r);
    } catch (const Error& e) {
        throw UsageError(e.message());
    }
    const Eigen::VectorXd x0 = make_initial_state(model, o.level, o.slope, o.amplitude);

    std::vector<IceObservation> records;
    for (PointId p : o.points) {
        // Point p draws from stream seed + (p - 1).
        const auto values = simulate(model, x0, o.days, o.seed + (p - 1));
        for (int t = 0; t < o.days; ++t) {
            const double v = parse_double(format_sig9(std::clamp(values[t], 0.0, 1.0)));
            records.push_back({p, Instant(start + std::chrono::days(t)), v, "synth"});
        }
    }
    sort_by_key(records);
    emit(o.out_file, serialize_records(records), out);
    return kExitOk;
}

int cmd_verify(const Globals& g, std::ostream& out) {
    g.need_store();
    if (!std::filesystem::is_directory(g.store)) throw Error(ErrorKind::Io, "no store at " + g.store);
    const IntegrityReport report = verify_store(g.store);
    out << "segments=" << report.segments_checked << " records=" << report.records_checked
        << " failures=" << report.failures.size() << '\n';
    for (const auto& f : report.failures) out << f.file.string() << ':' << f.line << ": " << f.reason << '\n';
    return report.clean() ? kExitOk : kExitData;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"icecast: sea-ice concentration store, state-space forecasting and route risk"};
    app.footer(kExitCodesHelp);
    app.require_subcommand(1);

    Globals g;
    app.add_option("--store", g.store, "Observation store directory");
    app.add_option("--grid", g.grid, "Grid file (#grid v1); default is the four-point route grid");

    IngestOptions ingest;
    auto* s_ingest = app.add_subcommand("ingest", "Parse, validate, deduplicate and append an #obs v1 file");
    s_ingest->add_option("file", ingest.file, "Observation file")->required();
    s_ingest->add_flag("--coerce-midnight", ingest.coerce_midnight, "Truncate timestamps to 00:00:00Z");

    FetchOptions fetch_o;
    auto* s_fetch = app.add_subcommand("fetch", "Fetch one point's series over HTTP (into --store if given)");
    s_fetch->add_option("--endpoint", fetch_o.endpoint, "Base URL (default: $ICECAST_ENDPOINT)");
    s_fetch->add_option("--point", fetch_o.point)->required();
    s_fetch->add_option("--from", fetch_o.from, "YYYY-MM-DD");
    s_fetch->add_option("--to", fetch_o.to, "YYYY-MM-DD");
    s_fetch->add_option("--timeout", fetch_o.timeout, "Seconds");

    QueryOptions query;
    auto* s_query = app.add_subcommand("query", "Print one point's stored observations");
    s_query->add_option("--point", query.point)->required();
    s_query->add_option("--from", query.from, "YYYY-MM-DD (inclusive)");
    s_query->add_option("--to", query.to, "YYYY-MM-DD (inclusive)");
    s_query->add_option("--format", query.format)->check(CLI::IsMember({"obs", "json"}));

    PlotOptions plot;
    auto* s_plot = app.add_subcommand("plot", "Chart one point's series (SVG or terminal)");
    s_plot->add_option("--point", plot.point)->required();
    s_plot->add_option("--from", plot.from);
    s_plot->add_option("--to", plot.to);
    s_plot->add_flag("--ascii", plot.ascii, "Print a terminal chart");
    s_plot->add_option("--out", plot.out_file, "Write an SVG file");
    s_plot->add_option("--width", plot.width, "Terminal chart width")->check(CLI::Range(8, 1000));

    FitOptionsCli fit_o;
    auto* s_fit = app.add_subcommand("fit", "Fit state-space models (all points unless --point)");
    s_fit->add_option("--point", fit_o.points)->delimiter(',');
    s_fit->add_option("--kind", fit_o.kind, "level | trend");
    s_fit->add_option("--seasonal", fit_o.seasonal, "Number of seasonal harmonics");
    s_fit->add_option("--period", fit_o.period, "Seasonal period in days");
    s_fit->add_option("--from", fit_o.from);
    s_fit->add_option("--to", fit_o.to);
    s_fit->add_option("--out", fit_o.out_file, "Model file (#icemodel v1); stdout if omitted");

    ForecastOptions fc;
    auto* s_forecast = app.add_subcommand("forecast", "Predictive mean/variance for 1..h days ahead");
    s_forecast->add_option("--model", fc.model)->required();
    s_forecast->add_option("--point", fc.points)->delimiter(',');
    s_forecast->add_option("--horizon", fc.horizon)->required();
    s_forecast->add_option("--out", fc.out_file);

    RiskOptions risk;
    auto* s_risk = app.add_subcommand("risk", "Per-cell exceedance probabilities and hazard classes");
    s_risk->add_option("--model", risk.model)->required();
    s_risk->add_option("--horizon", risk.horizon, "Days after the models' common origin");
    s_risk->add_option("--date", risk.date, "Target day YYYY-MM-DD");
    s_risk->add_option("--threshold", risk.threshold, "Navigability concentration threshold");
    s_risk->add_option("--bands", risk.bands, "Moderate,High,Extreme lower bounds")->delimiter(',');
    s_risk->add_option("--out", risk.out_file);

    RouteOptions route;
    auto* s_route = app.add_subcommand("route", "Minimum-risk route over a risk field");
    s_route->add_option("--riskfield", route.riskfield)->required();
    s_route->add_option("--start", route.start);
    s_route->add_option("--goal", route.goal);
    s_route->add_option("--path", route.path, "Score this explicit path instead")->delimiter(',');

    SynthOptions synth;
    auto* s_synth = app.add_subcommand("synth", "Simulate observations from a state-space model");
    s_synth->add_option("--seed", synth.seed)->required();
    s_synth->add_option("--days", synth.days)->required();
    s_synth->add_option("--start", synth.start, "First day");
    s_synth->add_option("--point", synth.points, "Point ids")->delimiter(',');
    s_synth->add_option("--kind", synth.kind);
    s_synth->add_option("--seasonal", synth.seasonal);
    s_synth->add_option("--period", synth.period);
    s_synth->add_option("--level", synth.level);
    s_synth->add_option("--slope", synth.slope);
    s_synth->add_option("--amplitude", synth.amplitude);
    s_synth->add_option("--q", synth.q, "State noise variance per component");
    s_synth->add_option("--r", synth.r, "Observation noise variance");
    s_synth->add_option("--out", synth.out_file);

    auto* s_verify = app.add_subcommand("verify", "Recompute every store checksum");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (s_ingest->parsed()) return cmd_ingest(g, ingest, out);
        if (s_fetch->parsed()) return cmd_fetch(g, fetch_o, out);
        if (s_query->parsed()) return cmd_query(g, query, out);
        if (s_plot->parsed()) return cmd_plot(g, plot, out, err);
        if (s_fit->parsed()) return cmd_fit(g, fit_o, out);
        if (s_forecast->parsed()) return cmd_forecast(fc, out);
        if (s_risk->parsed()) return cmd_risk(g, risk, out);
        if (s_route->parsed()) return cmd_route(g, route, out);
        if (s_synth->parsed()) return cmd_synth(synth, out);
        if (s_verify->parsed()) return cmd_verify(g, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace icecast::cli
