#include "icecast/kalman.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "icecast/error.hpp"

namespace icecast {

std::string_view to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::Level: return "level";
        case ModelKind::Trend: return "trend";
        case ModelKind::Custom: return "custom";
    }
    return "custom";
}

ModelKind parse_model_kind(std::string_view text) {
    if (text == "level") return ModelKind::Level;
    if (text == "trend") return ModelKind::Trend;
    throw Error(ErrorKind::InvalidArgument, "unknown model kind '" + std::string(text) + "'");
}

namespace {

int trend_states(ModelKind kind) { return kind == ModelKind::Trend ? 2 : 1; }

// Map state index -> variance component.
std::vector<int> component_map(const StateSpaceModel& model) {
    const auto n = static_cast<int>(model.dim());
    std::vector<int> map(static_cast<std::size_t>(n));
    if (model.kind == ModelKind::Custom) {
        for (int i = 0; i < n; ++i) map[i] = i;
        return map;
    }
    const int base = trend_states(model.kind);
    for (int i = 0; i < n; ++i) map[i] = i < base ? i : base + (i - base) / 2;
    return map;
}

void symmetrize(Eigen::MatrixXd& P) {
    P = 0.5 * (P + P.transpose()).eval();
    for (Eigen::Index i = 0; i < P.rows(); ++i) {
        if (P(i, i) < -1e-12)
            throw Error(ErrorKind::DegenerateModel, "covariance lost positivity (diagonal " +
                                                        std::to_string(P(i, i)) + ")");
        if (P(i, i) < 0.0) P(i, i) = 0.0;
    }
}

void check_state(const FilterState& state, const StateSpaceModel& model) {
    if (state.m.size() != model.dim() || state.P.rows() != model.dim() || state.P.cols() != model.dim())
        throw Error(ErrorKind::InvalidArgument, "filter state dimension does not match the model");
}

}  // namespace

void StateSpaceModel::check() const {
    const auto n = F.rows();
    if (n < 1 || F.cols() != n || H.size() != n || q.size() != n)
        throw Error(ErrorKind::InvalidArgument, "state-space dimensions are inconsistent");
    if (!F.allFinite() || !H.allFinite() || !q.allFinite() || !std::isfinite(r))
        throw Error(ErrorKind::InvalidArgument, "state-space parameters must be finite");
    if ((q.array() < 0.0).any() || r < 0.0)
        throw Error(ErrorKind::InvalidArgument, "variances must be non-negative");
    if (!(seasonal_period > 0.0)) throw Error(ErrorKind::InvalidArgument, "seasonal period must be positive");
}

int StateSpaceModel::variance_components() const noexcept {
    if (kind == ModelKind::Custom) return static_cast<int>(dim());
    return trend_states(kind) + harmonics;
}

StateSpaceModel StateSpaceModel::with_variances(std::span<const double> component_variances,
                                                double obs_variance) const {
    if (static_cast<int>(component_variances.size()) != variance_components())
        throw Error(ErrorKind::InvalidArgument, "wrong number of variance components");
    StateSpaceModel out = *this;
    const auto map = component_map(*this);
    for (Eigen::Index i = 0; i < dim(); ++i) out.q(i) = component_variances[map[i]];
    out.r = obs_variance;
    out.check();
    return out;
}

std::vector<double> StateSpaceModel::component_variances() const {
    std::vector<double> out(static_cast<std::size_t>(variance_components()), 0.0);
    const auto map = component_map(*this);
    for (Eigen::Index i = 0; i < dim(); ++i) out[map[i]] = q(i);
    return out;
}

StateSpaceModel build_model(ModelKind kind, int harmonics, double seasonal_period) {
    if (kind == ModelKind::Custom)
        throw Error(ErrorKind::InvalidArgument, "use make_custom_model for custom dynamics");
    if (harmonics < 0) throw Error(ErrorKind::InvalidArgument, "harmonic count must be >= 0");
    if (!(seasonal_period > 0.0) || !std::isfinite(seasonal_period))
        throw Error(ErrorKind::InvalidArgument, "seasonal period must be positive");

    const int base = trend_states(kind);
    const int n = base + 2 * harmonics;
    StateSpaceModel model;
    model.kind = kind;
    model.harmonics = harmonics;
    model.seasonal_period = seasonal_period;
    model.F = Eigen::MatrixXd::Zero(n, n);
    model.H = Eigen::RowVectorXd::Zero(n);
    model.q = Eigen::VectorXd::Zero(n);

    model.F(0, 0) = 1.0;
    model.H(0) = 1.0;
    if (kind == ModelKind::Trend) {
        model.F(0, 1) = 1.0;
        model.F(1, 1) = 1.0;
    }
    for (int j = 1; j <= harmonics; ++j) {
        const int k = base + 2 * (j - 1);
        const double angle = 2.0 * std::numbers::pi * j / seasonal_period;
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        model.F(k, k) = c;
        model.F(k, k + 1) = -s;
        model.F(k + 1, k) = s;
        model.F(k + 1, k + 1) = c;
        model.H(k) = 1.0;
    }
    return model;
}

StateSpaceModel make_custom_model(Eigen::MatrixXd F, Eigen::RowVectorXd H, Eigen::VectorXd q, double r) {
    StateSpaceModel model;
    model.kind = ModelKind::Custom;
    model.F = std::move(F);
    model.H = std::move(H);
    model.q = std::move(q);
    model.r = r;
    model.check();
    return model;
}

FilterState initial_state(const StateSpaceModel& model, double first_value) {
    FilterState s;
    s.m = Eigen::VectorXd::Zero(model.dim());
    s.m(0) = first_value;
    s.P = Eigen::MatrixXd::Identity(model.dim(), model.dim());
    s.t = -1;
    return s;
}

FilterState kf_predict(const FilterState& state, const StateSpaceModel& model) {
    check_state(state, model);
    FilterState out;
    out.m = model.F * state.m;
    out.P = model.F * state.P * model.F.transpose();
    out.P.diagonal() += model.q;
    symmetrize(out.P);
    out.t = state.t + 1;
    return out;
}

UpdateResult kf_update(const FilterState& predicted, const StateSpaceModel& model, double y) {
    check_state(predicted, model);
    if (!std::isfinite(y)) throw Error(ErrorKind::InvalidArgument, "observation must be finite");
    const Eigen::VectorXd PHt = predicted.P * model.H.transpose();
    const double S = model.H.dot(PHt) + model.r;
    if (!(S > 0.0))
        throw Error(ErrorKind::DegenerateModel,
                    "innovation variance " + std::to_string(S) + " at day " + std::to_string(predicted.t));
    const double nu = y - model.H.dot(predicted.m);
    const Eigen::VectorXd K = PHt / S;

    UpdateResult out;
    out.state.t = predicted.t;
    out.state.m = predicted.m + K * nu;
    const auto n = model.dim();
    out.state.P = (Eigen::MatrixXd::Identity(n, n) - K * model.H) * predicted.P;
    symmetrize(out.state.P);
    out.innovation = nu;
    out.innovation_variance = S;
    out.log_density = -0.5 * (std::log(2.0 * std::numbers::pi * S) + nu * nu / S);
    return out;
}

std::size_t DailySeries::observed() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [](const auto& v) { return v.has_value(); }));
}

std::optional<double> DailySeries::first_observed() const noexcept {
    for (const auto& v : values)
        if (v) return v;
    return std::nullopt;
}

DailySeries to_daily_series(const std::vector<IceObservation>& records) {
    if (records.empty()) throw Error(ErrorKind::InvalidArgument, "no observations");
    const PointId point = records.front().point_id;
    Day lo = records.front().day();
    Day hi = lo;
    for (const auto& r : records) {
        if (r.point_id != point)
            throw Error(ErrorKind::InvalidArgument, "series mixes points " + std::to_string(point) + " and " +
                                                        std::to_string(r.point_id));
        lo = std::min(lo, r.day());
        hi = std::max(hi, r.day());
    }
    DailySeries series;
    series.start = lo;
    series.values.resize(static_cast<std::size_t>((hi - lo).count() + 1));
    for (const auto& r : records) series.values[static_cast<std::size_t>((r.day() - lo).count())] = r.concentration;
    return series;
}

FilterResult kf_filter(std::span<const std::optional<double>> series, const StateSpaceModel& model,
                       const FilterState& init) {
    model.check();
    FilterResult out;
    out.predicted.reserve(series.size());
    out.filtered.reserve(series.size());
    FilterState state = init;
    for (const auto& y : series) {
        FilterState pred = kf_predict(state, model);
        if (y) {
            UpdateResult upd = kf_update(pred, model, *y);
            out.log_likelihood += upd.log_density;
            ++out.observed;
            state = std::move(upd.state);
        } else {
            state = pred;
        }
        out.predicted.push_back(std::move(pred));
        out.filtered.push_back(state);
    }
    return out;
}

std::vector<FilterState> kf_smooth(const FilterResult& filtered, const StateSpaceModel& model) {
    const auto& F = filtered.filtered;
    const auto& Pr = filtered.predicted;
    std::vector<FilterState> out(F.size());
    if (F.empty()) return out;
    if (Pr.size() != F.size()) throw Error(ErrorKind::InvalidArgument, "predicted states missing");

    out.back() = F.back();
    for (std::size_t k = F.size() - 1; k-- > 0;) {
        const FilterState& cur = F[k];
        const FilterState& next_pred = Pr[k + 1];
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(next_pred.P);
        if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-14))
            throw Error(ErrorKind::DegenerateModel,
                        "singular predicted covariance at day " + std::to_string(next_pred.t));
        // G = P F' (P_pred)^-1, computed as (P_pred^-1 F P)'.
        const Eigen::MatrixXd G = ldlt.solve(model.F * cur.P).transpose();
        FilterState s;
        s.t = cur.t;
        s.m = cur.m + G * (out[k + 1].m - next_pred.m);
        s.P = cur.P + G * (out[k + 1].P - next_pred.P) * G.transpose();
        symmetrize(s.P);
        out[k] = std::move(s);
    }
    return out;
}

std::vector<Forecast> forecast(const FilterState& state, const StateSpaceModel& model, int horizon) {
    if (horizon < 1) throw Error(ErrorKind::InvalidArgument, "forecast horizon must be >= 1");
    model.check();
    std::vector<Forecast> out;
    out.reserve(static_cast<std::size_t>(horizon));
    FilterState s = state;
    for (int h = 1; h <= horizon; ++h) {
        s = kf_predict(s, model);
        Forecast f;
        f.horizon = h;
        f.mean = model.H.dot(s.m);
        f.variance = std::max(0.0, model.H.dot(s.P * model.H.transpose()) + model.r);
        f.mean_clipped = std::clamp(f.mean, 0.0, 1.0);
        out.push_back(f);
    }
    return out;
}

}  // namespace icecast
