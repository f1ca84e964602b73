#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "icecast/dates.hpp"
#include "icecast/ingest.hpp"

namespace icecast {

enum class ModelKind { Level, Trend, Custom };

std::string_view to_string(ModelKind kind) noexcept;
ModelKind parse_model_kind(std::string_view text);

// Linear-Gaussian state-space model
//   x[t] = F x[t-1] + w,  w ~ N(0, diag(q))
//   y[t] = H x[t]   + v,  v ~ N(0, r)
// Structural models stack a level (and slope for Trend) with `harmonics`
// seasonal rotation blocks; every block contributes 1 to the observation.
struct StateSpaceModel {
    ModelKind kind = ModelKind::Level;
    int harmonics = 0;
    double seasonal_period = 365.25;
    Eigen::MatrixXd F;
    Eigen::RowVectorXd H;
    Eigen::VectorXd q;  // diagonal of Q
    double r = 0.0;

    Eigen::Index dim() const noexcept { return F.rows(); }
    Eigen::MatrixXd Q() const { return q.asDiagonal(); }

    // Throws InvalidArgument on inconsistent shapes, negative or non-finite
    // variances.
    void check() const;

    // Variance components shared by blocks of state: level, slope (Trend),
    // then one per harmonic.  Custom models have one component per state.
    int variance_components() const noexcept;
    // Returns a copy whose q is set from per-component variances.
    StateSpaceModel with_variances(std::span<const double> component_variances, double obs_variance) const;
    std::vector<double> component_variances() const;
};

// Level: F=[1], H=[1].  Trend: F=[[1,1],[0,1]], H=[1,0].  Harmonic j adds
// the block [[cos a, -sin a], [sin a, cos a]] with a = 2*pi*j/period and
// appends [1, 0] to H.  Variances start at zero.
StateSpaceModel build_model(ModelKind kind, int harmonics = 0, double seasonal_period = 365.25);

// Arbitrary F/H/q/r, used for oracle checks.  Validated with check().
StateSpaceModel make_custom_model(Eigen::MatrixXd F, Eigen::RowVectorXd H, Eigen::VectorXd q, double r);

struct FilterState {
    Eigen::VectorXd m;
    Eigen::MatrixXd P;
    long t = -1;  // day index; -1 is the prior before the first day
};

// Prior used everywhere a model is run on data: level component at the first
// observed value, everything else 0, P = I.
FilterState initial_state(const StateSpaceModel& model, double first_value);

FilterState kf_predict(const FilterState& state, const StateSpaceModel& model);

struct UpdateResult {
    FilterState state;
    double innovation = 0.0;
    double innovation_variance = 0.0;
    double log_density = 0.0;
};

// Throws DegenerateModel when H P H' + r <= 0.
UpdateResult kf_update(const FilterState& predicted, const StateSpaceModel& model, double y);

// Daily observations with gaps; values[i] belongs to start + i days.
struct DailySeries {
    Day start{};
    std::vector<std::optional<double>> values;

    std::size_t observed() const noexcept;
    std::optional<double> first_observed() const noexcept;
    Day end() const noexcept { return start + std::chrono::days(static_cast<long>(values.size()) - 1); }
};

// Lays out single-point observations (any order) on a daily axis from the
// first to the last day.  Throws InvalidArgument for mixed points or empty input.
DailySeries to_daily_series(const std::vector<IceObservation>& records);

struct FilterResult {
    std::vector<FilterState> predicted;  // x[t] | y[0..t-1]
    std::vector<FilterState> filtered;   // x[t] | y[0..t]
    double log_likelihood = 0.0;
    std::size_t observed = 0;
};

// Predicts every day and updates on observed days only; gap days add no
// likelihood term.
FilterResult kf_filter(std::span<const std::optional<double>> series, const StateSpaceModel& model,
                       const FilterState& init);

// Rauch-Tung-Striebel backward pass.  Throws DegenerateModel when a
// predicted covariance cannot be inverted.
std::vector<FilterState> kf_smooth(const FilterResult& filtered, const StateSpaceModel& model);

struct Forecast {
    int horizon = 1;
    double mean = 0.0;      // unclipped observation-space mean
    double variance = 0.0;  // H P H' + r
    double mean_clipped = 0.0;
};

// h-step predictive distributions from `state`, one per step 1..h.
std::vector<Forecast> forecast(const FilterState& state, const StateSpaceModel& model, int horizon);

}  // namespace icecast
