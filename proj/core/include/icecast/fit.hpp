#pragma once

#include <vector>

#include "icecast/kalman.hpp"

namespace icecast {

struct FitOptions {
    int max_iterations = 500;
    double relative_tolerance = 1e-8;
    double variance_floor = 1e-12;
    std::size_t min_observations = 10;
};

struct FitResult {
    StateSpaceModel model;           // fitted q and r
    FilterState init;                // prior the likelihood was evaluated from
    double log_likelihood = 0.0;     // == kf_filter(series, model, init).log_likelihood
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;       // best-so-far log-likelihood after each iteration
};

// Log-likelihood of `series` under `model`, started from initial_state().
double series_log_likelihood(const DailySeries& series, const StateSpaceModel& model);

// Maximum-likelihood estimate of the variance components and r.
//
// Parameters are searched as natural logs, floored at options.variance_floor,
// with a Nelder-Mead simplex (reflection 1, expansion 2, contraction 1/2,
// shrink 1/2).  Every log-variance starts at ln(max(var(dy)/2, 1e-8)) where dy
// are the day-to-day differences of consecutive observations, with a unit
// step per axis for the initial simplex.  The search stops when the simplex's
// log-likelihood spread falls below relative_tolerance * max(1, |best|),
// after one restart from the best vertex, or after max_iterations.
//
// Throws InsufficientData (< min_observations observed days) and Model when
// the starting likelihood is not finite.
FitResult fit(const DailySeries& series, ModelKind kind, int harmonics = 0, double seasonal_period = 365.25,
              const FitOptions& options = {});

}  // namespace icecast
