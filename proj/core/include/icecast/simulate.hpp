#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "icecast/kalman.hpp"

namespace icecast {

// Standard normal draws from std::mt19937_64 via the Box-Muller transform.
// Both pieces are fully specified, so a seed gives the same stream on every
// conforming platform (std::normal_distribution is implementation-defined).
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
    double next();

private:
    double uniform_open();  // (0, 1)

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Initial state for simulation: level, slope (Trend only) and the first
// harmonic's cosine amplitude; every other component starts at zero.
Eigen::VectorXd make_initial_state(const StateSpaceModel& model, double level, double slope = 0.0,
                                   double amplitude = 0.0);

// Draws `days` observations.  x[0] = initial_state exactly; per day the
// observation noise is drawn first, then one state-noise draw per state
// dimension (always drawn, even for zero variances).
std::vector<double> simulate(const StateSpaceModel& model, const Eigen::VectorXd& initial_state, int days,
                             std::uint64_t seed);

}  // namespace icecast
