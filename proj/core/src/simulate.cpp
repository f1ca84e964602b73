#include "icecast/simulate.hpp"

#include <cmath>
#include <numbers>

#include "icecast/error.hpp"

namespace icecast {

double NormalStream::uniform_open() {
    // 53 random mantissa bits, shifted off zero.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double NormalStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

Eigen::VectorXd make_initial_state(const StateSpaceModel& model, double level, double slope, double amplitude) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(model.dim());
    x(0) = level;
    if (model.kind == ModelKind::Trend) x(1) = slope;
    if (model.harmonics > 0) {
        const Eigen::Index first = model.kind == ModelKind::Trend ? 2 : 1;
        x(first) = amplitude;
    }
    return x;
}

std::vector<double> simulate(const StateSpaceModel& model, const Eigen::VectorXd& initial_state, int days,
                             std::uint64_t seed) {
    model.check();
    if (days < 1) throw Error(ErrorKind::InvalidArgument, "days must be >= 1");
    if (initial_state.size() != model.dim() || !initial_state.allFinite())
        throw Error(ErrorKind::InvalidArgument, "initial state does not match the model");

    NormalStream noise(seed);
    const Eigen::VectorXd q_sd = model.q.cwiseSqrt();
    const double r_sd = std::sqrt(model.r);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(days));
    Eigen::VectorXd x = initial_state;
    Eigen::VectorXd w(model.dim());
    for (int t = 0; t < days; ++t) {
        out.push_back(model.H.dot(x) + r_sd * noise.next());
        for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = q_sd(i) * noise.next();
        x = model.F * x + w;
    }
    return out;
}

}  // namespace icecast
