#include "icecast/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "icecast/error.hpp"

namespace icecast {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Objective {
    const DailySeries& series;
    const StateSpaceModel& base;
    FilterState init;
    double log_floor;

    StateSpaceModel model_at(const Eigen::VectorXd& theta) const {
        const auto k = theta.size() - 1;
        std::vector<double> comps(static_cast<std::size_t>(k));
        for (Eigen::Index i = 0; i < k; ++i) comps[i] = std::exp(std::max(theta(i), log_floor));
        return base.with_variances(comps, std::exp(std::max(theta(k), log_floor)));
    }

    // Negative log-likelihood; +inf when the filter fails.
    double operator()(const Eigen::VectorXd& theta) const {
        try {
            const double ll = kf_filter(series.values, model_at(theta), init).log_likelihood;
            return std::isfinite(ll) ? -ll : kInf;
        } catch (const Error&) {
            return kInf;
        }
    }
};

double start_log_variance(const DailySeries& series) {
    std::vector<double> diffs;
    std::optional<double> prev;
    for (const auto& v : series.values) {
        if (v && prev) diffs.push_back(*v - *prev);
        if (v) prev = v;
    }
    double var = 0.0;
    if (diffs.size() > 1) {
        const double mean = std::accumulate(diffs.begin(), diffs.end(), 0.0) / static_cast<double>(diffs.size());
        for (double d : diffs) var += (d - mean) * (d - mean);
        var /= static_cast<double>(diffs.size() - 1);
    }
    return std::log(std::max(var / 2.0, 1e-8));
}

struct Simplex {
    std::vector<Eigen::VectorXd> x;
    std::vector<double> f;

    void order() {
        std::vector<std::size_t> idx(x.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
        std::vector<Eigen::VectorXd> xs;
        std::vector<double> fs;
        for (auto i : idx) {
            xs.push_back(x[i]);
            fs.push_back(f[i]);
        }
        x = std::move(xs);
        f = std::move(fs);
    }
};

Simplex make_simplex(const Eigen::VectorXd& centre, const Objective& objective) {
    Simplex s;
    s.x.push_back(centre);
    for (Eigen::Index i = 0; i < centre.size(); ++i) {
        Eigen::VectorXd v = centre;
        v(i) += 1.0;
        s.x.push_back(v);
    }
    for (const auto& v : s.x) s.f.push_back(objective(v));
    s.order();
    return s;
}

}  // namespace

double series_log_likelihood(const DailySeries& series, const StateSpaceModel& model) {
    const auto first = series.first_observed();
    if (!first) return 0.0;
    return kf_filter(series.values, model, initial_state(model, *first)).log_likelihood;
}

FitResult fit(const DailySeries& series, ModelKind kind, int harmonics, double seasonal_period,
              const FitOptions& options) {
    const StateSpaceModel base = build_model(kind, harmonics, seasonal_period);
    if (series.observed() < options.min_observations)
        throw Error(ErrorKind::InsufficientData, "need at least " + std::to_string(options.min_observations) +
                                                     " observed days, have " + std::to_string(series.observed()));

    const Objective objective{series, base, initial_state(base, *series.first_observed()),
                              std::log(options.variance_floor)};
    const auto dim = static_cast<Eigen::Index>(base.variance_components() + 1);
    const Eigen::VectorXd start = Eigen::VectorXd::Constant(dim, start_log_variance(series));
    if (!std::isfinite(objective(start)))
        throw Error(ErrorKind::Model, "log-likelihood is not finite at the starting parameters");

    FitResult result;
    Simplex s = make_simplex(start, objective);
    bool restarted = false;
    const auto n = static_cast<std::size_t>(dim);

    while (result.iterations < options.max_iterations) {
        const double spread = s.f.back() - s.f.front();
        if (spread <= options.relative_tolerance * std::max(1.0, std::abs(s.f.front()))) {
            if (restarted) {
                result.converged = true;
                break;
            }
            // One restart guards against a simplex that collapsed early.
            restarted = true;
            const double best = s.f.front();
            s = make_simplex(s.x.front(), objective);
            if (s.f.front() > best) throw Error(ErrorKind::Model, "restart lost the incumbent");
            continue;
        }
        ++result.iterations;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
        for (std::size_t i = 0; i < n; ++i) centroid += s.x[i];
        centroid /= static_cast<double>(n);

        const Eigen::VectorXd& worst = s.x[n];
        const Eigen::VectorXd reflected = centroid + (centroid - worst);
        const double fr = objective(reflected);

        if (fr < s.f[0]) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - worst);
            const double fe = objective(expanded);
            if (fe < fr) {
                s.x[n] = expanded;
                s.f[n] = fe;
            } else {
                s.x[n] = reflected;
                s.f[n] = fr;
            }
        } else if (fr < s.f[n - 1]) {
            s.x[n] = reflected;
            s.f[n] = fr;
        } else {
            const bool outside = fr < s.f[n];
            const Eigen::VectorXd contracted =
                outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                        : Eigen::VectorXd(centroid + 0.5 * (worst - centroid));
            const double fc = objective(contracted);
            if (fc < (outside ? fr : s.f[n])) {
                s.x[n] = contracted;
                s.f[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    s.x[i] = s.x[0] + 0.5 * (s.x[i] - s.x[0]);
                    s.f[i] = objective(s.x[i]);
                }
            }
        }
        s.order();
        result.trace.push_back(-s.f.front());
    }

    result.model = objective.model_at(s.x.front());
    result.init = objective.init;
    result.log_likelihood = kf_filter(series.values, result.model, result.init).log_likelihood;
    return result;
}

}  // namespace icecast
