#include "krlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace krlab::diagnostics {

namespace {

struct Line {
    double slope;
    double intercept;
    double r_squared;
};

Line least_squares(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    Line line;
    line.slope = sxy / sxx;
    line.intercept = my - line.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (line.intercept + line.slope * x[i]);
        ss_res += r * r;
    }
    if (syy == 0.0) {
        line.r_squared = 1.0;
    } else {
        line.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return line;
}

void check_window(std::span<const double> series, Window w) {
    if (w.size() < 5) {
        throw FitError("fit window needs at least 5 points");
    }
    if (w.last >= series.size()) {
        throw FitError("fit window exceeds the series");
    }
}

void check_normalized(const quantum::MomentumDistribution& dist) {
    if (std::abs(dist.total() - 1.0) > 1e-6) {
        throw std::invalid_argument("distribution is not normalized");
    }
}

}  // namespace

double energy(const quantum::MomentumDistribution& dist) {
    check_normalized(dist);
    double e = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        e += dist.probability[i] * dist.p[i] * dist.p[i];
    }
    return 4.0 * e;
}

double zero_momentum_fraction(const quantum::MomentumDistribution& dist) {
    double sum = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (std::abs(dist.p[i]) < 0.5) {
            sum += dist.probability[i];
        }
    }
    return sum;
}

Window default_window(std::size_t length) {
    if (length < 2) {
        throw FitError("series too short for a window");
    }
    return {std::max<std::size_t>(1, length / 3), length - 1};
}

FitResult fit_power_law(std::span<const double> series, Window window) {
    check_window(series, window);
    if (window.first == 0) {
        throw FitError("power-law fit cannot include t = 0");
    }
    std::vector<double> x, y;
    for (std::size_t t = window.first; t <= window.last; ++t) {
        if (!(series[t] > 0.0)) {
            throw FitError("non-positive energy in power-law window");
        }
        x.push_back(std::log(static_cast<double>(t)));
        y.push_back(std::log(series[t]));
    }
    const Line line = least_squares(x, y);
    return {line.slope, line.intercept, line.r_squared, window};
}

FitResult fit_power_law(std::span<const double> series) {
    return fit_power_law(series, default_window(series.size()));
}

FitResult diffusion_constant(std::span<const double> series, Window window) {
    check_window(series, window);
    std::vector<double> x, y;
    for (std::size_t t = window.first; t <= window.last; ++t) {
        x.push_back(static_cast<double>(t));
        y.push_back(series[t]);
    }
    const Line line = least_squares(x, y);
    return {line.slope, line.intercept, line.r_squared, window};
}

FitResult diffusion_constant(std::span<const double> series) {
    return diffusion_constant(series, default_window(series.size()));
}

FitResult localization_fit(const quantum::MomentumDistribution& dist,
                           const LocalizationOptions& options) {
    const auto orders = quantum::bin_distribution(dist, 1);
    const double peak = *std::max_element(orders.probability.begin(), orders.probability.end());
    const double floor = options.relative_floor * peak;
    const double half_core = options.central_orders / 2.0;

    std::vector<double> x, y;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        const double n = std::abs(orders.p[i]);
        if (n <= half_core || !(orders.probability[i] > floor)) {
            continue;
        }
        x.push_back(n);
        y.push_back(std::log(orders.probability[i]));
    }
    if (x.size() < options.min_points) {
        throw FitError("localization fit: too few populated orders");
    }
    const Line line = least_squares(x, y);
    FitResult out;
    out.value = -2.0 / line.slope;
    out.intercept = line.intercept;
    out.r_squared = line.r_squared;
    out.window = {static_cast<std::size_t>(*std::min_element(x.begin(), x.end())),
                  static_cast<std::size_t>(*std::max_element(x.begin(), x.end()))};
    return out;
}

}  // namespace krlab::diagnostics
