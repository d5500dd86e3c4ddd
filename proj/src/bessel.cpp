#include "krlab/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace krlab::spectral {

namespace {

constexpr double kRescaleAbove = 1e250;

// Start order for the downward sweep: well beyond both the requested order and
// the turning point |x|, where J_n starts its super-exponential decay.
int start_order(int order_max, double ax) {
    const double top = std::max(static_cast<double>(order_max), ax);
    int start = static_cast<int>(top + 30.0 + 2.0 * std::sqrt(40.0 * top));
    return start + (start % 2);  // even, so the normalization sum pairs up
}

}  // namespace

std::vector<double> bessel_j_sequence(int order_max, double x) {
    if (order_max < 0) {
        throw std::invalid_argument("bessel_j_sequence: negative order");
    }
    std::vector<double> out(static_cast<std::size_t>(order_max) + 1, 0.0);
    const double ax = std::abs(x);
    if (ax == 0.0) {
        out[0] = 1.0;
        return out;
    }

    const int start = start_order(order_max, ax);
    double next = 0.0;   // J_{n+1}
    double cur = 1e-300; // J_n, arbitrary seed
    double norm = 0.0;
    const double two_over_x = 2.0 / ax;

    for (int n = start; n >= 1; --n) {
        const double prev = n * two_over_x * cur - next;  // J_{n-1}
        next = cur;
        cur = prev;
        const int m = n - 1;
        if (m <= order_max) {
            out[static_cast<std::size_t>(m)] = cur;
        }
        if (m > 0 && m % 2 == 0) {
            norm += 2.0 * cur;
        }
        if (std::abs(cur) > kRescaleAbove) {
            const double s = 1.0 / kRescaleAbove;
            cur *= s;
            next *= s;
            norm *= s;
            for (int j = m; j <= order_max; ++j) {
                out[static_cast<std::size_t>(j)] *= s;
            }
        }
    }
    norm += cur;  // J_0

    for (int j = 0; j <= order_max; ++j) {
        double v = out[static_cast<std::size_t>(j)] / norm;
        if (x < 0.0 && (j % 2 == 1)) {
            v = -v;
        }
        out[static_cast<std::size_t>(j)] = v;
    }
    return out;
}

double bessel_j(int n, double x) {
    const int an = std::abs(n);
    const double v = bessel_j_sequence(an, x)[static_cast<std::size_t>(an)];
    return (n < 0 && (an % 2 == 1)) ? -v : v;
}

}  // namespace krlab::spectral
