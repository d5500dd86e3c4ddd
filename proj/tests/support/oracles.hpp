#pragma once

// Reference implementations used only by the tests. They share no code with
// the library: Bessel functions come from the power series in long double,
// and time evolution from explicit dense matrices.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <vector>

namespace oracle {

using cplx = std::complex<long double>;

inline constexpr long double kPi = 3.141592653589793238462643383279502884L;

// J_n(x) = sum_m (-1)^m (x/2)^(2m+n) / (m! (m+n)!), adequate for |x| <= ~10
inline long double bessel_j(int n, long double x) {
    const bool flip = n < 0;
    const int order = std::abs(n);
    const long double half = x / 2.0L;
    long double term = 1.0L;
    for (int i = 1; i <= order; ++i) {
        term *= half / i;
    }
    long double sum = term;
    for (int m = 1; m < 400; ++m) {
        term *= -half * half / (static_cast<long double>(m) * (m + order));
        sum += term;
        if (std::abs(term) < 1e-30L * std::abs(sum) && m > order) {
            break;
        }
    }
    // J_{-n} = (-1)^n J_n
    return (flip && (order % 2 == 1)) ? -sum : sum;
}

// |sum_n i^{m(2n+1)} J_{m(2n+1)}(alpha)|^2 summed until the terms vanish
inline long double resonance_profile(long double alpha, int m) {
    cplx sum{0.0L, 0.0L};
    for (int n = 0; m * (2 * n + 1) < 80; ++n) {
        const int order = m * (2 * n + 1);
        cplx ipow{1.0L, 0.0L};
        for (int j = 0; j < order % 4; ++j) {
            ipow *= cplx{0.0L, 1.0L};
        }
        sum += ipow * bessel_j(order, alpha);
    }
    return std::norm(sum);
}

// Dense Floquet evolution on the truncated ladder -n_max..n_max:
// U = F K(phi), K_{nm} = (-i)^{n-m} J_{n-m}(k) e^{i(n-m)phi},
// F_{nn} = exp(-i T (n+beta)^2 / 2).
class DenseFloquet {
public:
    DenseFloquet(int n_max, double beta, double k, double scaled_period)
        : n_max_(n_max), dim_(2 * n_max + 1), beta_(beta), k_(k), period_(scaled_period),
          bessel_(static_cast<std::size_t>(2 * dim_)) {
        for (int d = -(dim_ - 1); d <= dim_ - 1; ++d) {
            bessel_[static_cast<std::size_t>(d + dim_ - 1)] = bessel_j(d, k_);
        }
    }

    std::vector<cplx> step(const std::vector<cplx>& c, double phi) const {
        std::vector<cplx> out(c.size(), cplx{0.0L, 0.0L});
        for (int n = -n_max_; n <= n_max_; ++n) {
            cplx acc{0.0L, 0.0L};
            for (int m = -n_max_; m <= n_max_; ++m) {
                const int d = n - m;
                // (-i)^d
                static const cplx minus_i_pow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
                const cplx factor = minus_i_pow[((d % 4) + 4) % 4] *
                                    std::polar(1.0L, static_cast<long double>(d) * phi) *
                                    bessel_[static_cast<std::size_t>(d + dim_ - 1)];
                acc += factor * c[static_cast<std::size_t>(m + n_max_)];
            }
            const long double p = n + static_cast<long double>(beta_);
            out[static_cast<std::size_t>(n + n_max_)] =
                acc * std::polar(1.0L, -static_cast<long double>(period_) * p * p / 2.0L);
        }
        return out;
    }

    int dim() const { return dim_; }

private:
    int n_max_;
    int dim_;
    double beta_;
    double k_;
    double period_;
    std::vector<long double> bessel_;
};

// Phases computed directly from the modulation formula
inline std::vector<double> phases(double alpha, double ratio, double phi0, int kicks) {
    std::vector<double> out;
    for (int n = 0; n < kicks; ++n) {
        out.push_back(alpha * std::cos(2.0 * static_cast<double>(kPi) * ratio * n + phi0));
    }
    return out;
}

}  // namespace oracle
