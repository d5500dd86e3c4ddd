#include "krlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "krlab/bessel.hpp"

namespace krlab::spectral {

namespace {

std::complex<double> i_power(int kappa) {
    switch (((kappa % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

}  // namespace

Fraction Fraction::make(std::int64_t num, std::int64_t den) {
    if (den == 0) {
        throw std::invalid_argument("Fraction: zero denominator");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    return Fraction{num / g, den / g};
}

ModulationSpectrum::ModulationSpectrum(double alpha, int harmonics,
                                       std::vector<std::complex<double>> weights)
    : alpha_(alpha), harmonics_(harmonics), weights_(std::move(weights)) {
    if (weights_.size() != static_cast<std::size_t>(2 * harmonics_ + 1)) {
        throw std::invalid_argument("ModulationSpectrum: weight count mismatch");
    }
}

std::complex<double> ModulationSpectrum::weight(int kappa) const {
    if (kappa < -harmonics_ || kappa > harmonics_) {
        return {0.0, 0.0};
    }
    return weights_[static_cast<std::size_t>(kappa + harmonics_)];
}

double ModulationSpectrum::power() const {
    double sum = 0.0;
    for (const auto& w : weights_) {
        sum += std::norm(w);
    }
    return sum;
}

ModulationSpectrum modulation_spectrum(double alpha, int harmonics) {
    if (harmonics < 0) {
        throw std::invalid_argument("modulation_spectrum: negative harmonic count");
    }
    const auto j = bessel_j_sequence(harmonics, alpha);
    std::vector<std::complex<double>> w(static_cast<std::size_t>(2 * harmonics + 1));
    for (int kappa = -harmonics; kappa <= harmonics; ++kappa) {
        const int a = std::abs(kappa);
        // J_{-k} = (-1)^k J_k
        double jk = j[static_cast<std::size_t>(a)];
        if (kappa < 0 && a % 2 == 1) {
            jk = -jk;
        }
        w[static_cast<std::size_t>(kappa + harmonics)] = i_power(kappa) * jk;
    }
    return ModulationSpectrum(alpha, harmonics, std::move(w));
}

std::vector<Fraction> resonance_frequencies(int n_max, int m_max) {
    std::vector<Fraction> out;
    for (int m = 1; m <= m_max; ++m) {
        for (int n = 0; n <= n_max; ++n) {
            out.push_back(Fraction::make(2 * n + 1, 2 * m));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double aliased_ratio(double r) {
    if (!(r >= 0.0)) {
        throw std::invalid_argument("aliased_ratio: negative ratio");
    }
    const double f = r - std::floor(r);
    return f > 0.5 ? 1.0 - f : f;
}

Fraction aliased_ratio(Fraction r) {
    r = Fraction::make(r.num, r.den);
    if (r.num < 0) {
        throw std::invalid_argument("aliased_ratio: negative ratio");
    }
    std::int64_t f = r.num % r.den;
    if (2 * f > r.den) {
        f = r.den - f;
    }
    return Fraction::make(f, r.den);
}

int resonance_order_of(double r, int m_max, double tol) {
    const double a = aliased_ratio(r);
    for (int m = 1; m <= m_max; ++m) {
        const double odd = 2.0 * m * a;
        const double nearest = std::round(odd);
        if (std::abs(odd - nearest) <= 2.0 * m * tol && std::fmod(nearest, 2.0) == 1.0) {
            return m;
        }
    }
    return 0;
}

int default_profile_terms(double alpha, int m) {
    if (m < 1) {
        throw std::invalid_argument("resonance order must be >= 1");
    }
    const double bound = std::abs(alpha) + 40.0;
    int n = 0;
    while (m * (2 * n + 1) <= bound) {
        ++n;
    }
    return n + 1;
}

double resonance_energy_profile(double alpha, int m, int n_terms) {
    if (m < 1) {
        throw std::invalid_argument("resonance order must be >= 1");
    }
    if (n_terms < 1) {
        throw std::invalid_argument("need at least one term");
    }
    const int top = m * (2 * (n_terms - 1) + 1);
    const auto j = bessel_j_sequence(top, std::abs(alpha));
    std::complex<double> sum{0.0, 0.0};
    for (int n = 0; n < n_terms; ++n) {
        const int order = m * (2 * n + 1);
        double jv = j[static_cast<std::size_t>(order)];
        if (alpha < 0.0 && order % 2 == 1) {
            jv = -jv;
        }
        sum += i_power(order) * jv;
    }
    return std::norm(sum);
}

double resonance_energy_profile(double alpha, int m) {
    return resonance_energy_profile(alpha, m, default_profile_terms(alpha, m));
}

std::size_t AliasHistogram::populated_bins() const {
    return static_cast<std::size_t>(
        std::count_if(counts.begin(), counts.end(), [](std::int64_t c) { return c > 0; }));
}

AliasHistogram alias_histogram(double r, int harmonics, int bins) {
    if (bins < 1) {
        throw std::invalid_argument("alias_histogram: need at least one bin");
    }
    if (harmonics < bins) {
        throw std::invalid_argument("alias_histogram: harmonic count below bin count");
    }
    AliasHistogram h;
    h.bin_width = 0.5 / bins;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    for (int kappa = 1; kappa <= harmonics; ++kappa) {
        const double a = aliased_ratio(kappa * r);
        auto idx = static_cast<std::size_t>(std::floor(a / h.bin_width));
        idx = std::min(idx, h.counts.size() - 1);
        ++h.counts[idx];
    }
    return h;
}

}  // namespace krlab::spectral
