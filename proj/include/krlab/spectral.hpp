#pragma once

// Analytic spectrum of the phase-modulated kick train: Bessel weights of the
// modulation harmonics, folding of harmonics into the first Nyquist zone,
// and the resulting resonance conditions.

#include <complex>
#include <cstdint>
#include <vector>

namespace krlab::spectral {

/// Exact frequency ratio omega / omega_k.
struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    /// Reduced form with positive denominator.
    static Fraction make(std::int64_t num, std::int64_t den);
    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Fraction&, const Fraction&) = default;
    friend bool operator<(const Fraction& a, const Fraction& b) noexcept {
        return a.num * b.den < b.num * a.den;
    }
};

/// Weights i^kappa J_kappa(alpha) of exp(i*alpha*cos(w t)) at harmonics
/// kappa = -K..K.
class ModulationSpectrum {
public:
    ModulationSpectrum(double alpha, int harmonics, std::vector<std::complex<double>> weights);

    double alpha() const noexcept { return alpha_; }
    int harmonics() const noexcept { return harmonics_; }
    /// Zero outside [-K, K].
    std::complex<double> weight(int kappa) const;
    /// sum |weight|^2; tends to 1 as K grows.
    double power() const;

private:
    double alpha_;
    int harmonics_;
    std::vector<std::complex<double>> weights_;  // index kappa + K
};

ModulationSpectrum modulation_spectrum(double alpha, int harmonics);

/// (2n+1)/(2m) for n = 0..n_max and m = 1..m_max, reduced, sorted, unique.
std::vector<Fraction> resonance_frequencies(int n_max, int m_max);

/// Folds a ratio into [0, 1/2]: r mod 1, reflected about 1/2.
double aliased_ratio(double r);
Fraction aliased_ratio(Fraction r);

/// Order m such that aliased_ratio(r) == 1/(2m) * (odd integer), searching
/// m = 1..m_max with tolerance `tol` on the ratio; 0 if none.
int resonance_order_of(double r, int m_max = 16, double tol = 1e-12);

/// Smallest term count for which every dropped order m(2n+1) exceeds |alpha| + 40.
int default_profile_terms(double alpha, int m);

/// |sum_{n<n_terms} i^{m(2n+1)} J_{m(2n+1)}(alpha)|^2, un-normalized.
double resonance_energy_profile(double alpha, int m, int n_terms);
double resonance_energy_profile(double alpha, int m);

struct AliasHistogram {
    double bin_width = 0.0;
    std::vector<std::int64_t> counts;  // bins over [0, 1/2], left-closed; 1/2 in the last bin

    std::size_t populated_bins() const;
};

/// Histogram of aliased_ratio(kappa * r) for kappa = 1..harmonics.
AliasHistogram alias_histogram(double r, int harmonics, int bins);

}  // namespace krlab::spectral
