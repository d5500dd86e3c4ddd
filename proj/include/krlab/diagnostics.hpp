#pragma once

// Observables and fits on trajectories and momentum distributions.

#include <cstddef>
#include <span>
#include <stdexcept>

#include "krlab/quantum.hpp"

namespace krlab::diagnostics {

/// A fit that cannot be carried out on the given data.
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inclusive index range into a per-kick series (index == kick number).
struct Window {
    std::size_t first = 0;
    std::size_t last = 0;

    std::size_t size() const noexcept { return last >= first ? last - first + 1 : 0; }
};

struct FitResult {
    double value = 0.0;      // q, D or xi depending on the fit
    double intercept = 0.0;  // of the fitted line
    double r_squared = 0.0;
    Window window;
};

/// E/E_r = 4 * sum P(p) p^2 with p in units of 2*hbar*k_L. Rejects
/// distributions whose sum is more than 1e-6 away from 1.
double energy(const quantum::MomentumDistribution& dist);

/// Mass with |p| < 1/2 (|P| < hbar*k_L).
double zero_momentum_fraction(const quantum::MomentumDistribution& dist);

/// Last two-thirds of a series of the given length, never including index 0.
Window default_window(std::size_t length);

/// Least-squares slope q of log E against log t over the window.
FitResult fit_power_law(std::span<const double> series, Window window);
FitResult fit_power_law(std::span<const double> series);

/// Least-squares slope of E against t (recoils per kick).
FitResult diffusion_constant(std::span<const double> series, Window window);
FitResult diffusion_constant(std::span<const double> series);

struct LocalizationOptions {
    int central_orders = 5;        // excluded around n = 0
    double relative_floor = 1e-12; // orders below floor * max(P) count as unpopulated
    std::size_t min_points = 10;
};

/// Fits log P(n) = a - 2|n|/xi over the populated integer orders; value = xi.
FitResult localization_fit(const quantum::MomentumDistribution& dist,
                           const LocalizationOptions& options = {});

}  // namespace krlab::diagnostics
