#pragma once

// Dimensionless kicked-rotor parameters, laboratory-unit conversion and the
// per-kick modulation phases.

#include <numbers>
#include <span>
#include <vector>

namespace krlab::model {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kReducedPlanck = 1.054571817e-34;  // J s (CODATA 2018, exact)
inline constexpr double kRubidium87Mass = 1.4432e-25;      // kg

/// Laboratory description of one kicking experiment (SI units).
struct PhysicalParams {
    double wavelength = 780.24e-9;    // m
    double atomic_mass = kRubidium87Mass;
    double pulse_period = 66.3e-6;    // s
    double pulse_duration = 300e-9;   // s
    double detuning = kTwoPi * 150e9; // rad/s
    double rabi_frequency = 5.0e9;    // rad/s

    /// Throws std::invalid_argument on non-positive fields, zero detuning or
    /// a pulse longer than a tenth of the period.
    void validate() const;
};

/// Scaled pulse period split into resonance order and detuning,
/// value = 2*pi*ell + epsilon with |epsilon| < pi.
///
/// Keeping the integer part separate lets the free evolution reduce the
/// resonant phase pi*ell*n^2 exactly.
struct ScaledPeriod {
    int ell = 0;
    double epsilon = 0.0;

    double value() const noexcept { return kTwoPi * ell + epsilon; }

    /// Nearest multiple of 2*pi (ties toward smaller ell). |epsilon| == pi is
    /// ambiguous and rejected with std::invalid_argument.
    static ScaledPeriod from_value(double scaled_period);

    friend bool operator==(const ScaledPeriod&, const ScaledPeriod&) = default;
};

struct ScaledParams {
    double kick_strength = 0.0;
    ScaledPeriod period;
};

ScaledParams scaled_params(const PhysicalParams& phys);

/// Inverse of the period scaling: the pulse period (s) giving `scaled_period`.
double pulse_period_for(double scaled_period, double wavelength, double atomic_mass);

/// Talbot time pi*m/(hbar*k_L^2); half of it is the first anti-resonance.
double talbot_time(double wavelength, double atomic_mass);

/// Dimensionless control parameters of one kick train.
struct KickParams {
    double kick_strength = 0.0;
    ScaledPeriod period;
    double alpha = 0.0;  // modulation amplitude, rad
    double ratio = 0.0;  // omega_p / omega_k
    double phi0 = 0.0;   // modulation phase at kick 0, rad
    int kicks = 1;

    void validate() const;

    friend bool operator==(const KickParams&, const KickParams&) = default;
};

struct PhaseSequence {
    std::vector<double> phases;

    std::size_t size() const noexcept { return phases.size(); }
    double operator[](std::size_t n) const { return phases[n]; }
};

/// phi_n = alpha * cos(2*pi*ratio*n + phi0) for n = 0..kicks-1.
PhaseSequence phase_sequence(double alpha, double ratio, double phi0, int kicks);
PhaseSequence phase_sequence(const KickParams& p);

/// |sum_n exp(i*phi_n)|: amplitude of the summed gratings in units of k.
double effective_kick_strength(std::span<const double> phases);
inline double effective_kick_strength(const PhaseSequence& seq) {
    return effective_kick_strength(std::span<const double>(seq.phases));
}

}  // namespace krlab::model
