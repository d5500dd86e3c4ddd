#include "krlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace krlab::model {

namespace {

double laser_wavenumber(double wavelength) { return kTwoPi / wavelength; }

}  // namespace

void PhysicalParams::validate() const {
    if (detuning == 0.0) {
        throw std::invalid_argument("detuning must be non-zero");
    }
    if (!(wavelength > 0.0) || !(atomic_mass > 0.0) || !(pulse_period > 0.0) ||
        !(pulse_duration > 0.0) || !(detuning > 0.0) || !(rabi_frequency > 0.0)) {
        throw std::invalid_argument("physical parameters must be strictly positive");
    }
    if (!(pulse_duration < pulse_period / 10.0)) {
        throw std::invalid_argument("pulse duration must be below a tenth of the period");
    }
}

ScaledPeriod ScaledPeriod::from_value(double scaled_period) {
    if (!std::isfinite(scaled_period)) {
        throw std::invalid_argument("scaled period must be finite");
    }
    const double turns = scaled_period / kTwoPi;
    // round half toward the smaller order
    int ell = static_cast<int>(std::ceil(turns - 0.5));
    double eps = scaled_period - kTwoPi * ell;
    if (std::abs(eps) >= std::numbers::pi) {
        throw std::invalid_argument("scaled period is equidistant from two resonances");
    }
    return ScaledPeriod{ell, eps};
}

ScaledParams scaled_params(const PhysicalParams& phys) {
    phys.validate();
    const double kl = laser_wavenumber(phys.wavelength);
    ScaledParams out;
    out.kick_strength =
        phys.pulse_duration * phys.rabi_frequency * phys.rabi_frequency / (4.0 * phys.detuning);
    const double scaled = 4.0 * kReducedPlanck * kl * kl * phys.pulse_period / phys.atomic_mass;
    out.period = ScaledPeriod::from_value(scaled);
    return out;
}

double pulse_period_for(double scaled_period, double wavelength, double atomic_mass) {
    const double kl = laser_wavenumber(wavelength);
    return scaled_period * atomic_mass / (4.0 * kReducedPlanck * kl * kl);
}

double talbot_time(double wavelength, double atomic_mass) {
    const double kl = laser_wavenumber(wavelength);
    return std::numbers::pi * atomic_mass / (kReducedPlanck * kl * kl);
}

void KickParams::validate() const {
    if (!std::isfinite(kick_strength) || kick_strength < 0.0) {
        throw std::invalid_argument("kick strength must be finite and non-negative");
    }
    if (!(std::abs(period.epsilon) < std::numbers::pi)) {
        throw std::invalid_argument("|epsilon| must be below pi");
    }
    if (!std::isfinite(alpha) || alpha < 0.0) {
        throw std::invalid_argument("modulation amplitude must be non-negative");
    }
    if (!std::isfinite(ratio) || ratio < 0.0) {
        throw std::invalid_argument("frequency ratio must be non-negative");
    }
    if (!std::isfinite(phi0)) {
        throw std::invalid_argument("initial phase must be finite");
    }
    if (kicks < 1) {
        throw std::invalid_argument("kick count must be at least 1");
    }
}

PhaseSequence phase_sequence(double alpha, double ratio, double phi0, int kicks) {
    PhaseSequence seq;
    seq.phases.reserve(static_cast<std::size_t>(std::max(kicks, 0)));
    for (int n = 0; n < kicks; ++n) {
        // reduce ratio*n to a fraction of a turn before scaling by 2*pi
        const double turn = std::fmod(ratio * n, 1.0);
        seq.phases.push_back(alpha * std::cos(kTwoPi * turn + phi0));
    }
    return seq;
}

PhaseSequence phase_sequence(const KickParams& p) {
    return phase_sequence(p.alpha, p.ratio, p.phi0, p.kicks);
}

double effective_kick_strength(std::span<const double> phases) {
    std::complex<double> sum{0.0, 0.0};
    for (double phi : phases) {
        sum += std::polar(1.0, phi);
    }
    return std::abs(sum);
}

}  // namespace krlab::model
