#pragma once

// Pseudo-classical map valid near a quantum resonance, with the effective
// Planck constant |epsilon| and stochasticity k|epsilon|. The modulation
// phase shifts the argument of the impulse, mirroring cos(x + phi) in the
// quantum kick.

#include <cstddef>
#include <span>
#include <vector>

#include "krlab/model.hpp"

namespace krlab::pseudoclassical {

struct PhaseSpacePoint {
    double J = 0.0;
    double theta = 0.0;  // in [0, 2*pi)

    friend bool operator==(const PhaseSpacePoint&, const PhaseSpacePoint&) = default;
};

/// k * |epsilon|: the only combination of k and epsilon the map sees.
inline double stochasticity(double k, double epsilon) { return k * (epsilon < 0.0 ? -epsilon : epsilon); }

/// J = eps*n + pi*ell + T*beta, theta = x + pi*(1 - sgn eps)/2 (mod 2*pi).
/// Throws std::invalid_argument at epsilon == 0.
PhaseSpacePoint to_pseudoclassical(int n, double beta, double x, const model::KickParams& p);

/// Impulse from the current angle, then rotation:
///   J' = J + k_eps * sin(theta + phi),  theta' = theta + J'  (mod 2*pi).
PhaseSpacePoint map_step(PhaseSpacePoint pt, double k_eps, double phi);

struct Jacobian {
    double dJ_dJ, dJ_dtheta, dtheta_dJ, dtheta_dtheta;
    double determinant() const { return dJ_dJ * dtheta_dtheta - dJ_dtheta * dtheta_dJ; }
};

Jacobian map_jacobian(PhaseSpacePoint pt, double k_eps, double phi);

struct SectionParams {
    double k_eps = 0.1;
    double alpha = 0.0;
    double ratio = 0.0;
    double phi0 = 0.0;
    int steps = 500;
};

struct SectionPoint {
    std::size_t seed;
    int step;        // 1..steps
    double theta;    // [0, 2*pi)
    double J;        // folded into [0, 2*pi)
};

/// per_side x per_side seeds uniformly covering [0, 2*pi)^2, theta-major.
std::vector<PhaseSpacePoint> seed_grid(int per_side);

/// All iterates of all seeds, ordered by seed then step. Step t uses the
/// modulation phase of kick t-1 from model::phase_sequence.
std::vector<SectionPoint> poincare_section(const SectionParams& params,
                                           std::span<const PhaseSpacePoint> seeds,
                                           unsigned threads = 1);

/// Extent of an orbit in the unwrapped angle and in J over `params.steps`.
struct OrbitExtent {
    double theta_span;
    double J_span;

    /// Angle stays within one turn: the orbit librates inside an island.
    bool librating() const { return theta_span < model::kTwoPi; }
};

std::vector<OrbitExtent> orbit_extents(const SectionParams& params,
                                       std::span<const PhaseSpacePoint> seeds,
                                       unsigned threads = 1);

}  // namespace krlab::pseudoclassical
