#pragma once

// Split-step Floquet propagation of momentum-ladder wavefunctions.
//
// Momenta are measured in units of two photon recoils (2*hbar*k_L), so a
// ladder holds the orders p = n + beta for a fixed quasimomentum beta. The
// kick is diagonal on the conjugate position grid of 2*n_max+1 points on
// [0, 2*pi); the free evolution is diagonal in n.

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "krlab/model.hpp"

namespace krlab::quantum {

/// Largest tolerated |c_{+-n_max}|^2 after any kick.
inline constexpr double kEdgeTolerance = 1e-8;

class LadderState {
public:
    /// Rest state of the ladder: c_0 = 1.
    LadderState(double beta, int n_max);

    double beta() const noexcept { return beta_; }
    int n_max() const noexcept { return n_max_; }
    std::size_t size() const noexcept { return amps_.size(); }

    std::complex<double>& amplitude(int n) { return amps_[index(n)]; }
    const std::complex<double>& amplitude(int n) const { return amps_[index(n)]; }

    /// Storage order n = -n_max .. n_max.
    std::span<std::complex<double>> amplitudes() noexcept { return amps_; }
    std::span<const std::complex<double>> amplitudes() const noexcept { return amps_; }

    double norm() const;
    double edge_occupation() const;

    /// Same amplitudes on a larger ladder (zero padded).
    LadderState widened(int n_max) const;

private:
    std::size_t index(int n) const;

    double beta_;
    int n_max_;
    std::vector<std::complex<double>> amps_;
};

/// |<a|b>|^2; both ladders must have the same beta and size.
double fidelity(const LadderState& a, const LadderState& b);

struct PlaneWave {
    double beta = 0.0;

    friend bool operator==(const PlaneWave&, const PlaneWave&) = default;
};

enum class Sampling { stratified, random };

/// Incoherent ensemble of ladders with Gaussian-distributed quasimomentum.
struct GaussianEnsemble {
    double sigma = 0.0;  // standard deviation of the momentum density, units of hbar*k_L
    int members = 256;
    std::uint64_t seed = 0;
    Sampling sampling = Sampling::stratified;

    friend bool operator==(const GaussianEnsemble&, const GaussianEnsemble&) = default;
};

using InitialCondition = std::variant<PlaneWave, GaussianEnsemble>;

/// sigma of a Gaussian with the given full width at half maximum.
double sigma_from_fwhm(double fwhm);

struct EnsembleMember {
    double weight;
    LadderState state;
};

/// Stratified sampling places equal-weight members at the Gaussian quantile
/// midpoints (i + 1/2)/members; random sampling draws from a seeded engine.
/// Rejects widths that put more than 0.1% of the mass at |beta| >= 1/2.
std::vector<EnsembleMember> init_state(const InitialCondition& ic, int n_max);

/// Multiplies by exp(-i k cos(x + phi)) in position space. Throws GridError
/// when the edge occupation afterwards reaches kEdgeTolerance.
void apply_kick(LadderState& s, double k, double phi);

/// c_n <- c_n exp(-i T (n + beta)^2 / 2), with the resonant part pi*ell*n^2
/// reduced exactly.
void apply_free(LadderState& s, const model::ScaledPeriod& period);
void apply_free(LadderState& s, double scaled_period);

/// Ensemble-averaged momentum probabilities at p = n + beta.
struct MomentumDistribution {
    std::vector<double> p;            // ascending
    std::vector<double> probability;  // same length as p

    double total() const;
    std::size_t size() const noexcept { return p.size(); }
};

struct Trajectory {
    std::vector<double> energies;      // E/E_r, index 0 before the first kick
    std::vector<double> p0_fractions;  // mass with |p| < 1/2
    MomentumDistribution final_distribution;
    std::vector<std::pair<int, MomentumDistribution>> snapshots;  // (kick, distribution)
    int n_max_used = 0;  // largest grid any member needed
};

struct EvolveOptions {
    bool auto_escalate = true;
    int max_n_max = 16384;
    unsigned threads = 1;
    std::vector<int> snapshot_kicks;
    bool keep_final_distribution = true;
};

/// N Floquet steps (kick then free evolution) per member, with kick n shifted
/// by model::phase_sequence(p)[n]. Deterministic; the ensemble reduction is
/// ordered by member index.
Trajectory evolve(const InitialCondition& ic, const model::KickParams& p, int n_max,
                  const EvolveOptions& options = {});

/// bins_per_unit == 0 returns the exact beta-resolved points; otherwise the
/// mass is histogrammed into bins of width 1/bins_per_unit centred on
/// multiples of that width. Result normalized to unit sum.
MomentumDistribution momentum_distribution(const Trajectory& traj, int bins_per_unit);
MomentumDistribution bin_distribution(const MomentumDistribution& dist, int bins_per_unit);

}  // namespace krlab::quantum
