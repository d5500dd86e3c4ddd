#include "krlab/pseudoclassical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "krlab/parallel.hpp"

namespace krlab::pseudoclassical {

namespace {

double wrap(double v) {
    double w = std::fmod(v, model::kTwoPi);
    if (w < 0.0) {
        w += model::kTwoPi;
    }
    // fmod of a tiny negative value can round up to exactly 2*pi
    return w >= model::kTwoPi ? 0.0 : w;
}

}  // namespace

PhaseSpacePoint to_pseudoclassical(int n, double beta, double x, const model::KickParams& p) {
    const double eps = p.period.epsilon;
    if (eps == 0.0) {
        throw std::invalid_argument("to_pseudoclassical: undefined at exact resonance");
    }
    PhaseSpacePoint pt;
    pt.J = eps * n + std::numbers::pi * p.period.ell + p.period.value() * beta;
    pt.theta = wrap(eps > 0.0 ? x : x + std::numbers::pi);
    return pt;
}

PhaseSpacePoint map_step(PhaseSpacePoint pt, double k_eps, double phi) {
    const double J = pt.J + k_eps * std::sin(pt.theta + phi);
    return {J, wrap(pt.theta + J)};
}

Jacobian map_jacobian(PhaseSpacePoint pt, double k_eps, double phi) {
    const double c = k_eps * std::cos(pt.theta + phi);
    return {1.0, c, 1.0, 1.0 + c};
}

std::vector<PhaseSpacePoint> seed_grid(int per_side) {
    if (per_side < 1) {
        throw std::invalid_argument("seed_grid: need at least one seed per side");
    }
    std::vector<PhaseSpacePoint> seeds;
    seeds.reserve(static_cast<std::size_t>(per_side) * static_cast<std::size_t>(per_side));
    const double h = model::kTwoPi / per_side;
    for (int i = 0; i < per_side; ++i) {
        for (int j = 0; j < per_side; ++j) {
            seeds.push_back({j * h, i * h});
        }
    }
    return seeds;
}

std::vector<SectionPoint> poincare_section(const SectionParams& params,
                                           std::span<const PhaseSpacePoint> seeds,
                                           unsigned threads) {
    if (seeds.empty()) {
        throw std::invalid_argument("poincare_section: no seeds");
    }
    if (params.steps < 1) {
        throw std::invalid_argument("poincare_section: need at least one step");
    }
    const auto phases = model::phase_sequence(params.alpha, params.ratio, params.phi0, params.steps);
    const auto steps = static_cast<std::size_t>(params.steps);
    std::vector<SectionPoint> out(seeds.size() * steps);
    parallel_for(seeds.size(), threads, [&](std::size_t s) {
        PhaseSpacePoint pt = seeds[s];
        pt.theta = wrap(pt.theta);
        for (std::size_t t = 0; t < steps; ++t) {
            pt = map_step(pt, params.k_eps, phases[t]);
            out[s * steps + t] = {s, static_cast<int>(t) + 1, pt.theta, wrap(pt.J)};
        }
    });
    return out;
}

std::vector<OrbitExtent> orbit_extents(const SectionParams& params,
                                       std::span<const PhaseSpacePoint> seeds, unsigned threads) {
    const auto phases = model::phase_sequence(params.alpha, params.ratio, params.phi0, params.steps);
    std::vector<OrbitExtent> out(seeds.size());
    parallel_for(seeds.size(), threads, [&](std::size_t s) {
        PhaseSpacePoint pt = seeds[s];
        pt.theta = wrap(pt.theta);
        double unwrapped = pt.theta;
        double tmin = unwrapped, tmax = unwrapped, jmin = pt.J, jmax = pt.J;
        for (int t = 0; t < params.steps; ++t) {
            pt = map_step(pt, params.k_eps, phases[static_cast<std::size_t>(t)]);
            unwrapped += pt.J;
            tmin = std::min(tmin, unwrapped);
            tmax = std::max(tmax, unwrapped);
            jmin = std::min(jmin, pt.J);
            jmax = std::max(jmax, pt.J);
        }
        out[s] = {tmax - tmin, jmax - jmin};
    });
    return out;
}

}  // namespace krlab::pseudoclassical
