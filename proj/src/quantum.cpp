#include "krlab/quantum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

#include "krlab/errors.hpp"
#include "krlab/parallel.hpp"

namespace krlab::quantum {

namespace {

using cplx = std::complex<double>;

// The FFTW planner is not thread-safe; plan execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// Per-thread FFT buffer and in-place plans for one grid length.
class FftWorkspace {
public:
    explicit FftWorkspace(int length) : length_(length) {
        std::lock_guard lock(planner_mutex());
        buffer_ = fftw_alloc_complex(static_cast<std::size_t>(length));
        if (buffer_ == nullptr) {
            throw std::bad_alloc();
        }
        to_position_ = fftw_plan_dft_1d(length, buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
        to_momentum_ = fftw_plan_dft_1d(length, buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
        cos_x_.resize(static_cast<std::size_t>(length));
        sin_x_.resize(static_cast<std::size_t>(length));
        for (int j = 0; j < length; ++j) {
            const double x = model::kTwoPi * j / length;
            cos_x_[static_cast<std::size_t>(j)] = std::cos(x);
            sin_x_[static_cast<std::size_t>(j)] = std::sin(x);
        }
    }

    FftWorkspace(const FftWorkspace&) = delete;
    FftWorkspace& operator=(const FftWorkspace&) = delete;

    ~FftWorkspace() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(to_position_);
        fftw_destroy_plan(to_momentum_);
        fftw_free(buffer_);
    }

    int length() const noexcept { return length_; }
    cplx* data() noexcept { return reinterpret_cast<cplx*>(buffer_); }
    void to_position() { fftw_execute(to_position_); }
    void to_momentum() { fftw_execute(to_momentum_); }
    double cos_x(int j) const { return cos_x_[static_cast<std::size_t>(j)]; }
    double sin_x(int j) const { return sin_x_[static_cast<std::size_t>(j)]; }

private:
    int length_;
    fftw_complex* buffer_ = nullptr;
    fftw_plan to_position_ = nullptr;
    fftw_plan to_momentum_ = nullptr;
    std::vector<double> cos_x_;
    std::vector<double> sin_x_;
};

FftWorkspace& workspace_for(int length) {
    thread_local std::map<int, std::unique_ptr<FftWorkspace>> cache;
    auto& slot = cache[length];
    if (!slot) {
        slot = std::make_unique<FftWorkspace>(length);
    }
    return *slot;
}

// exp(-i * theta) for theta given as (integer multiple of pi) + remainder
cplx phase_factor(std::int64_t pi_multiple, double remainder) {
    const double sign = (pi_multiple % 2 == 0) ? 1.0 : -1.0;
    return sign * std::polar(1.0, -remainder);
}

struct MemberResult {
    std::vector<double> energies;
    std::vector<double> p0;
    std::vector<std::pair<int, LadderState>> snapshots;
    LadderState final_state{0.0, 1};
    int n_max = 0;
};

void record(const LadderState& s, std::vector<double>& energies, std::vector<double>& p0) {
    double e = 0.0;
    double zero = 0.0;
    const auto amps = s.amplitudes();
    for (int n = -s.n_max(); n <= s.n_max(); ++n) {
        const double prob = std::norm(amps[static_cast<std::size_t>(n + s.n_max())]);
        const double p = n + s.beta();
        e += prob * p * p;
        if (std::abs(p) < 0.5) {
            zero += prob;
        }
    }
    energies.push_back(4.0 * e);
    p0.push_back(zero);
}

MemberResult run_member(const LadderState& initial, const model::KickParams& p,
                        const model::PhaseSequence& phases, const EvolveOptions& options) {
    LadderState start = initial;
    for (;;) {
        MemberResult out;
        out.energies.reserve(static_cast<std::size_t>(p.kicks) + 1);
        out.p0.reserve(static_cast<std::size_t>(p.kicks) + 1);
        LadderState s = start;
        record(s, out.energies, out.p0);
        try {
            for (int kick = 0; kick < p.kicks; ++kick) {
                try {
                    apply_kick(s, p.kick_strength, phases[static_cast<std::size_t>(kick)]);
                } catch (const GridError& e) {
                    throw GridError(e.n_max(), e.edge_occupation(), kick + 1);
                }
                apply_free(s, p.period);
                record(s, out.energies, out.p0);
                if (std::find(options.snapshot_kicks.begin(), options.snapshot_kicks.end(),
                              kick + 1) != options.snapshot_kicks.end()) {
                    out.snapshots.emplace_back(kick + 1, s);
                }
            }
        } catch (const GridError&) {
            const int wider = 2 * start.n_max();
            if (!options.auto_escalate || wider > options.max_n_max) {
                throw;
            }
            start = start.widened(wider);
            continue;
        }
        out.n_max = s.n_max();
        out.final_state = std::move(s);
        return out;
    }
}

void accumulate(std::vector<std::pair<double, double>>& points, const LadderState& s,
                double weight) {
    const auto amps = s.amplitudes();
    for (int n = -s.n_max(); n <= s.n_max(); ++n) {
        points.emplace_back(n + s.beta(), weight * std::norm(amps[static_cast<std::size_t>(n + s.n_max())]));
    }
}

MomentumDistribution merge(std::vector<std::pair<double, double>> points) {
    std::stable_sort(points.begin(), points.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    MomentumDistribution out;
    for (const auto& [p, w] : points) {
        if (!out.p.empty() && out.p.back() == p) {
            out.probability.back() += w;
        } else {
            out.p.push_back(p);
            out.probability.push_back(w);
        }
    }
    return out;
}

}  // namespace

LadderState::LadderState(double beta, int n_max)
    : beta_(beta), n_max_(n_max), amps_(static_cast<std::size_t>(2 * n_max + 1), cplx{0.0, 0.0}) {
    if (n_max < 1) {
        throw std::invalid_argument("LadderState: n_max must be positive");
    }
    amps_[static_cast<std::size_t>(n_max)] = 1.0;
}

std::size_t LadderState::index(int n) const {
    if (n < -n_max_ || n > n_max_) {
        throw std::out_of_range("LadderState: momentum order outside the grid");
    }
    return static_cast<std::size_t>(n + n_max_);
}

double LadderState::norm() const {
    double sum = 0.0;
    for (const auto& c : amps_) {
        sum += std::norm(c);
    }
    return sum;
}

double LadderState::edge_occupation() const {
    return std::max(std::norm(amps_.front()), std::norm(amps_.back()));
}

LadderState LadderState::widened(int n_max) const {
    if (n_max < n_max_) {
        throw std::invalid_argument("LadderState::widened: cannot shrink");
    }
    LadderState out(beta_, n_max);
    out.amps_[static_cast<std::size_t>(n_max)] = 0.0;
    for (int n = -n_max_; n <= n_max_; ++n) {
        out.amplitude(n) = amplitude(n);
    }
    return out;
}

double fidelity(const LadderState& a, const LadderState& b) {
    if (a.size() != b.size() || a.beta() != b.beta()) {
        throw std::invalid_argument("fidelity: incompatible ladders");
    }
    cplx overlap{0.0, 0.0};
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i) {
        overlap += std::conj(x[i]) * y[i];
    }
    return std::norm(overlap);
}

double sigma_from_fwhm(double fwhm) { return fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2)); }

std::vector<EnsembleMember> init_state(const InitialCondition& ic, int n_max) {
    if (n_max < 8) {
        throw std::invalid_argument("init_state: n_max must be at least 8");
    }
    std::vector<EnsembleMember> out;
    if (const auto* pw = std::get_if<PlaneWave>(&ic)) {
        if (!(pw->beta >= -0.5 && pw->beta < 0.5)) {
            throw std::invalid_argument("init_state: quasimomentum outside [-1/2, 1/2)");
        }
        out.push_back({1.0, LadderState(pw->beta, n_max)});
        return out;
    }

    const auto& g = std::get<GaussianEnsemble>(ic);
    if (!(g.sigma > 0.0)) {
        throw std::invalid_argument("init_state: sigma must be positive");
    }
    if (g.members < 1) {
        throw std::invalid_argument("init_state: need at least one member");
    }
    // quasimomentum is measured in 2*hbar*k_L, sigma in hbar*k_L
    const double sigma_beta = g.sigma / 2.0;
    const boost::math::normal_distribution<double> gauss(0.0, sigma_beta);
    const double outside = 2.0 * boost::math::cdf(boost::math::complement(gauss, 0.5));
    if (outside > 1e-3) {
        throw std::invalid_argument("init_state: momentum width exceeds the quasimomentum zone");
    }

    const double weight = 1.0 / g.members;
    out.reserve(static_cast<std::size_t>(g.members));
    if (g.sampling == Sampling::stratified) {
        for (int i = 0; i < g.members; ++i) {
            const double beta = boost::math::quantile(gauss, (i + 0.5) / g.members);
            out.push_back({weight, LadderState(beta, n_max)});
        }
    } else {
        std::mt19937_64 engine(g.seed);
        std::normal_distribution<double> draw(0.0, sigma_beta);
        for (int i = 0; i < g.members; ++i) {
            double beta = draw(engine);
            beta -= std::floor(beta + 0.5);  // fold into [-1/2, 1/2)
            out.push_back({weight, LadderState(beta, n_max)});
        }
    }
    return out;
}

void apply_kick(LadderState& s, double k, double phi) {
    if (k == 0.0) {
        return;
    }
    const int n_max = s.n_max();
    const int length = static_cast<int>(s.size());
    auto& ws = workspace_for(length);
    cplx* buf = ws.data();
    auto amps = s.amplitudes();

    for (int n = -n_max; n <= n_max; ++n) {
        const int m = n < 0 ? n + length : n;
        buf[m] = amps[static_cast<std::size_t>(n + n_max)];
    }
    ws.to_position();
    const double c = std::cos(phi);
    const double sn = std::sin(phi);
    for (int j = 0; j < length; ++j) {
        // cos(x + phi) from the tabulated grid
        const double cx = ws.cos_x(j) * c - ws.sin_x(j) * sn;
        buf[j] *= std::polar(1.0, -k * cx);
    }
    ws.to_momentum();
    const double inv = 1.0 / length;
    for (int n = -n_max; n <= n_max; ++n) {
        const int m = n < 0 ? n + length : n;
        amps[static_cast<std::size_t>(n + n_max)] = buf[m] * inv;
    }

    const double edge = s.edge_occupation();
    if (!(edge < kEdgeTolerance)) {
        throw GridError(n_max, edge, -1);
    }
}

void apply_free(LadderState& s, const model::ScaledPeriod& period) {
    const int n_max = s.n_max();
    const double beta = s.beta();
    const auto ell = static_cast<std::int64_t>(period.ell);
    auto amps = s.amplitudes();
    for (int n = -n_max; n <= n_max; ++n) {
        const auto nn = static_cast<std::int64_t>(n);
        const double p = n + beta;
        // T p^2 / 2 = pi*ell*n^2 + pi*ell*(2 n beta + beta^2) + eps p^2 / 2
        const double rest = std::numbers::pi * static_cast<double>(ell) * (2.0 * n * beta + beta * beta) +
                            0.5 * period.epsilon * p * p;
        amps[static_cast<std::size_t>(n + n_max)] *= phase_factor(ell * nn * nn, std::fmod(rest, model::kTwoPi));
    }
}

void apply_free(LadderState& s, double scaled_period) {
    apply_free(s, model::ScaledPeriod::from_value(scaled_period));
}

double MomentumDistribution::total() const {
    double sum = 0.0;
    for (double w : probability) {
        sum += w;
    }
    return sum;
}

Trajectory evolve(const InitialCondition& ic, const model::KickParams& p, int n_max,
                  const EvolveOptions& options) {
    p.validate();
    const auto members = init_state(ic, n_max);
    const auto phases = model::phase_sequence(p);

    std::vector<MemberResult> results(members.size());
    parallel_for(members.size(), options.threads, [&](std::size_t i) {
        results[i] = run_member(members[i].state, p, phases, options);
    });

    Trajectory traj;
    const auto steps = static_cast<std::size_t>(p.kicks) + 1;
    traj.energies.assign(steps, 0.0);
    traj.p0_fractions.assign(steps, 0.0);
    std::vector<std::pair<double, double>> final_points;
    std::vector<std::vector<std::pair<double, double>>> snap_points(options.snapshot_kicks.size());

    for (std::size_t i = 0; i < members.size(); ++i) {
        const double w = members[i].weight;
        const auto& r = results[i];
        for (std::size_t t = 0; t < steps; ++t) {
            traj.energies[t] += w * r.energies[t];
            traj.p0_fractions[t] += w * r.p0[t];
        }
        traj.n_max_used = std::max(traj.n_max_used, r.n_max);
        if (options.keep_final_distribution) {
            accumulate(final_points, r.final_state, w);
        }
        for (const auto& [kick, state] : r.snapshots) {
            for (std::size_t j = 0; j < options.snapshot_kicks.size(); ++j) {
                if (options.snapshot_kicks[j] == kick) {
                    accumulate(snap_points[j], state, w);
                }
            }
        }
    }
    if (options.keep_final_distribution) {
        traj.final_distribution = merge(std::move(final_points));
    }
    for (std::size_t j = 0; j < options.snapshot_kicks.size(); ++j) {
        if (!snap_points[j].empty()) {
            traj.snapshots.emplace_back(options.snapshot_kicks[j], merge(std::move(snap_points[j])));
        }
    }
    return traj;
}

MomentumDistribution bin_distribution(const MomentumDistribution& dist, int bins_per_unit) {
    if (bins_per_unit < 0) {
        throw std::invalid_argument("bin_distribution: negative resolution");
    }
    const double total = dist.total();
    if (!(total > 0.0)) {
        throw std::invalid_argument("bin_distribution: empty distribution");
    }
    if (bins_per_unit == 0) {
        MomentumDistribution out = dist;
        for (auto& w : out.probability) {
            w /= total;
        }
        return out;
    }
    std::map<std::int64_t, double> bins;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const auto idx = static_cast<std::int64_t>(std::floor(dist.p[i] * bins_per_unit + 0.5));
        bins[idx] += dist.probability[i];
    }
    MomentumDistribution out;
    out.p.reserve(bins.size());
    out.probability.reserve(bins.size());
    for (const auto& [idx, w] : bins) {
        out.p.push_back(static_cast<double>(idx) / bins_per_unit);
        out.probability.push_back(w / total);
    }
    return out;
}

MomentumDistribution momentum_distribution(const Trajectory& traj, int bins_per_unit) {
    return bin_distribution(traj.final_distribution, bins_per_unit);
}

}  // namespace krlab::quantum
