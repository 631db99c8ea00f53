#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "neel/energy.hpp"
#include "neel/grid.hpp"

namespace neel {

struct SolveOptions {
    double tol = 1e-6;          // sup norm of the interior gradient
    int max_iter = 20000;
    double step_init = 1.0;     // first trial step of the line search
    bool use_rearrangement_preprocess = true;
    int rearrange_every = 25;   // 0 disables periodic rearrangement
    // Search direction -P^{-1} g with P = -d^2/dx^2 + cos^2(theta_h) (Dirichlet).
    // When false the plain L2 gradient is used.
    bool preconditioned = true;
    double armijo = 1e-4;

    void validate() const
    {
        if (!(tol > 0.0)) throw std::invalid_argument("solve options: tol must be positive");
        if (max_iter < 1) throw std::invalid_argument("solve options: max_iter must be at least 1");
        if (!(step_init > 0.0)) throw std::invalid_argument("solve options: step_init must be positive");
        if (rearrange_every < 0) throw std::invalid_argument("solve options: rearrange_every must be >= 0");
        if (!(armijo > 0.0 && armijo < 1.0)) throw std::invalid_argument("solve options: armijo must lie in (0, 1)");
    }
};

// 1 / (1 + nu pi / spacing): a step scale for the unpreconditioned gradient.
inline double symbol_step_estimate(const Grid1D& g, const ModelParams& p)
{
    return 1.0 / (1.0 + p.nu() * pi / g.spacing());
}

enum class SolveStatus { converged, max_iterations, line_search_failed };

inline const char* to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::line_search_failed: return "line_search_failed";
    }
    return "unknown";
}

inline SolveStatus solve_status_from_string(const std::string& s)
{
    if (s == "converged") return SolveStatus::converged;
    if (s == "max_iterations") return SolveStatus::max_iterations;
    if (s == "line_search_failed") return SolveStatus::line_search_failed;
    throw std::invalid_argument("unknown solve status '" + s + "'");
}

struct SolveResult {
    Profile profile;
    EnergyBreakdown energy;
    double residual_sup = 0.0;
    int iterations = 0;
    bool converged = false;
    SolveStatus status = SolveStatus::max_iterations;
    double tol = 0.0;
    std::optional<double> tail_amplitude;
    // Accepted energies. A new descent phase starts after every recentering
    // that moved the profile; phase_starts holds the index of each phase's
    // first entry.
    std::vector<double> energy_trace;
    std::vector<std::size_t> phase_starts;
};

namespace detail {

inline int crossing_count_and_index(const std::vector<double>& v, double& where)
{
    const double half = pi / 2;
    int count = 0;
    const std::size_t n = v.size() - 1;
    for (std::size_t i = 0; i <= n; ++i) {
        const double gi = v[i] - half;
        if (gi == 0.0) {
            ++count;
            where = static_cast<double>(i);
        } else if (i < n) {
            const double gn = v[i + 1] - half;
            if ((gi > 0.0 && gn < 0.0) || (gi < 0.0 && gn > 0.0)) {
                ++count;
                where = i + gi / (gi - gn);
            }
        }
    }
    return count;
}

// Fractional node index of the unique pi/2 crossing.
inline double crossing_index(const Profile& p)
{
    double where = 0.0;
    const int count = crossing_count_and_index(p.values(), where);
    if (count != 1)
        throw std::domain_error("recenter: expected exactly one pi/2 crossing, found " + std::to_string(count));
    return where;
}

// Solves (-D2 + sigma) x = r on the interior nodes in place (Thomas algorithm).
inline void solve_shifted_laplacian(std::vector<double>& r, double dx, double sigma)
{
    const int n = static_cast<int>(r.size()) - 1;
    const double a = -1.0 / (dx * dx);
    const double b = 2.0 / (dx * dx) + sigma;
    std::vector<double> cp(n, 0.0);
    cp[1] = a / b;
    r[1] /= b;
    for (int i = 2; i < n; ++i) {
        const double denom = b - a * cp[i - 1];
        cp[i] = a / denom;
        r[i] = (r[i] - a * r[i - 1]) / denom;
    }
    for (int i = n - 2; i >= 1; --i) r[i] -= cp[i] * r[i + 1];
    r[0] = 0.0;
    r[n] = 0.0;
}

struct DescentState {
    std::vector<double> theta;
    double energy;
    double step;
    int iterations = 0;
    std::vector<double> trace;
};

inline SolveStatus descend(const Grid1D& grid, const ModelParams& params, DescentState& st, const SolveOptions& o)
{
    const int n = grid.n_points();
    const double dx = grid.spacing();
    const double sigma = std::pow(params.cos_theta_h(), 2);
    auto profile = [&](std::vector<double> v) { return Profile(grid, params, std::move(v)); };

    auto grad = energy_gradient(profile(st.theta)).values();
    for (;;) {
        double gsup = 0.0;
        for (int i = 1; i < n; ++i) gsup = std::max(gsup, std::abs(grad[i]));
        if (gsup <= o.tol) return SolveStatus::converged;
        if (st.iterations >= o.max_iter) return SolveStatus::max_iterations;
        ++st.iterations;

        std::vector<double> d(grad.size());
        for (int i = 0; i <= n; ++i) d[i] = -grad[i];
        if (o.preconditioned) solve_shifted_laplacian(d, dx, sigma);
        double slope = 0.0, dmax = 0.0;
        for (int i = 1; i < n; ++i) {
            slope += grad[i] * d[i];
            dmax = std::max(dmax, std::abs(d[i]));
        }
        slope *= dx;

        double t = st.step;
        std::vector<double> cand;
        double e_cand = 0.0;
        for (;;) {
            std::vector<double> trial(st.theta);
            for (int i = 1; i < n; ++i) trial[i] += t * d[i];
            auto clamped = clamp_rotations(profile(std::move(trial)));
            e_cand = energy(clamped).total;
            if (e_cand <= st.energy + o.armijo * t * slope) {
                cand = clamped.values();
                break;
            }
            t *= 0.5;
            if (t * dmax < 1e-15) return SolveStatus::line_search_failed;
        }
        st.step = std::min(2.0 * t, 1e3);

        if (o.rearrange_every > 0 && st.iterations % o.rearrange_every == 0) {
            auto r = symmetrize_rearrange(profile(cand));
            const double e_r = energy(r).total;
            if (e_r <= e_cand) {
                cand = r.values();
                e_cand = e_r;
            }
        }
        st.theta = std::move(cand);
        st.energy = e_cand;
        st.trace.push_back(e_cand);
        grad = energy_gradient(profile(st.theta)).values();
    }
}

} // namespace detail

// Shift so that the unique pi/2 crossing sits on node n/2, by linear
// resampling with the end values continued outward.
inline Profile recenter(const Profile& p)
{
    const int n = p.grid().n_points();
    const int c = p.grid().center();
    const double shift = detail::crossing_index(p) - c;
    const auto& v = p.values();
    const double whole = std::floor(shift);
    const double frac = shift - whole;
    const int k = static_cast<int>(whole);
    auto sample = [&](long m) { return v[static_cast<std::size_t>(std::clamp<long>(m, 0, n))]; };

    std::vector<double> out(v.size());
    for (int j = 0; j <= n; ++j) {
        const double a = sample(static_cast<long>(j) + k);
        const double b = sample(static_cast<long>(j) + k + 1);
        out[j] = a + frac * (b - a);
    }
    out[c] = pi / 2;
    auto result = p.with_values(std::move(out));
    return p.is_pinned() ? result.pinned() : result;
}

// Position x* of the pi/2 crossing.
inline double crossing_position(const Profile& p)
{
    return (detail::crossing_index(p) - p.grid().center()) * p.grid().spacing();
}

// Projected descent on the interior values with Armijo backtracking (factor 1/2),
// clamp_rotations after every trial step and symmetrize_rearrange every
// rearrange_every iterations (kept only if it does not raise the energy). On
// convergence the profile is recentered; if that moved it, descent resumes from
// the recentered profile (at most a few rounds).
inline SolveResult minimize(const Profile& initial, const SolveOptions& opts = {})
{
    opts.validate();
    const auto& grid = initial.grid();
    const auto& params = initial.params();
    if (grid.half_length() < 2.0) throw std::invalid_argument("minimize: half_length must be at least 2");

    Profile start = clamp_rotations(initial.pinned());
    double e_start = energy(start).total;
    if (opts.use_rearrangement_preprocess) {
        auto r = symmetrize_rearrange(start);
        const double e_r = energy(r).total;
        if (e_r <= e_start) {
            start = r;
            e_start = e_r;
        }
    }

    detail::DescentState st{start.values(), e_start, opts.step_init, 0, {}};
    std::vector<std::size_t> phases{0};
    st.trace.push_back(e_start);
    SolveStatus status = detail::descend(grid, params, st, opts);

    constexpr int max_rounds = 6;
    for (int round = 0; round < max_rounds && status == SolveStatus::converged; ++round) {
        Profile cur(grid, params, st.theta);
        double shift = 0.0;
        try {
            shift = detail::crossing_index(cur) - grid.center();
        } catch (const std::domain_error&) {
            status = SolveStatus::max_iterations;
            break;
        }
        auto centered = recenter(cur);
        st.theta = centered.values();
        if (std::abs(shift) <= 1e-9) break;
        st.energy = energy(centered).total;
        phases.push_back(st.trace.size());
        st.trace.push_back(st.energy);
        st.step = opts.step_init;
        status = detail::descend(grid, params, st, opts);
    }

    if (status == SolveStatus::converged) st.theta = recenter(Profile(grid, params, st.theta)).values();
    Profile final_profile(grid, params, st.theta);
    const auto res = el_residual(final_profile);
    SolveResult out{final_profile, energy(final_profile), res.sup_norm, st.iterations, false, status, opts.tol,
                    std::nullopt, std::move(st.trace), std::move(phases)};
    out.converged = status == SolveStatus::converged && res.sup_norm <= opts.tol;
    if (status == SolveStatus::converged && !out.converged) out.status = SolveStatus::max_iterations;
    return out;
}

} // namespace neel
