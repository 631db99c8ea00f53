#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "neel/fractional.hpp"
#include "neel/grid.hpp"

namespace neel {

struct EnergyBreakdown {
    double exchange = 0.0;
    double anisotropy = 0.0;
    double stray = 0.0;
    double total = 0.0;
};

// spectral: (nu/4) <u, Lambda u> with the FFT operator, whose exact derivative is
// energy_gradient. double_integral: (nu/4) h_half_seminorm_sq(u).
enum class StrayForm { spectral, double_integral };

// u = sin(theta) - h on the grid.
inline FieldSamples magnetization_offset(const Profile& p)
{
    std::vector<double> u(p.size());
    const double h = p.params().h();
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::sin(p[i]) - h;
    return FieldSamples(p.grid(), std::move(u));
}

inline EnergyBreakdown energy(const Profile& p, StrayForm form = StrayForm::spectral)
{
    const auto& g = p.grid();
    const int n = g.n_points();
    const double dx = g.spacing();
    const auto& v = p.values();
    const double nu = p.params().nu();

    EnergyBreakdown e;
    for (int i = 0; i < n; ++i) {
        const double d = v[i + 1] - v[i];
        e.exchange += d * d;
    }
    e.exchange *= 0.5 / dx;

    const auto u = magnetization_offset(p);
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        e.anisotropy += w * u[i] * u[i];
    }
    e.anisotropy *= 0.5 * dx;

    if (form == StrayForm::spectral) {
        const auto lam = half_laplacian_spectral(u);
        const double slope = (u[n] - u[0]) / n;
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += (u[i] - (u[0] + slope * i)) * lam[i];
        e.stray = 0.25 * nu * s * dx;
    } else {
        e.stray = 0.25 * nu * h_half_seminorm_sq(u);
    }
    e.total = e.exchange + e.anisotropy + e.stray;
    return e;
}

// L2 gradient of energy(p, spectral) with respect to the interior values:
// -theta_xx + cos(theta)(sin(theta) - h) + (nu/2) cos(theta) Lambda sin(theta).
// Zero at the two pinned endpoints.
inline FieldSamples energy_gradient(const Profile& p)
{
    const auto& g = p.grid();
    const int n = g.n_points();
    const double dx = g.spacing();
    const auto& v = p.values();
    const double nu = p.params().nu();
    const auto u = magnetization_offset(p);
    const auto lam = half_laplacian_spectral(u);

    std::vector<double> out(g.sample_count(), 0.0);
    for (int i = 1; i < n; ++i) {
        const double lap = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (dx * dx);
        const double c = std::cos(v[i]);
        out[i] = -lap + c * u[i] + 0.5 * nu * c * lam[i];
    }
    return FieldSamples(g, std::move(out));
}

struct Residual {
    FieldSamples field;
    double sup_norm;
    double l2_norm;
};

inline Residual el_residual(const Profile& p)
{
    auto field = energy_gradient(p);
    double sup = 0.0, sq = 0.0;
    for (double r : field.values()) {
        sup = std::max(sup, std::abs(r));
        sq += r * r;
    }
    return Residual{std::move(field), sup, std::sqrt(sq * p.grid().spacing())};
}

namespace detail {

// Triangle-wave fold of the real line onto [0, pi].
inline double fold_rotation(double t)
{
    constexpr double two_pi = 2.0 * pi;
    double r = std::fmod(t, two_pi);
    if (r < 0.0) r += two_pi;
    return r <= pi ? r : two_pi - r;
}

inline void require_range(const Profile& p, const char* who)
{
    const double lo = p.params().theta_h() - 1e-12;
    const double hi = p.params().upper_plateau() + 1e-12;
    for (double v : p.values())
        if (v < lo || v > hi)
            throw std::domain_error(std::string(who) + ": values must lie in [theta_h, pi - theta_h]");
}

} // namespace detail

// Fold into [0, pi], then truncate to [theta_h, pi - theta_h].
inline Profile clamp_rotations(const Profile& p)
{
    const double lo = p.params().theta_h();
    const double hi = p.params().upper_plateau();
    std::vector<double> v(p.values());
    for (double& x : v) x = std::clamp(detail::fold_rotation(x), lo, hi);
    return p.with_values(std::move(v));
}

// Discrete symmetric decreasing rearrangement of rho = min(theta, pi - theta).
// The sorted samples are dealt out from the centre alternately to the left and
// to the right (c, c-1, c+1, c-2, ...), then unfolded: theta = rho for x >= 0 and
// pi - rho for x < 0. The multiset of rho values is preserved exactly, so the
// anisotropy energy is unchanged. An input already in that arrangement is
// returned as is.
inline Profile symmetrize_rearrange(const Profile& p)
{
    detail::require_range(p, "symmetrize_rearrange");
    const int n = p.grid().n_points();
    const int c = p.grid().center();
    const auto& v = p.values();
    const double half = pi / 2;

    std::vector<double> rho(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) rho[i] = v[i] <= half ? v[i] : pi - v[i];

    std::vector<int> slot(v.size());
    slot[0] = c;
    for (int m = 1; m <= c; ++m) {
        slot[2 * m - 1] = c - m;
        slot[2 * m] = c + m;
    }

    bool arranged = true;
    for (int j = 0; j <= n && arranged; ++j)
        if ((j >= c) != (v[j] <= half) && v[j] != half) arranged = false;
    for (int k = 1; k <= n && arranged; ++k)
        if (rho[slot[k]] > rho[slot[k - 1]] + 4e-16) arranged = false;
    if (arranged) return p;

    std::vector<int> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rho[a] > rho[b]; });

    std::vector<double> out(v.size());
    for (int k = 0; k <= n; ++k) {
        const int j = slot[k];
        const int src = order[k];
        out[j] = ((j >= c) == (v[src] <= half)) ? v[src] : pi - v[src];
    }
    auto result = p.with_values(std::move(out));
    return p.is_pinned() ? result.pinned() : result;
}

// theta_t = arcsin(t sin theta1 + (1 - t) sin theta2) for x > 0, pi minus that for
// x < 0, and pi/2 at x = 0.
inline Profile sin_midpoint(const Profile& p1, const Profile& p2, double t)
{
    if (!(p1.grid() == p2.grid()) || !(p1.params() == p2.params()))
        throw std::invalid_argument("sin_midpoint: profiles live on different grids or parameters");
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("sin_midpoint: t must lie in [0, 1]");
    const int c = p1.grid().center();
    const double half = pi / 2;
    for (const Profile* p : {&p1, &p2}) {
        if (std::abs((*p)[c] - half) > 1e-12)
            throw std::domain_error("sin_midpoint: profiles must be recentered (theta(0) = pi/2)");
        detail::require_range(*p, "sin_midpoint");
    }
    std::vector<double> out(p1.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double s = std::min(1.0, t * std::sin(p1[j]) + (1.0 - t) * std::sin(p2[j]));
        const double a = std::asin(s);
        out[j] = static_cast<int>(j) >= c ? a : pi - a;
    }
    out[c] = half;
    return p1.with_values(std::move(out)).pinned();
}

} // namespace neel
