#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "neel/fft.hpp"
#include "neel/grid.hpp"

namespace neel {

// (-d^2/dx^2)^{1/2} by FFT. The straight line through the two endpoint values
// is subtracted first so the remainder is periodic on [-L, L); nothing is added
// back. The sample at +L repeats the one at -L.
inline FieldSamples half_laplacian_spectral(const FieldSamples& u)
{
    const auto& g = u.grid();
    const int n = g.n_points();
    const auto& v = u.values();
    const double u0 = v[0];
    const double slope = (v[n] - v[0]) / n;
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = v[i] - (u0 + slope * i);
    auto out = detail::apply_multiplier(w, 2.0 * g.half_length(), [](double k) { return k; });
    out.push_back(out[0]);
    return FieldSamples(g, std::move(out));
}

// Periodic L2 pairing h * sum_{i<n} a_i b_i (the sample at +L is the image of -L).
inline double periodic_inner(const FieldSamples& a, const FieldSamples& b)
{
    if (!(a.grid() == b.grid())) throw std::invalid_argument("periodic_inner: grid mismatch");
    const int n = a.grid().n_points();
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += a[i] * b[i];
    return s * a.grid().spacing();
}

// (1/pi) PV int (u(x_i) - u(y)) / (x_i - y)^2 dy. The window |y - x_i| < 4h is
// handled by its Taylor expansion, the rest of the domain by the trapezoid
// rule, and beyond +-L the field is continued by its endpoint values.
inline double half_laplacian_pv(const FieldSamples& u, int i)
{
    const auto& g = u.grid();
    const int n = g.n_points();
    if (i <= 0 || i >= n) throw std::out_of_range("half_laplacian_pv: node must be interior");
    constexpr int w = 4;
    const double h = g.spacing();
    const double delta = w * h;
    const auto& v = u.values();
    const double ui = v[i];

    double total = -delta * (v[i + 1] - 2.0 * ui + v[i - 1]) / (h * h);

    auto kernel = [&](int j) {
        const double d = (i - j) * h;
        return (ui - v[j]) / (d * d);
    };

    if (i - w >= 0) {
        double s = 0.0;
        if (i - w > 0) {
            s = 0.5 * (kernel(0) + kernel(i - w));
            for (int j = 1; j < i - w; ++j) s += kernel(j);
        }
        total += s * h + (ui - v[0]) / (i * h);
    } else {
        total += (ui - v[0]) / delta;
    }

    if (i + w <= n) {
        double s = 0.0;
        if (i + w < n) {
            s = 0.5 * (kernel(n) + kernel(i + w));
            for (int j = i + w + 1; j < n; ++j) s += kernel(j);
        }
        total += s * h + (ui - v[n]) / ((n - i) * h);
    } else {
        total += (ui - v[n]) / delta;
    }
    return total / pi;
}

// (1/2pi) double integral of (u(x) - u(y))^2 / (x - y)^2 by the double trapezoid
// rule, with the squared forward difference on the diagonal. The cross terms
// between the domain and the constant continuation of u beyond +-L are added in
// closed form; the exterior-exterior block (nonzero only if u(-L) != u(L)) is not.
inline double h_half_seminorm_sq(const FieldSamples& u)
{
    const auto& g = u.grid();
    const int n = g.n_points();
    const double h = g.spacing();
    const auto& v = u.values();
    auto weight = [n](int i) { return (i == 0 || i == n) ? 0.5 : 1.0; };

    std::vector<double> inv_sq(n + 1, 0.0);
    for (int d = 1; d <= n; ++d) inv_sq[d] = 1.0 / ((d * h) * (d * h));

    double interior = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double wi = weight(i);
        const double slope = i < n ? (v[i + 1] - v[i]) / h : (v[n] - v[n - 1]) / h;
        double row = 0.5 * wi * slope * slope;
        for (int j = i + 1; j <= n; ++j) {
            const double dv = v[i] - v[j];
            row += weight(j) * dv * dv * inv_sq[j - i];
        }
        interior += 2.0 * wi * row;
    }
    interior *= h * h;

    double exterior = 0.0;
    for (int i = 0; i <= n; ++i) {
        double t = 0.0;
        if (i > 0) t += (v[i] - v[0]) * (v[i] - v[0]) / (i * h);
        if (i < n) t += (v[i] - v[n]) * (v[i] - v[n]) / ((n - i) * h);
        exterior += weight(i) * t;
    }
    exterior *= 2.0 * h;

    return (interior + exterior) / (2.0 * pi);
}

} // namespace neel
