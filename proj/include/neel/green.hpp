#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "neel/energy.hpp"
#include "neel/fractional.hpp"
#include "neel/grid.hpp"

namespace neel {

// Fourier symbol of the fundamental solution of
// L = -d^2/dx^2 + (nu/2) cos^2(theta_h) (-d^2/dx^2)^{1/2} + cos^2(theta_h).
inline double green_hat(double k, const ModelParams& p)
{
    const double c2 = std::pow(p.cos_theta_h(), 2);
    const double ak = std::abs(k);
    return 1.0 / (ak * ak + 0.5 * p.nu() * c2 * ak + c2);
}

// nu / (2 pi cos^2 theta_h), the coefficient of the |x|^-2 tail of G.
inline double green_decay_coeff(const ModelParams& p)
{
    return p.nu() / (2.0 * pi * std::pow(p.cos_theta_h(), 2));
}

// G(x) = (2 nu / pi) int_0^inf t exp(-t |x| c) / (nu^2 c^2 t^2 + 4 (t^2 - 1)^2) dt,
// c = cos(theta_h). The range is split at t = 1; t = 1 - e^s on the left and
// t = 1 + e^s on the right cluster nodes logarithmically around the peak.
inline double green_quadrature(double x, const ModelParams& p, double rel_tol = 1e-11)
{
    using boost::math::quadrature::gauss_kronrod;
    const double c = p.cos_theta_h();
    const double nu = p.nu();
    const double ax = std::abs(x);
    auto integrand = [&](double t) {
        const double q = t * t - 1.0;
        return t * std::exp(-t * ax * c) / (nu * nu * c * c * t * t + 4.0 * q * q);
    };
    auto left = [&](double s) {
        const double e = std::exp(s);
        return integrand(1.0 - e) * e;
    };
    auto right = [&](double s) {
        const double e = std::exp(s);
        return integrand(1.0 + e) * e;
    };

    double total = 0.0;
    auto piece = [&](auto f, double a, double b) {
        double err = 0.0, l1 = 0.0;
        const double v = gauss_kronrod<double, 61>::integrate(f, a, b, 30, rel_tol, &err, &l1);
        if (!(err <= 1e-8 * l1) || !std::isfinite(v))
            throw std::runtime_error("green_quadrature: no convergence at x = " + std::to_string(x) +
                                     " (error estimate " + std::to_string(err) + ")");
        total += v;
    };
    piece(left, -60.0, 0.0);
    piece(right, -60.0, 40.0);
    return 2.0 * nu / pi * total;
}

// Samples G(m * spacing), m = 0..n, computed once per (grid, params) and
// read-only afterwards.
class GreenKernel {
public:
    GreenKernel(const Grid1D& grid, const ModelParams& params) : grid_(grid), params_(params)
    {
        samples_.resize(grid.sample_count());
        for (int m = 0; m <= grid.n_points(); ++m) samples_[m] = green_quadrature(m * grid.spacing(), params);
    }

    const Grid1D& grid() const { return grid_; }
    const ModelParams& params() const { return params_; }
    double at_offset(int m) const { return samples_[static_cast<std::size_t>(std::abs(m))]; }
    const std::vector<double>& samples() const { return samples_; }

private:
    Grid1D grid_;
    ModelParams params_;
    std::vector<double> samples_;
};

// (G * f)(x_i) = sum_j w_j G(x_i - x_j) f_j h with trapezoid weights w.
inline FieldSamples convolve_green(const FieldSamples& f, const GreenKernel& kernel)
{
    const auto& g = f.grid();
    if (!(g == kernel.grid())) throw std::invalid_argument("convolve_green: grid mismatch");
    const int n = g.n_points();
    const double dx = g.spacing();
    std::vector<double> wf(f.values());
    wf.front() *= 0.5;
    wf.back() *= 0.5;
    std::vector<double> out(g.sample_count(), 0.0);
    for (int i = 0; i <= n; ++i) {
        double s = 0.0;
        for (int j = 0; j <= n; ++j) s += kernel.at_offset(i - j) * wf[j];
        out[i] = s * dx;
    }
    return FieldSamples(g, std::move(out));
}

inline FieldSamples convolve_green(const FieldSamples& f, const ModelParams& params)
{
    return convolve_green(f, GreenKernel(f.grid(), params));
}

// L u with the 3-point second difference (periodic wrap at the ends) and the
// spectral half-Laplacian.
inline FieldSamples apply_L(const FieldSamples& u, const ModelParams& p)
{
    const auto& g = u.grid();
    const int n = g.n_points();
    const double dx = g.spacing();
    const double c2 = std::pow(p.cos_theta_h(), 2);
    const auto lam = half_laplacian_spectral(u);
    const auto& v = u.values();
    std::vector<double> out(g.sample_count());
    for (int i = 0; i <= n; ++i) {
        const double left = i > 0 ? v[i - 1] : v[n - 1];
        const double right = i < n ? v[i + 1] : v[1];
        const double d2 = (left - 2.0 * v[i] + right) / (dx * dx);
        out[i] = -d2 + 0.5 * p.nu() * c2 * lam[i] + c2 * v[i];
    }
    return FieldSamples(g, std::move(out));
}

struct ForcingTerms {
    FieldSamples rho_offset; // rho - theta_h
    FieldSamples f1;
    FieldSamples f2;
    FieldSamples f3;
    FieldSamples f_total;
    // Point source at x = 0 produced by the corner of rho there:
    // L(rho - theta_h) = f + corner_mass * delta. Taken as h times the discrete
    // mismatch at the centre node; it approximates 2 |theta_x(0)|.
    double corner_mass;
    // int (cos(theta_h)(rho - theta_h) - sin(rho) + h) dx, the mean of the field
    // inside f2; it sets the |x|^-2 tail of f2.
    double q_integral;
};

inline double trapezoid(const FieldSamples& f)
{
    const auto& v = f.values();
    double s = 0.5 * (v.front() + v.back());
    for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
    return s * f.grid().spacing();
}

// The three forcing terms of L(rho - theta_h) = f1 + f2 + f3, rho = min(theta,
// pi - theta), evaluated on the right half and mirrored so that rho is even.
inline ForcingTerms forcing_terms(const Profile& p, double residual_limit = 1e-3)
{
    const auto& g = p.grid();
    const int c = g.center();
    if (std::abs(p[c] - pi / 2) > 1e-9) throw std::domain_error("forcing_terms: profile is not recentered");
    const double res = el_residual(p).sup_norm;
    if (!(res <= residual_limit))
        throw std::domain_error("forcing_terms: profile is not converged (residual " + std::to_string(res) + ")");

    const auto& par = p.params();
    const double th = par.theta_h();
    const double ch = par.cos_theta_h();
    const double hf = par.h();
    const double nu = par.nu();

    std::vector<double> rho(g.sample_count());
    for (int m = 0; m <= c; ++m) {
        const double t = p[c + m];
        const double r = t <= pi / 2 ? t : pi - t;
        rho[c + m] = r;
        rho[c - m] = r;
    }
    std::vector<double> v(rho.size()), q(rho.size()), us(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        v[i] = rho[i] - th;
        q[i] = ch * v[i] - std::sin(rho[i]) + hf;
        us[i] = std::sin(rho[i]) - hf;
    }
    FieldSamples qf(g, q);
    const auto lam_q = half_laplacian_spectral(qf);
    const auto lam_u = half_laplacian_spectral(FieldSamples(g, us));

    std::vector<double> f1(rho.size()), f2(rho.size()), f3(rho.size()), ft(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double cr = std::cos(rho[i]);
        f1[i] = ch * (ch - cr) * v[i] + cr * q[i];
        f2[i] = 0.5 * nu * ch * lam_q[i];
        f3[i] = 0.5 * nu * (ch - cr) * lam_u[i];
        ft[i] = f1[i] + f2[i] + f3[i];
    }
    FieldSamples vf(g, v);
    const auto lv = apply_L(vf, par);
    const double corner = (lv[c] - ft[c]) * g.spacing();
    return ForcingTerms{std::move(vf),
                        FieldSamples(g, std::move(f1)),
                        FieldSamples(g, std::move(f2)),
                        FieldSamples(g, std::move(f3)),
                        FieldSamples(g, std::move(ft)),
                        corner,
                        trapezoid(qf)};
}

struct DecayWindow {
    double lo;
    double hi;
};

struct DecayReport {
    double amplitude_multipole = 0.0; // green_decay_coeff * int f_total
    double amplitude_tailfit = 0.0;   // median of x^2 (rho - theta_h) over the window
    double exponent_fit = 0.0;        // least-squares slope of log(rho - theta_h) vs log x
    double green_coeff = 0.0;
    // Tail coefficient including the corner source and the |x|^-2 tail of f2:
    // green_coeff (int f + corner_mass) - nu / (2 pi cos theta_h) q_integral.
    double amplitude_full = 0.0;
    double corner_mass = 0.0;
    double forcing_integral = 0.0;
    DecayWindow window{0.0, 0.0};
};

inline DecayReport decay_amplitude(const Profile& p, std::optional<DecayWindow> window = std::nullopt,
                                   double residual_limit = 1e-3)
{
    const auto& g = p.grid();
    const DecayWindow w = window.value_or(DecayWindow{g.half_length() / 8.0, g.half_length() / 4.0});
    if (!(w.lo > 0.0 && w.hi > w.lo && w.hi <= g.half_length()))
        throw std::out_of_range("decay_amplitude: fit window must satisfy 0 < lo < hi <= half_length");

    const auto ft = forcing_terms(p, residual_limit);
    const auto& par = p.params();
    DecayReport r;
    r.green_coeff = green_decay_coeff(par);
    r.forcing_integral = trapezoid(ft.f_total);
    r.amplitude_multipole = r.green_coeff * r.forcing_integral;
    r.corner_mass = ft.corner_mass;
    r.amplitude_full = r.green_coeff * (r.forcing_integral + ft.corner_mass) -
                       par.nu() / (2.0 * pi * par.cos_theta_h()) * ft.q_integral;
    r.window = w;

    std::vector<double> plateau, lx, ly;
    for (int i = g.center() + 1; i <= g.n_points(); ++i) {
        const double x = g.node(i);
        if (x < w.lo || x > w.hi) continue;
        const double d = ft.rho_offset[i];
        if (!(d > 0.0))
            throw std::domain_error("decay_amplitude: non-positive tail value at x = " + std::to_string(x));
        plateau.push_back(x * x * d);
        lx.push_back(std::log(x));
        ly.push_back(std::log(d));
    }
    if (plateau.size() < 2) throw std::out_of_range("decay_amplitude: fit window contains fewer than two nodes");

    auto sorted = plateau;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    r.amplitude_tailfit = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= m;
    my /= m;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    r.exponent_fit = sxy / sxx;
    return r;
}

} // namespace neel
