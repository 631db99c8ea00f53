#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "neel/energy.hpp"
#include "neel/green.hpp"
#include "neel/minimizer.hpp"

namespace neel {

namespace detail {

// Fractional index of the first crossing of `level` by the samples.
inline double level_crossing(const std::vector<double>& v, double level)
{
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double a = v[i] - level;
        const double b = v[i + 1] - level;
        if (a == 0.0) return static_cast<double>(i);
        if ((a > 0.0) != (b > 0.0) && b != 0.0) return i + a / (a - b);
        if (b == 0.0) return static_cast<double>(i + 1);
    }
    throw std::domain_error("wall_width: profile never crosses level " + std::to_string(level));
}

} // namespace detail

// Distance between the crossings of pi/2 + d and pi/2 - d, d = (pi/2 - theta_h)/2.
inline double wall_width(const Profile& p)
{
    const double d = 0.5 * (pi / 2 - p.params().theta_h());
    const double upper = detail::level_crossing(p.values(), pi / 2 + d);
    const double lower = detail::level_crossing(p.values(), pi / 2 - d);
    return (lower - upper) * p.grid().spacing();
}

struct VerificationReport {
    bool monotone_strict = false;
    double descent_margin = 0.0;           // min_i (theta_i - theta_{i+1})
    std::optional<int> violation_index;    // first i with theta_{i+1} >= theta_i
    double symmetry_defect = 0.0;          // max_i |theta_i + theta_{n-i} - pi|
    double symmetry_threshold = 0.0;       // 10 tol
    bool symmetry_ok = false;
    double range_margin = 0.0;             // distance of interior values from the plateaus
    bool range_ok = false;
    double residual_sup = 0.0;
    double tol = 0.0;
    bool residual_ok = false;
    // Linearized equation L(rho - theta_h) = f away from the centre node; NaN
    // when the forcing terms could not be formed.
    double linearization_residual = std::nan("");
    bool linearization_ok = false;
    double f1_integral = 0.0;
    double f2_integral_ratio = 0.0;        // int f2 / int |f2|
    double f3_integral = 0.0;
    bool forcing_ok = false;
    std::optional<DecayReport> decay;
    std::string decay_error;
    bool decay_ok = false;                 // both amplitudes strictly positive
    EnergyBreakdown energy;
    double wall_width = 0.0;

    bool all_ok() const
    {
        return monotone_strict && symmetry_ok && range_ok && residual_ok && linearization_ok && forcing_ok && decay_ok;
    }
};

inline VerificationReport verify_profile(const Profile& p, double tol)
{
    const auto& g = p.grid();
    const int n = g.n_points();
    const int c = g.center();
    const auto& v = p.values();
    VerificationReport r;
    r.tol = tol;

    r.descent_margin = v[0] - v[1];
    for (int i = 0; i < n; ++i) {
        const double d = v[i] - v[i + 1];
        if (d < r.descent_margin) r.descent_margin = d;
        if (d <= 0.0 && !r.violation_index) r.violation_index = i;
    }
    r.monotone_strict = r.descent_margin > 0.0;

    for (int i = 0; i <= n; ++i) r.symmetry_defect = std::max(r.symmetry_defect, std::abs(v[i] + v[n - i] - pi));
    r.symmetry_threshold = 10.0 * tol;
    r.symmetry_ok = r.symmetry_defect <= r.symmetry_threshold;

    const double lo = p.params().theta_h();
    const double hi = p.params().upper_plateau();
    r.range_margin = hi - lo;
    for (int i = 1; i < n; ++i) r.range_margin = std::min({r.range_margin, v[i] - lo, hi - v[i]});
    r.range_ok = r.range_margin > 0.0;

    r.residual_sup = el_residual(p).sup_norm;
    r.residual_ok = r.residual_sup <= tol;
    r.energy = energy(p);
    try {
        r.wall_width = wall_width(p);
    } catch (const std::exception&) {
        r.wall_width = std::nan("");
    }

    try {
        const auto ft = forcing_terms(p);
        const auto lv = apply_L(ft.rho_offset, p.params());
        r.linearization_residual = 0.0;
        for (int i = 1; i < n; ++i)
            if (i != c) r.linearization_residual = std::max(r.linearization_residual, std::abs(lv[i] - ft.f_total[i]));
        r.linearization_ok = r.linearization_residual <= 10.0 * tol;
        double l1 = 0.0;
        for (double x : ft.f2.values()) l1 += std::abs(x);
        l1 *= g.spacing();
        r.f1_integral = trapezoid(ft.f1);
        r.f2_integral_ratio = l1 > 0.0 ? trapezoid(ft.f2) / l1 : 0.0;
        r.f3_integral = trapezoid(ft.f3);
        r.forcing_ok = r.f1_integral > 0.0 && r.f3_integral > 0.0 && std::abs(r.f2_integral_ratio) <= 1e-8;
        r.decay = decay_amplitude(p);
        r.decay_ok = r.decay->amplitude_multipole > 0.0 && r.decay->amplitude_tailfit > 0.0;
    } catch (const std::exception& e) {
        r.decay_error = e.what();
    }
    return r;
}

// Full checklist for a converged solve.
inline VerificationReport verify(const SolveResult& result)
{
    if (!result.converged) throw std::domain_error("verify: solve did not converge");
    return verify_profile(result.profile, result.tol);
}

struct SweepRow {
    double nu = 0.0;
    double h = 0.0;
    double energy_total = std::nan("");
    double wall_width = std::nan("");
    double amplitude_multipole = std::nan("");
    double amplitude_tailfit = std::nan("");
    double residual_sup = std::nan("");
    bool converged = false;
    std::string error;

    bool operator==(const SweepRow& o) const
    {
        auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
        return nu == o.nu && h == o.h && same(energy_total, o.energy_total) && same(wall_width, o.wall_width) &&
               same(amplitude_multipole, o.amplitude_multipole) && same(amplitude_tailfit, o.amplitude_tailfit) &&
               same(residual_sup, o.residual_sup) && converged == o.converged && error == o.error;
    }
};

struct SweepTable {
    std::vector<SweepRow> rows;
    bool operator==(const SweepTable&) const = default;
    bool all_converged() const
    {
        return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.converged; });
    }
};

struct SweepGrid {
    double half_length = 40.0;
    int n_points = 4096;
};

inline SweepRow solve_cell(double nu, double h, const SolveOptions& opts, const SweepGrid& sg)
{
    SweepRow row;
    row.nu = nu;
    row.h = h;
    try {
        const auto grid = make_grid(sg.half_length, sg.n_points);
        const ModelParams params(nu, h);
        const auto res = minimize(reference_profile(grid, params), opts);
        row.energy_total = res.energy.total;
        row.residual_sup = res.residual_sup;
        row.converged = res.converged;
        row.wall_width = wall_width(res.profile);
        if (!res.converged) {
            row.error = std::string("not converged: ") + to_string(res.status);
            return row;
        }
        const auto d = decay_amplitude(res.profile);
        row.amplitude_multipole = d.amplitude_multipole;
        row.amplitude_tailfit = d.amplitude_tailfit;
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

// One independent solve per (nu, h) cell, rows ordered nu-major in input order.
// Cells run on up to `threads` workers (0: hardware concurrency).
inline SweepTable sweep(const std::vector<double>& nu_values, const std::vector<double>& h_values,
                        const SolveOptions& opts, const SweepGrid& sg = {}, unsigned threads = 0)
{
    for (double nu : nu_values)
        if (!(nu > 0.0)) throw std::invalid_argument("sweep: every nu must be positive");
    for (double h : h_values)
        if (!(h >= 0.0 && h < 1.0)) throw std::invalid_argument("sweep: every h must lie in [0, 1)");
    opts.validate();

    const std::size_t cells = nu_values.size() * h_values.size();
    SweepTable table;
    table.rows.resize(cells);
    if (cells == 0) return table;

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, cells));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < cells; k = next++)
            table.rows[k] = solve_cell(nu_values[k / h_values.size()], h_values[k % h_values.size()], opts, sg);
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return table;
}

} // namespace neel
