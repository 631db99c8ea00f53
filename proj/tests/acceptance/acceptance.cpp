// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance               run every criterion
//   acceptance --criterion k run criterion k only
//
// Exit status 0 when every selected criterion passes, 1 otherwise.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>

#include "../oracles.hpp"
#include "neel/neel.hpp"

using namespace neel;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

double sup_diff(const Profile& a, const Profile& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

const SolveResult& solved(double nu, double h)
{
    static std::map<std::pair<double, double>, SolveResult> cache;
    auto it = cache.find({nu, h});
    if (it == cache.end())
        it = cache.emplace(std::pair{nu, h}, minimize(reference_profile(make_grid(40.0, 4096), ModelParams(nu, h))))
                 .first;
    return it->second;
}

Outcome criterion_1()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto& r = solved(1.0, 0.0);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto& p = r.profile;
    const int n = p.grid().n_points();
    double margin = p[0] - p[1], defect = 0.0;
    for (int i = 0; i < n; ++i) margin = std::min(margin, p[i] - p[i + 1]);
    for (int i = 0; i <= n; ++i) defect = std::max(defect, std::abs(p[i] + p[n - i] - pi));
    const bool pass = r.converged && r.residual_sup <= 1e-6 && secs < 60.0 && margin > 0.0 && defect <= 1e-5;
    return {pass, "converged=" + std::string(r.converged ? "yes" : "no") + " residual=" + fmt(r.residual_sup) +
                      " time=" + fmt(secs) + "s iterations=" + std::to_string(r.iterations) +
                      " min_descent=" + fmt(margin) + " symmetry_defect=" + fmt(defect)};
}

Outcome criterion_2()
{
    const auto ref = reference_profile(make_grid(40.0, 4096), ModelParams(1.0, 0.0));
    const auto starts = oracle::uniqueness_starts(ref, 12345);
    std::vector<Profile> finals;
    bool all_converged = true;
    for (const auto& s : starts) {
        const auto r = minimize(s);
        all_converged = all_converged && r.converged;
        finals.push_back(r.profile);
    }
    double worst = 0.0;
    for (std::size_t a = 0; a < finals.size(); ++a)
        for (std::size_t b = a + 1; b < finals.size(); ++b) worst = std::max(worst, sup_diff(finals[a], finals[b]));
    return {all_converged && worst <= 1e-4,
            "starts=5 all_converged=" + std::string(all_converged ? "yes" : "no") + " max_pairwise_sup=" + fmt(worst)};
}

Outcome criterion_3()
{
    const auto& r = solved(1.0, 0.0);
    if (!r.converged) return {false, "solve did not converge"};
    const auto d = decay_amplitude(r.profile, DecayWindow{5.0, 10.0});
    const auto& g = r.profile.grid();
    double lo = INFINITY, hi = -INFINITY;
    for (int i = g.center(); i <= g.n_points(); ++i) {
        const double x = g.node(i);
        if (x < 5.0 || x > 10.0) continue;
        const double v = x * x * (r.profile[i] - r.profile.params().theta_h());
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const bool pass = std::abs(d.exponent_fit + 2.0) <= 0.15 && lo > 0.0 && d.amplitude_tailfit > 0.0;
    return {pass, "exponent=" + fmt(d.exponent_fit) + " (target -2 +- 0.15) x2_offset_range=[" + fmt(lo) + ", " +
                      fmt(hi) + "] plateau=" + fmt(d.amplitude_tailfit)};
}

Outcome criterion_4()
{
    bool pass = true;
    std::ostringstream os;
    for (auto [nu, h] : {std::pair{1.0, 0.0}, std::pair{2.0, 0.3}, std::pair{0.5, 0.5}}) {
        const auto& r = solved(nu, h);
        if (!r.converged) return {false, "solve did not converge for nu=" + fmt(nu) + " h=" + fmt(h)};
        const auto d = decay_amplitude(r.profile);
        const double ratio = d.amplitude_tailfit / d.amplitude_multipole;
        const bool ok = d.amplitude_multipole > 0.0 && d.amplitude_tailfit > 0.0 && ratio >= 0.85 && ratio <= 1.15;
        pass = pass && ok;
        os << " (nu=" << fmt(nu) << " h=" << fmt(h) << " multipole=" << fmt(d.amplitude_multipole)
           << " tailfit=" << fmt(d.amplitude_tailfit) << " ratio=" << fmt(ratio) << " with_corner_and_f2_tail="
           << fmt(d.amplitude_full) << ")";
    }
    return {pass, "tailfit/multipole in [0.85, 1.15]:" + os.str()};
}

Outcome criterion_5()
{
    bool pass = true;
    std::ostringstream os;
    const double dx = pi / 1000.0;
    const int count = static_cast<int>(10.0 / dx) + 1;
    for (auto [nu, h] : {std::pair{1.0, 0.0}, std::pair{2.0, 0.5}}) {
        const ModelParams p(nu, h);
        const auto ref = oracle::green_by_fft(nu, h, dx, 22, count);
        double err = 0.0;
        bool even_positive = true;
        for (int j = 0; j < count; j += 4) {
            const double x = j * dx;
            const double gq = green_quadrature(x, p);
            err = std::max(err, std::abs(gq / ref[j] - 1.0));
            even_positive = even_positive && gq > 0.0 && green_quadrature(-x, p) == gq;
        }
        const double tail = 2500.0 * green_quadrature(50.0, p);
        const double coeff = green_decay_coeff(p);
        const bool ok = err <= 1e-4 && std::abs(tail / coeff - 1.0) <= 0.05 && even_positive;
        pass = pass && ok;
        os << " (nu=" << fmt(nu) << " h=" << fmt(h) << " max_rel_err=" << fmt(err) << " x2G(50)=" << fmt(tail)
           << " coeff=" << fmt(coeff) << " even_positive=" << (even_positive ? "yes" : "no") << ")";
    }
    return {pass, os.str().substr(1)};
}

Outcome criterion_6()
{
    bool pass = true;
    std::ostringstream os;
    for (auto [nu, h] : {std::pair{1.0, 0.0}, std::pair{2.0, 0.3}, std::pair{0.5, 0.5}}) {
        const auto& r = solved(nu, h);
        if (!r.converged) return {false, "solve did not converge for nu=" + fmt(nu) + " h=" + fmt(h)};
        const auto ft = forcing_terms(r.profile);
        double l1 = 0.0;
        for (double x : ft.f2.values()) l1 += std::abs(x);
        l1 *= r.profile.grid().spacing();
        const double i1 = trapezoid(ft.f1), i2 = trapezoid(ft.f2), i3 = trapezoid(ft.f3);
        const bool ok = std::abs(i2) <= 1e-8 * l1 && i1 > 0.0 && i3 > 0.0;
        pass = pass && ok;
        os << " (nu=" << fmt(nu) << " h=" << fmt(h) << " int_f1=" << fmt(i1) << " int_f2/|f2|_1=" << fmt(i2 / l1)
           << " int_f3=" << fmt(i3) << ")";
    }
    return {pass, os.str().substr(1)};
}

Outcome criterion_7()
{
    const auto g = make_grid(20.0, 1024);
    std::mt19937_64 rng(20240607);
    const double hs[] = {0.0, 0.3, 0.6, 0.9};
    double worst_clamp = -INFINITY, worst_rearrange = -INFINITY;
    for (int k = 0; k < 100; ++k) {
        const ModelParams par(0.5 + 0.05 * k, hs[k % 4]);
        const auto p = oracle::random_admissible(g, par, rng);
        const auto c = clamp_rotations(p);
        const auto s = symmetrize_rearrange(c);
        worst_clamp = std::max(worst_clamp, energy(c).total - energy(p).total);
        worst_rearrange = std::max(worst_rearrange, energy(s).total - energy(c).total);
    }
    return {worst_clamp <= 1e-12 && worst_rearrange <= 1e-12,
            "profiles=100 max_increase_clamp=" + fmt(worst_clamp) + " max_increase_rearrange=" + fmt(worst_rearrange)};
}

Outcome criterion_8()
{
    const auto g = make_grid(20.0, 1024);
    std::mt19937_64 rng(777);
    bool pass = true;
    double worst_gap = INFINITY;
    int strict_needed = 0;
    for (int k = 0; k < 20; ++k) {
        const ModelParams par(1.0, 0.1 * (k % 7));
        const auto p1 = oracle::random_recentered(g, par, rng);
        const auto p2 = oracle::random_recentered(g, par, rng);
        double sin_diff = 0.0;
        for (std::size_t i = 0; i < p1.size(); ++i)
            sin_diff = std::max(sin_diff, std::abs(std::sin(p1[i]) - std::sin(p2[i])));
        const double avg = 0.5 * (energy(p1).total + energy(p2).total);
        const double gap = avg - energy(sin_midpoint(p1, p2, 0.5)).total;
        worst_gap = std::min(worst_gap, gap);
        if (sin_diff >= 1e-6) {
            ++strict_needed;
            pass = pass && gap > 0.0;
        } else {
            pass = pass && gap >= 0.0;
        }
    }
    return {pass, "pairs=20 strict_cases=" + std::to_string(strict_needed) + " min_gap=" + fmt(worst_gap)};
}

Outcome criterion_9()
{
    const auto g = make_grid(40.0, 4096);
    std::vector<double> b(g.sample_count());
    for (int i = 0; i <= 4096; ++i) b[i] = std::exp(-g.node(i) * g.node(i));
    const FieldSamples bump(g, b);
    const auto spectral = half_laplacian_spectral(bump);
    double err = 0.0, scale = 0.0;
    for (int i = 1; i < 4096; ++i) {
        if (std::abs(g.node(i)) > 0.9 * g.half_length()) continue;
        const double pv = half_laplacian_pv(bump, i);
        err = std::max(err, std::abs(pv - spectral[i]));
        scale = std::max(scale, std::abs(pv));
    }
    const double op_rel = err / scale;

    const auto r = reference_profile(g, ModelParams(1.0, 0.0));
    const auto grad = energy_gradient(r);
    std::mt19937_64 rng(99);
    std::normal_distribution<double> N(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        std::vector<double> phi(g.sample_count(), 0.0), plus(r.values()), minus(r.values());
        double analytic = 0.0;
        for (int i = 1; i < 4096; ++i) {
            phi[i] = N(rng);
            analytic += grad[i] * phi[i];
            plus[i] += 1e-5 * phi[i];
            minus[i] -= 1e-5 * phi[i];
        }
        analytic *= g.spacing();
        const double fd = (energy(r.with_values(plus)).total - energy(r.with_values(minus)).total) / 2e-5;
        worst = std::max(worst, std::abs(fd - analytic) / std::abs(analytic));
    }
    return {op_rel <= 1e-3 && worst <= 1e-6,
            "spectral_vs_pv_rel=" + fmt(op_rel) + " gradient_fd_max_rel=" + fmt(worst) + " directions=20"};
}

Outcome criterion_10()
{
    const ModelParams par(1.0, 0.999);
    const auto r = minimize(reference_profile(make_grid(40.0, 4096), par));
    const double amp = r.profile[0] - r.profile[4096];
    const double target = pi - 2.0 * par.theta_h();
    const bool pass = r.converged && r.energy.total <= 1e-2 && std::abs(amp - target) <= 1e-3;
    return {pass, "converged=" + std::string(r.converged ? "yes" : "no") + " energy=" + fmt(r.energy.total) +
                      " amplitude=" + fmt(amp) + " target=" + fmt(target)};
}

} // namespace

int main(int argc, char** argv)
{
    const std::vector<std::function<Outcome()>> criteria{criterion_1, criterion_2, criterion_3, criterion_4,
                                                         criterion_5, criterion_6, criterion_7, criterion_8,
                                                         criterion_9, criterion_10};
    int only = 0;
    if (argc == 3 && std::string(argv[1]) == "--criterion") {
        only = std::atoi(argv[2]);
        if (only < 1 || only > 10) {
            std::cerr << "criterion must be 1..10\n";
            return 2;
        }
    } else if (argc != 1) {
        std::cerr << "usage: acceptance [--criterion k]\n";
        return 2;
    }

    bool all = true;
    for (int k = 1; k <= 10; ++k) {
        if (only && k != only) continue;
        Outcome o;
        try {
            o = criteria[k - 1]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
