#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace neel {

inline constexpr double pi = std::numbers::pi;

// Uniform grid on [-L, L]. Node i sits at (i - n/2) * spacing, so node n/2 is
// exactly zero and the grid is exactly symmetric. Profiles carry n + 1 samples
// (both endpoints); the periodic operators use the first n of them.
class Grid1D {
public:
    Grid1D(double half_length, int n_points)
        : half_length_(half_length), n_points_(n_points)
    {
        if (!(half_length > 0.0) || !std::isfinite(half_length))
            throw std::invalid_argument("grid: half_length must be positive and finite");
        if (n_points < 4 || n_points % 2 != 0)
            throw std::invalid_argument("grid: n_points must be even and at least 4, got " +
                                        std::to_string(n_points));
        spacing_ = 2.0 * half_length / n_points;
    }

    double half_length() const { return half_length_; }
    int n_points() const { return n_points_; }
    double spacing() const { return spacing_; }
    int center() const { return n_points_ / 2; }
    std::size_t sample_count() const { return static_cast<std::size_t>(n_points_) + 1; }

    double node(int i) const
    {
        if (i == 0) return -half_length_;
        if (i == n_points_) return half_length_;
        return (i - n_points_ / 2) * spacing_;
    }

    // The n periodic nodes -L, ..., L - spacing.
    std::vector<double> nodes() const
    {
        std::vector<double> x(n_points_);
        for (int i = 0; i < n_points_; ++i) x[i] = node(i);
        return x;
    }

    // All n + 1 sample positions, endpoints included.
    std::vector<double> sample_nodes() const
    {
        std::vector<double> x(sample_count());
        for (int i = 0; i <= n_points_; ++i) x[i] = node(i);
        return x;
    }

    bool operator==(const Grid1D&) const = default;

private:
    double half_length_;
    int n_points_;
    double spacing_ = 0.0;
};

inline Grid1D make_grid(double half_length, int n_points) { return Grid1D(half_length, n_points); }

class ModelParams {
public:
    ModelParams(double nu, double h) : nu_(nu), h_(h)
    {
        if (!(nu > 0.0) || !std::isfinite(nu))
            throw std::invalid_argument("params: nu must be positive and finite");
        if (!(h >= 0.0 && h < 1.0))
            throw std::invalid_argument("params: h must lie in [0, 1)");
        theta_h_ = std::asin(h);
        const double a = std::cos(pi / 4 + theta_h_ / 2);
        c_h_ = a * a;
    }

    double nu() const { return nu_; }
    double h() const { return h_; }
    double theta_h() const { return theta_h_; }
    double c_h() const { return c_h_; }
    double cos_theta_h() const { return std::cos(theta_h_); }
    double upper_plateau() const { return pi - theta_h_; }

    bool operator==(const ModelParams&) const = default;

private:
    double nu_;
    double h_;
    double theta_h_ = 0.0;
    double c_h_ = 0.0;
};

// Scalar samples on the n + 1 grid positions.
class FieldSamples {
public:
    FieldSamples(Grid1D grid, std::vector<double> values)
        : grid_(grid), values_(std::move(values))
    {
        if (values_.size() != grid_.sample_count())
            throw std::invalid_argument("field: expected " + std::to_string(grid_.sample_count()) +
                                        " samples, got " + std::to_string(values_.size()));
        for (double v : values_)
            if (!std::isfinite(v)) throw std::invalid_argument("field: non-finite sample");
    }

    const Grid1D& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

private:
    Grid1D grid_;
    std::vector<double> values_;
};

class Profile {
public:
    Profile(Grid1D grid, ModelParams params, std::vector<double> values)
        : grid_(grid), params_(params), values_(std::move(values))
    {
        if (values_.size() != grid_.sample_count())
            throw std::invalid_argument("profile: expected " + std::to_string(grid_.sample_count()) +
                                        " values, got " + std::to_string(values_.size()));
        for (double v : values_)
            if (!std::isfinite(v)) throw std::invalid_argument("profile: non-finite value");
    }

    const Grid1D& grid() const { return grid_; }
    const ModelParams& params() const { return params_; }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    bool is_pinned() const
    {
        return values_.front() == params_.upper_plateau() && values_.back() == params_.theta_h();
    }

    Profile with_values(std::vector<double> values) const { return Profile(grid_, params_, std::move(values)); }

    Profile pinned() const
    {
        auto v = values_;
        v.front() = params_.upper_plateau();
        v.back() = params_.theta_h();
        return with_values(std::move(v));
    }

    Profile with_params(ModelParams params) const { return Profile(grid_, params, values_); }

private:
    Grid1D grid_;
    ModelParams params_;
    std::vector<double> values_;
};

namespace detail {

inline double bump(double t)
{
    if (t <= -1.0 || t >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - t * t));
}

// Fraction of the bump mass on [x, 1], for x in [0, 1].
inline double smoothstep_upper(double x)
{
    using boost::math::quadrature::gauss_kronrod;
    static const double total = gauss_kronrod<double, 61>::integrate(bump, -1.0, 1.0, 15, 1e-15);
    if (x >= 1.0) return 0.0;
    return gauss_kronrod<double, 61>::integrate(bump, x, 1.0, 15, 1e-15) / total;
}

} // namespace detail

// C-infinity, non-increasing wall from pi - theta_h (x <= -1) to theta_h (x >= 1),
// built from the normalized bump exp(-1/(1 - t^2)). Exactly odd about (0, pi/2).
inline Profile reference_profile(const Grid1D& grid, const ModelParams& params)
{
    if (grid.half_length() < 2.0)
        throw std::invalid_argument("reference_profile: half_length must be at least 2");
    const double th = params.theta_h();
    const double gap = pi - 2.0 * th;
    const int n = grid.n_points();
    const int c = grid.center();
    std::vector<double> v(grid.sample_count());
    v[c] = pi / 2;
    for (int m = 1; m <= c; ++m) {
        const double x = grid.node(c + m);
        const double right = x >= 1.0 ? th : th + gap * detail::smoothstep_upper(x);
        v[c + m] = right;
        v[c - m] = pi - right;
    }
    v[0] = params.upper_plateau();
    v[n] = th;
    return Profile(grid, params, std::move(v));
}

// Piecewise-linear interpolation of the samples; exact at nodes.
inline double interpolate(const Profile& p, double x)
{
    const auto& g = p.grid();
    if (!(std::abs(x) <= g.half_length()))
        throw std::out_of_range("interpolate: x outside [-half_length, half_length]");
    const double t = (x + g.half_length()) / g.spacing();
    const double r = std::round(t);
    if (std::abs(t - r) <= 1e-12 * std::max(1.0, r)) return p[static_cast<std::size_t>(r)];
    int i = static_cast<int>(std::floor(t));
    if (i >= g.n_points()) i = g.n_points() - 1;
    const double s = t - i;
    return p[i] + s * (p[i + 1] - p[i]);
}

} // namespace neel
