// Minimal use of the library: solve one wall and print its main numbers.

#include <cstdio>

#include "neel/neel.hpp"

int main()
{
    const auto grid = neel::make_grid(40.0, 4096);
    const neel::ModelParams params(1.0, 0.3);

    const auto result = neel::minimize(neel::reference_profile(grid, params));
    if (!result.converged) {
        std::printf("no convergence after %d iterations\n", result.iterations);
        return 2;
    }
    const auto report = neel::verify(result);
    std::printf("energy        %.10f (exchange %.6f, anisotropy %.6f, stray %.6f)\n", result.energy.total,
                result.energy.exchange, result.energy.anisotropy, result.energy.stray);
    std::printf("iterations    %d, residual %.2e\n", result.iterations, result.residual_sup);
    std::printf("wall width    %.6f\n", report.wall_width);
    std::printf("monotone      %s (margin %.3e)\n", report.monotone_strict ? "yes" : "no", report.descent_margin);
    std::printf("symmetry      %.3e\n", report.symmetry_defect);
    if (report.decay)
        std::printf("tail x^2(theta - theta_h) %.4f, exponent %.3f\n", report.decay->amplitude_tailfit,
                    report.decay->exponent_fit);
    return 0;
}
