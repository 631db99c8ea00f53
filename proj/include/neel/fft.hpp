#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include <fftw3.h>

namespace neel::detail {

// Real-to-complex / complex-to-real plan pair of length n. Plans are created
// with FFTW_UNALIGNED so that the new-array execute functions, which are
// thread-safe, can run on any caller-owned buffer.
class RealFft {
public:
    explicit RealFft(int n) : n_(n)
    {
        std::vector<double> real(n);
        std::vector<std::complex<double>> spec(n / 2 + 1);
        auto* c = reinterpret_cast<fftw_complex*>(spec.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        forward_ = fftw_plan_dft_r2c_1d(n, real.data(), c, flags);
        backward_ = fftw_plan_dft_c2r_1d(n, c, real.data(), flags);
    }
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;
    ~RealFft()
    {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }

    int size() const { return n_; }

    void forward(std::span<const double> in, std::span<std::complex<double>> out) const
    {
        fftw_execute_dft_r2c(forward_, const_cast<double*>(in.data()),
                             reinterpret_cast<fftw_complex*>(out.data()));
    }

    // Unnormalized inverse; destroys `in`.
    void backward(std::span<std::complex<double>> in, std::span<double> out) const
    {
        fftw_execute_dft_c2r(backward_, reinterpret_cast<fftw_complex*>(in.data()), out.data());
    }

private:
    int n_;
    fftw_plan forward_;
    fftw_plan backward_;
};

inline const RealFft& real_fft(int n)
{
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<RealFft>> plans;
    std::lock_guard lock(mutex);
    auto& slot = plans[n];
    if (!slot) slot = std::make_unique<RealFft>(n);
    return *slot;
}

// Applies the Fourier multiplier symbol(|k|) to a periodic sequence of the
// given period, k = 2 pi m / period.
template <class Symbol>
std::vector<double> apply_multiplier(std::span<const double> periodic, double period, Symbol symbol)
{
    const int n = static_cast<int>(periodic.size());
    const auto& fft = real_fft(n);
    std::vector<std::complex<double>> spec(n / 2 + 1);
    fft.forward(periodic, spec);
    for (int m = 0; m <= n / 2; ++m) spec[m] *= symbol(2.0 * std::numbers::pi * m / period) / n;
    std::vector<double> out(n);
    fft.backward(spec, out);
    return out;
}

} // namespace neel::detail
