#pragma once

#include <cstddef>
#include <vector>

#include "surfwave/util.hpp"

namespace surfwave {

// Iterative radix-2 FFT with precomputed twiddles and bit-reversal table.
// Sizes must be powers of two. forward() is unscaled; inverse() applies 1/n.
class fft_plan {
  public:
    fft_plan() = default;

    explicit fft_plan(std::size_t n) : n_(n) {
        if (n < 2 || (n & (n - 1)) != 0) throw config_error("fft size must be a power of two >= 2");
        log2n_ = 0;
        while ((std::size_t{1} << log2n_) < n) ++log2n_;
        rev_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0;
            for (unsigned b = 0; b < log2n_; ++b)
                if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n_ - 1 - b);
            rev_[i] = r;
        }
        tw_.resize(n / 2);
        for (std::size_t j = 0; j < n / 2; ++j) {
            double ang = -2.0 * pi * static_cast<double>(j) / static_cast<double>(n);
            tw_[j] = cplx(std::cos(ang), std::sin(ang));
        }
    }

    std::size_t size() const { return n_; }

    void forward(cplx* a) const { transform(a, false); }

    void inverse(cplx* a) const {
        transform(a, true);
        double s = 1.0 / static_cast<double>(n_);
        for (std::size_t i = 0; i < n_; ++i) a[i] *= s;
    }

    void forward(std::vector<cplx>& a) const { check(a), forward(a.data()); }
    void inverse(std::vector<cplx>& a) const { check(a), inverse(a.data()); }

  private:
    void check(const std::vector<cplx>& a) const {
        if (a.size() != n_) throw error("fft buffer size mismatch");
    }

    void transform(cplx* a, bool inv) const {
        for (std::size_t i = 0; i < n_; ++i)
            if (std::size_t r = rev_[i]; r > i) std::swap(a[i], a[r]);
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            std::size_t half = len >> 1;
            std::size_t step = n_ / len;
            for (std::size_t blk = 0; blk < n_; blk += len) {
                for (std::size_t j = 0; j < half; ++j) {
                    cplx w = tw_[j * step];
                    if (inv) w = std::conj(w);
                    cplx u = a[blk + j];
                    cplx v = a[blk + j + half] * w;
                    a[blk + j] = u + v;
                    a[blk + j + half] = u - v;
                }
            }
        }
    }

    std::size_t n_ = 0;
    unsigned log2n_ = 0;
    std::vector<std::size_t> rev_;
    std::vector<cplx> tw_;
};

} // namespace surfwave
