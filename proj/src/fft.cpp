#include "wislab/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace wislab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

FftPlan::FftPlan(std::size_t n, bool inverse) : n_(n), inverse_(inverse), pow2_(is_pow2(n)) {
    if (n_ == 0) throw std::invalid_argument("FftPlan: length must be positive");
    const double sign = inverse_ ? 1.0 : -1.0;
    if (pow2_) {
        bitrev_.resize(n_);
        std::size_t log2n = 0;
        while ((std::size_t{1} << log2n) < n_) ++log2n;
        for (std::size_t i = 0; i < n_; ++i) {
            std::size_t r = 0;
            for (std::size_t b = 0; b < log2n; ++b)
                if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n - 1 - b);
            bitrev_[i] = r;
        }
        // One table entry per butterfly offset, stage by stage: n/2 entries total.
        twiddle_.reserve(n_ == 1 ? 0 : n_ - 1);
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t half = len / 2;
            for (std::size_t k = 0; k < half; ++k) {
                const double a = sign * kTwoPi * static_cast<double>(k) / static_cast<double>(len);
                twiddle_.emplace_back(std::cos(a), std::sin(a));
            }
        }
    } else {
        twiddle_.resize(n_);
        for (std::size_t k = 0; k < n_; ++k) {
            const double a = sign * kTwoPi * static_cast<double>(k) / static_cast<double>(n_);
            twiddle_[k] = {std::cos(a), std::sin(a)};
        }
    }
}

void FftPlan::run(std::complex<double>* buf) const {
    if (n_ == 1) return;
    if (pow2_) {
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t j = bitrev_[i];
            if (i < j) std::swap(buf[i], buf[j]);
        }
        std::size_t table_off = 0;
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t half = len / 2;
            for (std::size_t start = 0; start < n_; start += len) {
                for (std::size_t k = 0; k < half; ++k) {
                    const std::complex<double> w = twiddle_[table_off + k];
                    const std::complex<double> u = buf[start + k];
                    const std::complex<double> t = w * buf[start + k + half];
                    buf[start + k] = u + t;
                    buf[start + k + half] = u - t;
                }
            }
            table_off += half;
        }
        return;
    }
    std::vector<std::complex<double>> out(n_);
    for (std::size_t m = 0; m < n_; ++m) {
        std::complex<double> acc{0.0, 0.0};
        std::size_t idx = 0;
        for (std::size_t k = 0; k < n_; ++k) {
            acc += buf[k] * twiddle_[idx];
            idx += m;
            if (idx >= n_) idx -= n_;
        }
        out[m] = acc;
    }
    for (std::size_t m = 0; m < n_; ++m) buf[m] = out[m];
}

void FftPlan::run_batch(double* re, double* im, std::size_t count, std::size_t stride) const {
    if (count == 0 || n_ == 1) return;
    if (count > stride) throw std::invalid_argument("FftPlan: batch count exceeds stride");
    if (pow2_) {
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t j = bitrev_[i];
            if (i < j) {
                double* ri = re + i * stride;
                double* rj = re + j * stride;
                double* ii = im + i * stride;
                double* ij = im + j * stride;
                for (std::size_t c = 0; c < count; ++c) {
                    std::swap(ri[c], rj[c]);
                    std::swap(ii[c], ij[c]);
                }
            }
        }
        std::size_t table_off = 0;
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t half = len / 2;
            for (std::size_t start = 0; start < n_; start += len) {
                for (std::size_t k = 0; k < half; ++k) {
                    const double wr = twiddle_[table_off + k].real();
                    const double wi = twiddle_[table_off + k].imag();
                    double* ur = re + (start + k) * stride;
                    double* ui = im + (start + k) * stride;
                    double* vr = re + (start + k + half) * stride;
                    double* vi = im + (start + k + half) * stride;
                    for (std::size_t c = 0; c < count; ++c) {
                        const double tr = wr * vr[c] - wi * vi[c];
                        const double ti = wr * vi[c] + wi * vr[c];
                        vr[c] = ur[c] - tr;
                        vi[c] = ui[c] - ti;
                        ur[c] += tr;
                        ui[c] += ti;
                    }
                }
            }
            table_off += half;
        }
        return;
    }
    std::vector<std::complex<double>> buf(n_);
    for (std::size_t c = 0; c < count; ++c) {
        for (std::size_t k = 0; k < n_; ++k) buf[k] = {re[k * stride + c], im[k * stride + c]};
        run(buf.data());
        for (std::size_t k = 0; k < n_; ++k) {
            re[k * stride + c] = buf[k].real();
            im[k * stride + c] = buf[k].imag();
        }
    }
}

std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& in, bool inverse) {
    const std::size_t n = in.size();
    std::vector<std::complex<double>> out(n);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t m = 0; m < n; ++m) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) {
            const double a = sign * kTwoPi * static_cast<double>(m * k % n) / static_cast<double>(n);
            acc += in[k] * std::complex<double>(std::cos(a), std::sin(a));
        }
        out[m] = acc;
    }
    return out;
}

}  // namespace wislab
