#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace wislab {

/// Unnormalized DFT plan for a fixed length. Radix-2 in place for powers of
/// two, naive O(n^2) otherwise. `inverse` selects the e^{+j2pi nk/N} kernel
/// (no 1/N factor); results are deterministic bit-for-bit for a given length.
class FftPlan {
  public:
    FftPlan(std::size_t n, bool inverse);

    std::size_t size() const { return n_; }

    /// Transforms `buf` (length size()) in place. Thread-safe: the plan is
    /// read-only after construction.
    void run(std::complex<double>* buf) const;

    /// Transforms `count` independent series in lockstep. Split layout:
    /// element k of series c lives at re[k * stride + c] / im[k * stride + c],
    /// count <= stride. Each series gets the same result run() would give it;
    /// the batch only vectorizes across series.
    void run_batch(double* re, double* im, std::size_t count, std::size_t stride) const;

  private:
    std::size_t n_;
    bool inverse_;
    bool pow2_;
    std::vector<std::size_t> bitrev_;
    std::vector<std::complex<double>> twiddle_;  // per-stage tables for pow2, full kernel otherwise
};

/// One-shot unnormalized DFT (inverse = conjugate kernel), for oracle use.
std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& in, bool inverse);

}  // namespace wislab
