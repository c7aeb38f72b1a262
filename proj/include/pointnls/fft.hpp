#ifndef POINTNLS_FFT_HPP
#define POINTNLS_FFT_HPP

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <vector>

namespace pointnls {

using cplx = std::complex<double>;

namespace detail {

// FFTW's planner is not thread-safe; plan execution is.
inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

inline fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace detail

/// In-place complex-to-complex transform of fixed length. Unnormalized:
/// forward followed by backward multiplies by n.
class Fft1D {
public:
    explicit Fft1D(int n) : n_(n) {
        std::vector<cplx> probe(static_cast<std::size_t>(n));
        std::lock_guard<std::mutex> lock(detail::planner_mutex());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fwd_ = fftw_plan_dft_1d(n, detail::as_fftw(probe.data()), detail::as_fftw(probe.data()),
                                FFTW_FORWARD, flags);
        bwd_ = fftw_plan_dft_1d(n, detail::as_fftw(probe.data()), detail::as_fftw(probe.data()),
                                FFTW_BACKWARD, flags);
    }

    ~Fft1D() {
        std::lock_guard<std::mutex> lock(detail::planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }

    Fft1D(const Fft1D&) = delete;
    Fft1D& operator=(const Fft1D&) = delete;

    int size() const { return n_; }

    void forward(std::vector<cplx>& a) const {
        fftw_execute_dft(fwd_, detail::as_fftw(a.data()), detail::as_fftw(a.data()));
    }

    void backward(std::vector<cplx>& a) const {
        fftw_execute_dft(bwd_, detail::as_fftw(a.data()), detail::as_fftw(a.data()));
    }

private:
    int n_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

/// Per-thread plan cache for one-shot spectral operations.
inline const Fft1D& cached_fft(int n) {
    thread_local std::map<int, Fft1D> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.try_emplace(n, n).first;
    return it->second;
}

/// In-place rank-N transform of an M x ... x M tensor (row-major).
class FftND {
public:
    FftND(int rank, int extent, cplx* data) : rank_(rank), extent_(extent) {
        std::vector<int> dims(static_cast<std::size_t>(rank), extent);
        std::lock_guard<std::mutex> lock(detail::planner_mutex());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fwd_ = fftw_plan_dft(rank, dims.data(), detail::as_fftw(data), detail::as_fftw(data),
                             FFTW_FORWARD, flags);
        bwd_ = fftw_plan_dft(rank, dims.data(), detail::as_fftw(data), detail::as_fftw(data),
                             FFTW_BACKWARD, flags);
    }

    ~FftND() {
        std::lock_guard<std::mutex> lock(detail::planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }

    FftND(const FftND&) = delete;
    FftND& operator=(const FftND&) = delete;

    void forward(cplx* data) const {
        fftw_execute_dft(fwd_, detail::as_fftw(data), detail::as_fftw(data));
    }
    void backward(cplx* data) const {
        fftw_execute_dft(bwd_, detail::as_fftw(data), detail::as_fftw(data));
    }

    int rank() const { return rank_; }
    int extent() const { return extent_; }

private:
    int rank_;
    int extent_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

}  // namespace pointnls

#endif
