#pragma once

#include <complex>
#include <cstddef>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace speclab {

namespace detail {
// FFTW's planner is a shared global; plan creation and destruction must be
// serialized. Execution via fftw_execute_dft on distinct arrays is safe.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace detail

// Rank-d complex-to-complex transform of a fixed shape. Unnormalized forward,
// backward divided by the total point count, so inverse(forward(u)) == u.
class FftPlan {
public:
    explicit FftPlan(const std::vector<int>& dims) : dims_(dims) {
        size_ = 1;
        for (int d : dims_) size_ *= static_cast<std::size_t>(d);
        std::vector<std::complex<double>> a(size_), b(size_);
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        // FFTW_UNALIGNED lets the plan execute on any caller-provided buffer.
        forward_ = fftw_plan_dft(static_cast<int>(dims_.size()), dims_.data(),
                                 reinterpret_cast<fftw_complex*>(a.data()),
                                 reinterpret_cast<fftw_complex*>(b.data()),
                                 FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        backward_ = fftw_plan_dft(static_cast<int>(dims_.size()), dims_.data(),
                                  reinterpret_cast<fftw_complex*>(a.data()),
                                  reinterpret_cast<fftw_complex*>(b.data()),
                                  FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }

    ~FftPlan() {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }

    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    std::size_t size() const noexcept { return size_; }

    // out may not alias in.
    void forward(const std::complex<double>* in, std::complex<double>* out) const {
        fftw_execute_dft(forward_,
                         reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                         reinterpret_cast<fftw_complex*>(out));
    }

    void inverse(const std::complex<double>* in, std::complex<double>* out) const {
        fftw_execute_dft(backward_,
                         reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                         reinterpret_cast<fftw_complex*>(out));
        double scale = 1.0 / static_cast<double>(size_);
        for (std::size_t i = 0; i < size_; ++i) out[i] *= scale;
    }

private:
    std::vector<int> dims_;
    std::size_t size_ = 0;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

} // namespace speclab
