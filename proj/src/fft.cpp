#include "dynbif/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace dynbif {

namespace {
// Plan creation and destruction are not thread-safe in FFTW.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}
}  // namespace

Fft::Fft(int nx, int ny) : n_(ny > 0 ? nx * ny : nx)
{
    if (nx <= 0 || ny < 0) throw std::invalid_argument("Fft: invalid size");
    std::lock_guard lock(planner_mutex());
    auto* buf = fftw_alloc_complex(static_cast<std::size_t>(n_));
    buf_ = buf;
    if (ny > 0) {
        fwd_ = fftw_plan_dft_2d(nx, ny, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_2d(nx, ny, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    } else {
        fwd_ = fftw_plan_dft_1d(nx, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_1d(nx, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
}

Fft::~Fft()
{
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(inv_));
    fftw_free(buf_);
}

void Fft::forward(const cvec& in, cvec& out) const
{
    if (static_cast<int>(in.size()) != n_) throw std::invalid_argument("Fft::forward: size mismatch");
    auto* buf = static_cast<fftw_complex*>(buf_);
    std::copy(in.begin(), in.end(), reinterpret_cast<std::complex<double>*>(buf));
    fftw_execute(static_cast<fftw_plan>(fwd_));
    out.assign(reinterpret_cast<std::complex<double>*>(buf), reinterpret_cast<std::complex<double>*>(buf) + n_);
}

void Fft::inverse(const cvec& in, cvec& out) const
{
    if (static_cast<int>(in.size()) != n_) throw std::invalid_argument("Fft::inverse: size mismatch");
    auto* buf = static_cast<fftw_complex*>(buf_);
    std::copy(in.begin(), in.end(), reinterpret_cast<std::complex<double>*>(buf));
    fftw_execute(static_cast<fftw_plan>(inv_));
    out.resize(static_cast<std::size_t>(n_));
    const double s = 1.0 / n_;
    auto* b = reinterpret_cast<std::complex<double>*>(buf);
    for (int i = 0; i < n_; ++i) out[static_cast<std::size_t>(i)] = b[i] * s;
}

}  // namespace dynbif
