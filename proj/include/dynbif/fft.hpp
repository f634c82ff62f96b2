#pragma once

// Thin RAII wrapper over FFTW complex transforms (1-D and 2-D, row-major).
// Plans use FFTW_ESTIMATE so that transforms are bit-reproducible.

#include <complex>
#include <vector>

namespace dynbif {

using cvec = std::vector<std::complex<double>>;

class Fft {
public:
    // ny = 0 for a 1-D transform of length nx.
    explicit Fft(int nx, int ny = 0);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    int size() const { return n_; }
    // Unnormalized forward transform.
    void forward(const cvec& in, cvec& out) const;
    // Inverse transform scaled by 1/size.
    void inverse(const cvec& in, cvec& out) const;

private:
    int n_;
    void* buf_;
    void* fwd_;
    void* inv_;
};

// Signed integer wavenumber index for position j of an n-point transform.
inline int wave_index(int j, int n) { return j <= n / 2 ? j : j - n; }

}  // namespace dynbif
