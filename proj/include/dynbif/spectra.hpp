#pragma once

#include "dynbif/model.hpp"

#include <complex>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dynbif {

struct RangeError : std::range_error {
    using std::range_error::range_error;
};

struct DispersionResult {
    // Sorted by descending real part, ties by ascending imaginary part.
    std::vector<std::complex<double>> eigenvalues;
    std::complex<double> leading() const { return eigenvalues.front(); }
};

enum class BifurcationKind { Turing, Hopf, TuringHopf, LongWaveConserved };

std::string kind_name(BifurcationKind k);

struct BifurcationData {
    double xi_c = 0;
    double omega_c = 0;
    double mu_c = 0;
    BifurcationKind kind = BifurcationKind::Turing;
};

// Kolmogorov flow: the long-wave quartic series or the y-Fourier numeric path.
enum class M4Path { Quartic, Numeric };

struct SpectraOptions {
    M4Path m4_path = M4Path::Quartic;
    int m4_modes = 64;            // y-Fourier modes of the numeric path
    double m4_quartic_max = 0.5;  // validity window of the series
};

// mu is the bifurcation parameter; for M4 it is the Reynolds offset R' = R - R*.
DispersionResult dispersion(const ModelSpec& m, double xi, double mu, const SpectraOptions& opt = {});

void sort_eigenvalues(std::vector<std::complex<double>>& ev);

// Real matrix of the divergence-free y-Fourier linearisation of the
// Kolmogorov flow at wavenumber xi, in the basis (-n, xi)/|k| per mode n.
std::vector<std::vector<double>> kolmogorov_linear_matrix(double xi, double r_prime, int modes);

// Band endpoints where Re lambda_1(xi, delta^2) changes sign around xi_c.
std::pair<double, double> unstable_band(const ModelSpec& m, double delta, const SpectraOptions& opt = {});

BifurcationData classify(const ModelSpec& m);

void write_dispersion_csv(std::ostream& os, const ModelSpec& m, double mu, const std::vector<double>& xis,
                          const SpectraOptions& opt = {});

}  // namespace dynbif
