#pragma once

// Formal multiple-scales derivation in blown-up variables: the matching
// hierarchy (d_t - M - L^(0)) psi^(nu) = B^(nu) is assembled and solved
// harmonic by harmonic in exact arithmetic, and the solvability condition at
// nu = beta yields the modulation equation.

#include "dynbif/model.hpp"
#include "dynbif/opexpand.hpp"
#include "dynbif/symbolic.hpp"

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dynbif {

struct DerivationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Harmonic (k1, k2) stands for exp(i k1 x + i k2 omega t).
using Harmonic = std::pair<int, int>;
using ScalarField = std::map<Harmonic, Poly>;
using VecField = std::vector<ScalarField>;
using ExactMatrix = std::vector<std::vector<Exact>>;

struct AnsatzSeries {
    std::vector<VecField> orders;  // psi^(0), psi^(1), ...
};

struct MatchingRHS {
    int order = 0;
    VecField B;
};

// Model data for the harmonic engine (M1-M3).
struct HarmonicProblem {
    ModelSpec model;
    int components = 1;
    int beta = 2;
    int max_harmonic = 3;
    Exact omega;       // temporal frequency scale of k2
    ExactMatrix M;     // reaction matrix
    GradedExpansion L;  // diagonal spatial operator, one component each
    // Positive critical harmonics, one amplitude each.
    std::vector<Harmonic> critical;
    SymbolNames names;
    // N(r psi, r^2 mubar)/r as a series in r, given psi^(0..K) (truncated at `order`).
    std::function<std::vector<VecField>(const std::vector<VecField>& psi, int order)> nonlinearity;
    bool reverse_harmonic_order = false;
};

HarmonicProblem make_problem(const ModelSpec& m);

struct ModulationCoefficients {
    ModelId model = ModelId::M1;
    // Coefficients as they appear on the right-hand side of
    //   d_t A_j + r^-1 r_t A_j = diffusion dxbar^2 A_j + mu_linear mubar A_j
    //                           - advection dxbar A_j + cubic_self A_j|A_j|^2 + cubic_cross A_j|A_k|^2
    // and for the Kolmogorov flow
    //   d_t A + r^-1 r_t A = ch_fourth dxbar^4 A + ch_second Rbar dxbar^2 A + ch_cubic dxbar^2 (A^3).
    std::vector<Exact> diffusion;
    std::vector<Exact> mu_linear;
    std::vector<Exact> advection;
    std::vector<Exact> cubic_self;
    std::vector<Exact> cubic_cross;
    Exact ch_fourth;
    Exact ch_second;
    Exact ch_cubic;
};

struct NamedConstant {
    std::string name;
    Exact value;
};

struct DerivationResult {
    ModulationCoefficients coefficients;
    AnsatzSeries series;
    std::vector<MatchingRHS> rhs;          // B^(0..beta)
    std::vector<NamedConstant> constants;  // M2: V, V0; M3: v_i, eta_i; M4: gauge relations
    std::string report;
};

struct DerivationOptions {
    bool reverse_harmonic_order = false;
};

// Neutral solution psi^(0) = sum over critical harmonics of phi A_j + c.c.
VecField neutral_solution(const HarmonicProblem& p);

// Null vectors of the harmonic matrix H(k) = i k2 omega - M - L^(0)(k1).
ExactMatrix harmonic_matrix(const HarmonicProblem& p, const Harmonic& h);
std::vector<Exact> right_null_vector(const ExactMatrix& H);
std::vector<Exact> left_null_vector(const ExactMatrix& H, const std::vector<Exact>& right);

MatchingRHS assemble_matching(const HarmonicProblem& p, int order, const AnsatzSeries& series);

struct OrderSolution {
    VecField psi;
    // Projection phi* . B at each positive critical harmonic (one per amplitude).
    std::vector<Poly> resonant;
};

OrderSolution solve_order(const HarmonicProblem& p, const MatchingRHS& rhs);

// Reads the modulation equation from the resonant projections at nu = beta,
// adding the lower-order resonant terms carried in `carried`.
ModulationCoefficients solvability(const HarmonicProblem& p, const std::vector<Poly>& resonant_at_beta,
                                   const std::vector<Poly>& carried);

DerivationResult derive(const ModelSpec& m, const DerivationOptions& opt = {});
DerivationResult derive_m4_hierarchy(int max_order = 3);

// Closed forms of the Brusselator (c1, c2, c3), evaluated in double.
struct BrusselatorCoefficients {
    std::complex<double> c1, c2, c3;
};
BrusselatorCoefficients brusselator_reference(const BrusselatorParams& p);

bool reality_closed(const VecField& f);
std::string field_str(const VecField& f, const SymbolNames& names);

}  // namespace dynbif
