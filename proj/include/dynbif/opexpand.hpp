#pragma once

// Expansion of a linear differential operator under d/dx_k -> d/dx_k + r d/dxbar_k
// (k < p) into graded pieces L^(l), l = 0..m, with exact word coefficients.

#include "dynbif/exact.hpp"

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace dynbif {

enum class CoefficientTag { Constant, SinY, CosY };

struct MultiIndex {
    std::vector<int> alpha;
    int order() const;
};

struct OperatorTerm {
    Exact coefficient;
    CoefficientTag tag = CoefficientTag::Constant;
    MultiIndex alpha;
};

// Scalar operator per component; directions 0..p-1 are unbounded, p..n-1
// bounded (y), and tags refer to the first bounded direction.
struct OperatorSpec {
    int n = 1;
    int p = 1;
    std::vector<std::vector<OperatorTerm>> components;

    int order() const;
    void validate() const;
};

struct DerivativeWord {
    std::vector<int> fast;  // n entries
    std::vector<int> slow;  // p entries
    CoefficientTag tag = CoefficientTag::Constant;
    Exact coefficient;
};

bool word_key_less(const DerivativeWord& a, const DerivativeWord& b);

struct GradedExpansion {
    int n = 1;
    int p = 1;
    int m = 0;
    // grades[l][component] is the normalized word list of L^(l).
    std::vector<std::vector<std::vector<DerivativeWord>>> grades;

    const std::vector<DerivativeWord>& words(int grade, int component) const;
    int nonempty_grades() const;
};

GradedExpansion expand_operator(const OperatorSpec& spec);

// Sort by (slow, fast, tag), merge equal keys, drop zero coefficients.
void normalize_words(std::vector<DerivativeWord>& words);

// Readable form such as "-4 dx dxbar (1 + dx^2)".
std::string format_words(const std::vector<DerivativeWord>& words, int n, int p);

// Common operators.
OperatorSpec swift_hohenberg_operator();      // -(1 + dx^2)^2, n = p = 1
OperatorSpec laplacian_operator(int n, int p);
// Kolmogorov family on (x, y), p = 1: {Laplacian - sqrt2 sin y dx, dx, dy}.
OperatorSpec kolmogorov_operator_family();

// Test fields: sums of separable products of polynomial * exp(s * coordinate)
// factors in each fast and slow coordinate, with exact derivatives.
struct Factor1D {
    std::vector<std::complex<double>> poly{1.0};  // ascending powers
    std::complex<double> rate{0.0};               // exp(rate * coordinate)

    std::complex<double> derivative(int order, double x) const;
};

struct SeparableTerm {
    std::complex<double> coefficient{1.0};
    std::vector<Factor1D> fast;  // n factors
    std::vector<Factor1D> slow;  // p factors
};

class TestField {
public:
    TestField(int n, int p) : n_(n), p_(p) {}
    TestField& add(SeparableTerm t);

    int n() const { return n_; }
    int p() const { return p_; }
    std::complex<double> derivative(const std::vector<int>& fast, const std::vector<int>& slow,
                                    const std::vector<double>& x, const std::vector<double>& xbar) const;
    // x -> f(x, r x) as a field without slow dependence (polynomials composed directly).
    TestField restricted(double r) const;

private:
    int n_;
    int p_;
    std::vector<SeparableTerm> terms_;
};

using EvalField = std::function<std::complex<double>(const std::vector<double>& x, const std::vector<double>& xbar)>;

// Grade-s entry: sum_{q=0}^{s} L^(q) psi^(s-q) for the given component; `order`
// entries are produced and order must not exceed series.size().
std::vector<EvalField> apply_graded(const GradedExpansion& exp, int component, const std::vector<TestField>& series,
                                    int order);

struct SubstitutionReport {
    double max_abs_error = 0;
    double max_abs_value = 0;
};

SubstitutionReport substitution_check(const OperatorSpec& spec, int component, const TestField& f, double r);

// The 33 sample points used by substitution_check.
std::vector<std::vector<double>> substitution_sample_points(int n);

}  // namespace dynbif
