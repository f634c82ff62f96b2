#pragma once

// Polynomials with exact coefficients in the amplitude symbols of a
// derivation: A_j and conj(A_j) with slow x-derivatives, the slow parameter
// bar_mu, the drift marker (d_t + r^-1 r_t) A_j and the pressure gauges C_j.

#include "dynbif/exact.hpp"

#include <map>
#include <string>
#include <vector>

namespace dynbif {

enum class AtomKind { Amplitude, MuBar, Drift, Gauge };

struct Atom {
    AtomKind kind = AtomKind::Amplitude;
    int index = 0;      // amplitude or gauge index
    bool conj = false;  // complex conjugate
    int deriv = 0;      // slow x-derivative order

    friend auto operator<=>(const Atom&, const Atom&) = default;
};

using Monomial = std::vector<Atom>;  // sorted, with repetition

struct SymbolNames {
    std::vector<std::string> amplitudes{"A"};
    std::string mu = "mubar";
    std::string gauge = "C";
};

class Poly {
public:
    Poly() = default;
    Poly(const Exact& c);  // NOLINT(implicit) constant polynomial

    static Poly atom(const Atom& a, const Exact& c = Exact(1));
    static Poly amplitude(int j, bool conj = false, int deriv = 0);
    static Poly mu();
    static Poly drift(int j, bool conj = false);
    static Poly gauge(int j, int deriv = 0);

    bool is_zero() const { return terms_.empty(); }
    const std::map<Monomial, Exact>& terms() const { return terms_; }

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Exact& c);
    Poly operator-() const;

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Exact& c) { return a *= c; }
    friend Poly operator*(const Exact& c, Poly a) { return a *= c; }
    friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

    // Slow x-derivative (product rule); bar_mu does not depend on x.
    Poly dx() const;
    Poly conj() const;
    // Replace every amplitude atom by the matching drift marker (linear only).
    Poly drift_of() const;
    // Coefficient of a single monomial (zero when absent).
    Exact coefficient(const Monomial& m) const;
    // Largest total degree in amplitude atoms.
    int amplitude_degree() const;

    std::string str(const SymbolNames& names = {}) const;

private:
    void add_term(Monomial m, const Exact& c);
    std::map<Monomial, Exact> terms_;
};

std::string monomial_str(const Monomial& m, const SymbolNames& names);

}  // namespace dynbif
