#include "dynbif/symbolic.hpp"

#include <algorithm>
#include <stdexcept>

namespace dynbif {

Poly::Poly(const Exact& c)
{
    if (!c.is_zero()) terms_[{}] = c;
}

Poly Poly::atom(const Atom& a, const Exact& c)
{
    Poly p;
    p.add_term({a}, c);
    return p;
}

Poly Poly::amplitude(int j, bool conj, int deriv) { return atom({AtomKind::Amplitude, j, conj, deriv}); }
Poly Poly::mu() { return atom({AtomKind::MuBar, 0, false, 0}); }
Poly Poly::drift(int j, bool conj) { return atom({AtomKind::Drift, j, conj, 0}); }
Poly Poly::gauge(int j, int deriv) { return atom({AtomKind::Gauge, j, false, deriv}); }

void Poly::add_term(Monomial m, const Exact& c)
{
    if (c.is_zero()) return;
    std::sort(m.begin(), m.end());
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(std::move(m), c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

Poly& Poly::operator+=(const Poly& o)
{
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o)
{
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Poly& Poly::operator*=(const Exact& c)
{
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

Poly Poly::operator-() const
{
    Poly p = *this;
    p *= Exact(-1);
    return p;
}

Poly operator*(const Poly& a, const Poly& b)
{
    Poly p;
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            Monomial m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            p.add_term(std::move(m), ca * cb);
        }
    }
    return p;
}

Poly Poly::dx() const
{
    Poly p;
    for (const auto& [m, c] : terms_) {
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i].kind == AtomKind::MuBar) continue;
            if (m[i].kind == AtomKind::Drift) throw std::logic_error("Poly::dx: drift markers are not differentiated");
            Monomial d = m;
            d[i].deriv += 1;
            p.add_term(std::move(d), c);
        }
    }
    return p;
}

Poly Poly::conj() const
{
    Poly p;
    for (const auto& [m, c] : terms_) {
        Monomial d = m;
        for (auto& a : d)
            if (a.kind == AtomKind::Amplitude || a.kind == AtomKind::Drift) a.conj = !a.conj;
        p.add_term(std::move(d), c.conj());
    }
    return p;
}

Poly Poly::drift_of() const
{
    Poly p;
    for (const auto& [m, c] : terms_) {
        if (m.size() != 1 || m[0].kind != AtomKind::Amplitude || m[0].deriv != 0)
            throw std::logic_error("Poly::drift_of: expects a linear combination of amplitudes");
        p.add_term({{AtomKind::Drift, m[0].index, m[0].conj, 0}}, c);
    }
    return p;
}

Exact Poly::coefficient(const Monomial& m) const
{
    Monomial key = m;
    std::sort(key.begin(), key.end());
    auto it = terms_.find(key);
    return it == terms_.end() ? Exact(0) : it->second;
}

int Poly::amplitude_degree() const
{
    int d = 0;
    for (const auto& [m, c] : terms_) {
        int k = static_cast<int>(std::count_if(m.begin(), m.end(), [](const Atom& a) {
            return a.kind == AtomKind::Amplitude || a.kind == AtomKind::Drift;
        }));
        d = std::max(d, k);
    }
    return d;
}

namespace {

std::string atom_str(const Atom& a, const SymbolNames& names)
{
    std::string s;
    switch (a.kind) {
    case AtomKind::MuBar: return names.mu;
    case AtomKind::Amplitude:
        s = names.amplitudes.at(static_cast<std::size_t>(a.index));
        break;
    case AtomKind::Drift:
        s = "Dt[" + names.amplitudes.at(static_cast<std::size_t>(a.index)) + "]";
        break;
    case AtomKind::Gauge:
        s = names.gauge + std::to_string(a.index);
        break;
    }
    if (a.conj) s = "conj(" + s + ")";
    if (a.deriv == 1) s = "dxbar " + s;
    else if (a.deriv > 1) s = "dxbar^" + std::to_string(a.deriv) + " " + s;
    return s;
}

}  // namespace

std::string monomial_str(const Monomial& m, const SymbolNames& names)
{
    if (m.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < m.size();) {
        std::size_t j = i;
        while (j < m.size() && m[j] == m[i]) ++j;
        std::string a = atom_str(m[i], names);
        if (a.find(' ') != std::string::npos && j - i > 1) a = "(" + a + ")";
        if (!s.empty()) s += "*";
        s += a;
        if (j - i > 1) s += "^" + std::to_string(j - i);
        i = j;
    }
    return s;
}

std::string Poly::str(const SymbolNames& names) const
{
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms_) {
        if (!s.empty()) s += " + ";
        std::string cs = c.str();
        if (m.empty()) {
            s += cs;
            continue;
        }
        if (c == Exact(1)) s += monomial_str(m, names);
        else if (c == Exact(-1)) s += "-" + monomial_str(m, names);
        else s += "(" + cs + ")*" + monomial_str(m, names);
    }
    return s;
}

}  // namespace dynbif
