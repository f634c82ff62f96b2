// Kolmogorov flow hierarchy. The slow variable is xbar only (k1 = 0), so the
// fields are Fourier series in y with polynomial coefficients in A (real),
// Rbar, the drift marker and the pressure gauges C_j(xbar). In the stored
// series a field entry at Harmonic{0, m} is the coefficient of exp(i m y).

#include "dynbif/derivation.hpp"

#include <sstream>

namespace dynbif {

namespace {

using YField = std::map<int, Poly>;

void acc(YField& a, const YField& b, const Exact& s = Exact(1))
{
    for (const auto& [m, poly] : b) {
        Poly& t = a[m];
        t += poly * s;
        if (t.is_zero()) a.erase(m);
    }
}

YField operator+(YField a, const YField& b)
{
    acc(a, b);
    return a;
}

YField operator-(YField a, const YField& b)
{
    acc(a, b, Exact(-1));
    return a;
}

YField operator*(const YField& a, const YField& b)
{
    YField out;
    for (const auto& [ma, pa] : a) {
        for (const auto& [mb, pb] : b) {
            Poly& t = out[ma + mb];
            t += pa * pb;
            if (t.is_zero()) out.erase(ma + mb);
        }
    }
    return out;
}

YField scale(const YField& a, const Exact& s)
{
    YField out;
    acc(out, a, s);
    return out;
}

YField constant(const Poly& p)
{
    YField f;
    if (!p.is_zero()) f[0] = p;
    return f;
}

YField cos_y() { return {{1, Poly(Exact::ratio(1, 2))}, {-1, Poly(Exact::ratio(1, 2))}}; }
YField sin_y() { return {{1, Poly(-Exact::i() * Exact::ratio(1, 2))}, {-1, Poly(Exact::i() * Exact::ratio(1, 2))}}; }

YField dy(const YField& a)
{
    YField out;
    for (const auto& [m, poly] : a)
        if (m != 0) out[m] = poly * (Exact::i() * Exact(m));
    return out;
}

YField dxbar(const YField& a, int times = 1)
{
    YField out;
    for (const auto& [m, poly] : a) {
        Poly d = poly;
        for (int k = 0; k < times; ++k) d = d.dx();
        if (!d.is_zero()) out[m] = std::move(d);
    }
    return out;
}

Poly mean(const YField& a)
{
    auto it = a.find(0);
    return it == a.end() ? Poly{} : it->second;
}

// Zero-mean antiderivative in y.
YField ianti(const YField& a)
{
    YField out;
    for (const auto& [m, poly] : a)
        if (m != 0) out[m] = poly * (Exact(1) / (Exact::i() * Exact(m)));
    return out;
}

YField at(const std::vector<YField>& s, int k)
{
    return (k >= 0 && k < static_cast<int>(s.size())) ? s[static_cast<std::size_t>(k)] : YField{};
}

template <class Op>
YField cauchy(const std::vector<YField>& f, const std::vector<YField>& g, int nu, Op op)
{
    YField out;
    for (int i = 0; i <= nu; ++i) acc(out, op(at(f, i), at(g, nu - i)));
    return out;
}

std::string yfield_str(const YField& f, const SymbolNames& names)
{
    if (f.empty()) return "0";
    std::string s;
    for (const auto& [m, poly] : f) {
        if (!s.empty()) s += " ; ";
        s += "e^(" + std::to_string(m) + "iy): " + poly.str(names);
    }
    return s;
}

ScalarField to_scalar(const YField& f)
{
    ScalarField out;
    for (const auto& [m, poly] : f) out[{0, m}] = poly;
    return out;
}

}  // namespace

DerivationResult derive_m4_hierarchy(int max_order)
{
    if (max_order < 3) throw DerivationError("derive_m4_hierarchy: the amplitude equation appears at order 3");
    SymbolNames names;
    names.amplitudes = {"A"};
    names.mu = "Rbar";
    names.gauge = "C";

    const Poly A = Poly::amplitude(0);
    const Poly Rb = Poly::mu();
    const Exact s2 = Exact::sqrt2();
    const YField c = cos_y();
    const YField s = sin_y();
    const YField rb = constant(Rb);

    std::vector<YField> u, v, p;
    std::vector<Poly> gauge_relations;  // mean(F^(nu)), required to vanish
    Poly amplitude_rhs;
    std::ostringstream rep;
    rep << "model m4 (beta = 4)\n";

    for (int nu = 0; nu <= max_order; ++nu) {
        YField vn = nu == 0 ? constant(A) : ianti(scale(dxbar(at(u, nu - 1)), Exact(-1)));
        v.push_back(vn);

        YField F = scale(c * vn, s2);
        if (nu >= 1) {
            F = F + scale(s * dxbar(at(u, nu - 1)), s2);
            F = F + cauchy(v, u, nu - 1, [](const YField& a, const YField& b) { return a * dy(b); });
        }
        if (nu >= 2) {
            F = F + cauchy(u, u, nu - 2, [](const YField& a, const YField& b) { return a * dxbar(b); });
            F = F - dxbar(at(u, nu - 2), 2) + dxbar(at(p, nu - 2)) + rb * c * at(v, nu - 2);
        }
        if (nu >= 3) F = F + rb * s * dxbar(at(u, nu - 3));
        const Poly mF = mean(F);
        gauge_relations.push_back(mF);
        F = F - constant(mF);
        u.push_back(ianti(ianti(F)));

        YField G = scale(dxbar(dy(u.back())), Exact(-1)) - scale(s * dxbar(vn), s2) -
                   cauchy(v, v, nu, [](const YField& a, const YField& b) { return a * dy(b); });
        if (nu >= 1) {
            G = G - cauchy(u, v, nu - 1, [](const YField& a, const YField& b) { return a * dxbar(b); });
            G = G + dxbar(at(v, nu - 1), 2);
        }
        if (nu >= 2) G = G - rb * s * dxbar(at(v, nu - 2));
        if (nu == 3) G = G - constant(Poly::drift(0));
        const Poly mG = mean(G);
        if (nu < 3 && !mG.is_zero())
            throw DerivationError("derive_m4_hierarchy: nonzero mean at order " + std::to_string(nu) + ": " + mG.str(names));
        if (nu == 3) amplitude_rhs = mG + Poly::drift(0);
        p.push_back(ianti(G - constant(mG)) + constant(Poly::gauge(nu)));

        rep << "order " << nu << "\n";
        rep << "  u: " << yfield_str(u.back(), names) << "\n";
        rep << "  v: " << yfield_str(vn, names) << "\n";
        rep << "  p: " << yfield_str(p.back(), names) << "\n";
        rep << "  mean of x-momentum forcing: " << mF.str(names) << "\n";
        if (nu == 3) rep << "  mean of y-momentum forcing: " << mG.str(names) << "\n";
        if (nu == 3) break;
    }

    // Gauge relations: each mean(F^(nu)) = 0 is dxbar C_(nu-2) = (rest).
    DerivationResult res;
    for (std::size_t nu = 0; nu < gauge_relations.size(); ++nu) {
        const Poly& g = gauge_relations[nu];
        if (g.is_zero()) continue;
        if (nu < 2) throw DerivationError("derive_m4_hierarchy: unexpected mean at order " + std::to_string(nu));
        const int j = static_cast<int>(nu) - 2;
        const Exact cg = g.coefficient({{AtomKind::Gauge, j, false, 1}});
        if (cg.is_zero()) throw DerivationError("derive_m4_hierarchy: mean forcing cannot be absorbed by the gauge");
        Poly rest = g - Poly::gauge(j, 1) * cg;
        rest *= Exact(-1) / cg;
        const Exact aa = rest.coefficient({{AtomKind::Amplitude, 0, false, 0}, {AtomKind::Amplitude, 0, false, 1}});
        if (!(rest == Poly::amplitude(0) * Poly::amplitude(0, false, 1) * aa))
            throw DerivationError("derive_m4_hierarchy: gauge relation outside the A dxbar A family");
        res.constants.push_back({"dxbar C" + std::to_string(j) + " / (A dxbar A)", aa});
    }
    for (int j = 0; j + 2 <= max_order; ++j) {
        bool listed = false;
        for (const auto& c0 : res.constants) listed |= c0.name.starts_with("dxbar C" + std::to_string(j));
        if (!listed) res.constants.push_back({"dxbar C" + std::to_string(j) + " / (A dxbar A)", Exact(0)});
    }

    // d_t A + r^-1 r_t A = a4 A'''' + a2 Rbar A'' + k (3 A^2 A'' + 6 A A'^2).
    auto amp = [](int d) { return Atom{AtomKind::Amplitude, 0, false, d}; };
    const Atom rbar{AtomKind::MuBar, 0, false, 0};
    ModulationCoefficients& mc = res.coefficients;
    mc.model = ModelId::M4;
    mc.ch_fourth = amplitude_rhs.coefficient({amp(4)});
    mc.ch_second = amplitude_rhs.coefficient({rbar, amp(2)});
    const Exact k_a = amplitude_rhs.coefficient({amp(0), amp(0), amp(2)}) / Exact(3);
    const Exact k_b = amplitude_rhs.coefficient({amp(0), amp(1), amp(1)}) / Exact(6);
    if (!(k_a == k_b)) throw DerivationError("derive_m4_hierarchy: nonlinearity is not of the form dxbar^2 (A^3)");
    mc.ch_cubic = k_a;
    const Poly recon = Poly::amplitude(0, false, 4) * mc.ch_fourth + Rb * Poly::amplitude(0, false, 2) * mc.ch_second +
                       (A * A * Poly::amplitude(0, false, 2) * Exact(3) +
                        A * Poly::amplitude(0, false, 1) * Poly::amplitude(0, false, 1) * Exact(6)) *
                           mc.ch_cubic;
    if (!(recon == amplitude_rhs))
        throw DerivationError("derive_m4_hierarchy: unexpected terms " + (amplitude_rhs - recon).str(names));

    for (std::size_t k = 0; k < u.size(); ++k)
        res.series.orders.push_back({to_scalar(u[k]), to_scalar(v[k]), to_scalar(p[k])});

    rep << "gauge relations\n";
    for (const auto& c0 : res.constants) rep << "  " << c0.name << " = " << c0.value.str() << "\n";
    rep << "modulation equation\n  Dt[A] = (" << mc.ch_fourth.str() << ") dxbar^4 A + (" << mc.ch_second.str()
        << ") Rbar dxbar^2 A + (" << mc.ch_cubic.str() << ") dxbar^2 (A^3)\n";
    res.report = rep.str();
    return res;
}

}  // namespace dynbif
