#include "dynbif/derivation.hpp"

#include <algorithm>
#include <sstream>

namespace dynbif {

namespace {

using SSeries = std::vector<ScalarField>;

void add_into(ScalarField& a, const ScalarField& b, const Exact& scale = Exact(1))
{
    for (const auto& [h, poly] : b) {
        Poly& t = a[h];
        t += poly * scale;
        if (t.is_zero()) a.erase(h);
    }
}

ScalarField scaled(const ScalarField& a, const Exact& c)
{
    ScalarField out;
    add_into(out, a, c);
    return out;
}

ScalarField poly_times(const ScalarField& a, const Poly& q)
{
    ScalarField out;
    for (const auto& [h, poly] : a) {
        Poly t = poly * q;
        if (!t.is_zero()) out[h] = std::move(t);
    }
    return out;
}

ScalarField product(const ScalarField& a, const ScalarField& b, int max_harmonic)
{
    ScalarField out;
    for (const auto& [ha, pa] : a) {
        for (const auto& [hb, pb] : b) {
            Harmonic h{ha.first + hb.first, ha.second + hb.second};
            if (std::abs(h.first) > max_harmonic || std::abs(h.second) > max_harmonic) continue;
            Poly& t = out[h];
            t += pa * pb;
            if (t.is_zero()) out.erase(h);
        }
    }
    return out;
}

ScalarField dx_fast(const ScalarField& a)
{
    ScalarField out;
    for (const auto& [h, poly] : a)
        if (h.first != 0) out[h] = poly * (Exact::i() * Exact(h.first));
    return out;
}

ScalarField dx_slow(const ScalarField& a)
{
    ScalarField out;
    for (const auto& [h, poly] : a) {
        Poly d = poly.dx();
        if (!d.is_zero()) out[h] = std::move(d);
    }
    return out;
}

// r-series helpers; every series has entries 0..K.
SSeries s_add(const SSeries& a, const SSeries& b)
{
    SSeries out = a;
    for (std::size_t k = 0; k < b.size(); ++k) add_into(out[k], b[k]);
    return out;
}

SSeries s_scale(const SSeries& a, const Exact& c)
{
    SSeries out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = scaled(a[k], c);
    return out;
}

SSeries s_mu(const SSeries& a)
{
    SSeries out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = poly_times(a[k], Poly::mu());
    return out;
}

SSeries s_mul(const SSeries& a, const SSeries& b, int max_harmonic)
{
    SSeries out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k)
        for (std::size_t i = 0; i <= k; ++i) add_into(out[k], product(a[i], b[k - i], max_harmonic));
    return out;
}

SSeries s_shift(const SSeries& a, int j)
{
    SSeries out(a.size());
    for (std::size_t k = static_cast<std::size_t>(j); k < a.size(); ++k) out[k] = a[k - static_cast<std::size_t>(j)];
    return out;
}

// d/dx -> d/dx + r d/dxbar acting on a series.
SSeries s_dx(const SSeries& a)
{
    SSeries out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        out[k] = dx_fast(a[k]);
        if (k > 0) add_into(out[k], dx_slow(a[k - 1]));
    }
    return out;
}

SSeries component(const std::vector<VecField>& psi, std::size_t j)
{
    SSeries s;
    for (const auto& f : psi) s.push_back(f.at(j));
    return s;
}

std::vector<VecField> assemble_components(const std::vector<SSeries>& comps)
{
    std::vector<VecField> out(comps.front().size(), VecField(comps.size()));
    for (std::size_t j = 0; j < comps.size(); ++j)
        for (std::size_t k = 0; k < comps[j].size(); ++k) out[k][j] = comps[j][k];
    return out;
}

Exact symbol_at(const std::vector<DerivativeWord>& words, int k1)
{
    // Grade-0 words: fast powers only.
    Exact s(0);
    for (const auto& w : words) {
        Exact term = w.coefficient;
        Exact ik = Exact::i() * Exact(k1);
        for (int e = 0; e < w.fast[0]; ++e) term *= ik;
        s += term;
    }
    return s;
}

Poly apply_word(const DerivativeWord& w, int k1, const Poly& poly)
{
    Exact c = w.coefficient;
    Exact ik = Exact::i() * Exact(k1);
    for (int e = 0; e < w.fast[0]; ++e) c *= ik;
    if (c.is_zero()) return {};
    Poly d = poly;
    for (int e = 0; e < w.slow[0]; ++e) d = d.dx();
    return d * c;
}

Exact det(const ExactMatrix& H)
{
    if (H.size() == 1) return H[0][0];
    if (H.size() == 2) return H[0][0] * H[1][1] - H[0][1] * H[1][0];
    throw DerivationError("harmonic engine supports at most two components");
}

std::vector<Poly> solve_linear(const ExactMatrix& H, const std::vector<Poly>& b)
{
    Exact d = det(H);
    if (d.is_zero()) throw DerivationError("singular system in solve_linear");
    if (H.size() == 1) return {b[0] * (Exact(1) / d)};
    Exact inv = Exact(1) / d;
    return {(b[0] * H[1][1] - b[1] * H[0][1]) * inv, (b[1] * H[0][0] - b[0] * H[1][0]) * inv};
}

std::string harmonic_str(const Harmonic& h)
{
    return "(" + std::to_string(h.first) + "," + std::to_string(h.second) + ")";
}

std::string vec_str(const std::vector<Exact>& v)
{
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].str();
    return s + ")";
}

}  // namespace

HarmonicProblem make_problem(const ModelSpec& m)
{
    m.validate();
    HarmonicProblem p;
    p.model = m;
    p.beta = m.beta();
    p.components = m.components();
    const int H = p.max_harmonic;

    switch (m.id) {
    case ModelId::M1: {
        p.omega = Exact(0);
        p.M = {{Exact(0)}};
        p.L = expand_operator(swift_hohenberg_operator());
        p.critical = {{1, 0}};
        p.names.amplitudes = {"A"};
        p.nonlinearity = [H](const std::vector<VecField>& psi, int) {
            SSeries u = component(psi, 0);
            SSeries cube = s_mul(s_mul(u, u, H), u, H);
            return assemble_components({s_shift(s_add(s_mu(u), s_scale(cube, Exact(-1))), 2)});
        };
        break;
    }
    case ModelId::M2: {
        const Exact a = Exact::from_double(m.brusselator.a);
        const Exact d1 = Exact::from_double(m.brusselator.d1);
        const Exact d2 = Exact::from_double(m.brusselator.d2);
        const Exact a2 = a * a;
        p.omega = a;
        p.M = {{a2, a2}, {-(Exact(1) + a2), -a2}};
        OperatorSpec L;
        L.n = 1;
        L.p = 1;
        L.components = {{{d1, CoefficientTag::Constant, {{2}}}}, {{d2, CoefficientTag::Constant, {{2}}}}};
        p.L = expand_operator(L);
        p.critical = {{0, 1}};
        p.names.amplitudes = {"A"};
        const Exact quad = (Exact(1) + a2) / a;
        p.nonlinearity = [H, a, a2, quad](const std::vector<VecField>& psi, int) {
            SSeries u = component(psi, 0);
            SSeries v = component(psi, 1);
            SSeries uu = s_mul(u, u, H);
            SSeries f = s_shift(s_add(s_scale(uu, quad), s_scale(s_mul(u, v, H), Exact(2) * a)), 1);
            f = s_add(f, s_shift(s_scale(s_mu(uu), quad), 3));
            f = s_add(f, s_shift(s_mul(uu, v, H), 2));
            f = s_add(f, s_shift(s_scale(s_mu(u), Exact(1) + a2), 2));
            return assemble_components({f, s_scale(f, Exact(-1))});
        };
        break;
    }
    case ModelId::M3: {
        p.omega = Exact(1);
        p.M = {{Exact(0), Exact(0)}, {Exact(0), Exact(0)}};
        OperatorSpec L = swift_hohenberg_operator();
        auto sh = L.components[0];
        auto c1 = sh;
        auto c2 = sh;
        c1.push_back({Exact(-1), CoefficientTag::Constant, {{1}}});
        c2.push_back({Exact(1), CoefficientTag::Constant, {{1}}});
        L.components = {c1, c2};
        p.L = expand_operator(L);
        p.critical = {{1, -1}, {1, 1}};
        p.names.amplitudes = {"A1", "A2"};
        p.nonlinearity = [H](const std::vector<VecField>& psi, int) {
            SSeries u = component(psi, 0);
            SSeries v = component(psi, 1);
            SSeries q = s_add(s_add(s_mul(u, u, H), s_mul(u, v, H)), s_mul(v, v, H));
            SSeries adv = s_shift(s_dx(q), 1);
            return assemble_components({s_add(s_shift(s_mu(u), 2), adv), s_add(s_shift(s_mu(v), 2), adv)});
        };
        break;
    }
    case ModelId::M4:
        throw DerivationError("the Kolmogorov flow uses derive_m4_hierarchy");
    }
    return p;
}

ExactMatrix harmonic_matrix(const HarmonicProblem& p, const Harmonic& h)
{
    const auto n = static_cast<std::size_t>(p.components);
    ExactMatrix H(n, std::vector<Exact>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) H[i][j] = -p.M[i][j];
        H[i][i] += Exact::i() * Exact(h.second) * p.omega - symbol_at(p.L.words(0, static_cast<int>(i)), h.first);
    }
    return H;
}

std::vector<Exact> right_null_vector(const ExactMatrix& H)
{
    if (!det(H).is_zero()) throw DerivationError("right_null_vector: matrix is regular");
    std::vector<Exact> v;
    if (H.size() == 1) {
        v = {Exact(1)};
    } else if (!(H[0][0].is_zero() && H[0][1].is_zero())) {
        v = {-H[0][1], H[0][0]};
    } else if (!(H[1][0].is_zero() && H[1][1].is_zero())) {
        v = {H[1][1], -H[1][0]};
    } else {
        throw DerivationError("right_null_vector: kernel is not one-dimensional");
    }
    Exact lead = v[0].is_zero() ? v[1] : v[0];
    for (auto& x : v) x /= lead;
    return v;
}

std::vector<Exact> left_null_vector(const ExactMatrix& H, const std::vector<Exact>& right)
{
    std::vector<Exact> w;
    if (H.size() == 1) {
        w = {Exact(1)};
    } else if (!(H[1][1].is_zero() && H[0][1].is_zero())) {
        w = {H[1][1], -H[0][1]};
    } else {
        w = {-H[1][0], H[0][0]};
    }
    Exact s(0);
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * right[i];
    if (s.is_zero()) throw DerivationError("left_null_vector: Jordan block at a critical harmonic");
    for (auto& x : w) x /= s;
    return w;
}

VecField neutral_solution(const HarmonicProblem& p)
{
    VecField psi(static_cast<std::size_t>(p.components));
    for (std::size_t j = 0; j < p.critical.size(); ++j) {
        const Harmonic h = p.critical[j];
        const auto H = harmonic_matrix(p, h);
        if (!det(H).is_zero()) throw DerivationError("declared critical harmonic is not neutral");
        const auto phi = right_null_vector(H);
        const Harmonic hc{-h.first, -h.second};
        const Poly A = Poly::amplitude(static_cast<int>(j));
        for (std::size_t c = 0; c < phi.size(); ++c) {
            if (phi[c].is_zero()) continue;
            psi[c][h] += A * phi[c];
            psi[c][hc] += A.conj() * phi[c].conj();
        }
    }
    return psi;
}

MatchingRHS assemble_matching(const HarmonicProblem& p, int order, const AnsatzSeries& series)
{
    if (order < 0) throw DerivationError("assemble_matching: negative order");
    if (static_cast<int>(series.orders.size()) < order || series.orders.empty())
        throw DerivationError("assemble_matching: missing lower-order series entries");
    const auto ncomp = static_cast<std::size_t>(p.components);
    MatchingRHS rhs{order, VecField(ncomp)};
    if (order == 0) return rhs;

    for (int q = 1; q <= order; ++q) {
        const VecField& psi = series.orders[static_cast<std::size_t>(order - q)];
        for (std::size_t c = 0; c < ncomp; ++c) {
            for (const auto& w : p.L.words(q, static_cast<int>(c))) {
                for (const auto& [h, poly] : psi[c]) {
                    Poly t = apply_word(w, h.first, poly);
                    if (t.is_zero()) continue;
                    Poly& dst = rhs.B[c][h];
                    dst += t;
                    if (dst.is_zero()) rhs.B[c].erase(h);
                }
            }
        }
    }

    std::vector<VecField> psi(series.orders.begin(), series.orders.begin() + order);
    psi.emplace_back(ncomp);
    auto nl = p.nonlinearity(psi, order);
    for (std::size_t c = 0; c < ncomp; ++c) add_into(rhs.B[c], nl.at(static_cast<std::size_t>(order))[c]);

    if (order == p.beta) {
        const VecField& psi0 = series.orders[0];
        for (std::size_t c = 0; c < ncomp; ++c) {
            for (const auto& [h, poly] : psi0[c]) {
                Poly& dst = rhs.B[c][h];
                dst -= poly.drift_of();
                if (dst.is_zero()) rhs.B[c].erase(h);
            }
        }
    }
    return rhs;
}

OrderSolution solve_order(const HarmonicProblem& p, const MatchingRHS& rhs)
{
    const auto ncomp = static_cast<std::size_t>(p.components);
    OrderSolution sol{VecField(ncomp), std::vector<Poly>(p.critical.size())};

    std::vector<Harmonic> harmonics;
    for (const auto& comp : rhs.B)
        for (const auto& [h, poly] : comp) harmonics.push_back(h);
    std::sort(harmonics.begin(), harmonics.end());
    harmonics.erase(std::unique(harmonics.begin(), harmonics.end()), harmonics.end());
    if (p.reverse_harmonic_order) std::reverse(harmonics.begin(), harmonics.end());

    for (const auto& h : harmonics) {
        std::vector<Poly> b(ncomp);
        for (std::size_t c = 0; c < ncomp; ++c) {
            auto it = rhs.B[c].find(h);
            if (it != rhs.B[c].end()) b[c] = it->second;
        }
        auto H = harmonic_matrix(p, h);
        std::vector<Poly> x;
        if (!det(H).is_zero()) {
            x = solve_linear(H, b);
        } else {
            int amp = -1;
            bool conj_side = false;
            for (std::size_t j = 0; j < p.critical.size(); ++j) {
                if (p.critical[j] == h) amp = static_cast<int>(j);
                if (Harmonic{-p.critical[j].first, -p.critical[j].second} == h) {
                    amp = static_cast<int>(j);
                    conj_side = true;
                }
            }
            if (amp < 0)
                throw DerivationError("singular harmonic matrix at non-critical harmonic " + harmonic_str(h));
            const auto phi = right_null_vector(H);
            const auto phis = left_null_vector(H, phi);
            Poly rho;
            for (std::size_t c = 0; c < ncomp; ++c) rho += b[c] * phis[c];
            if (!conj_side) sol.resonant[static_cast<std::size_t>(amp)] = rho;
            // Remove the resonant part and pick the solution with phi* . psi = 0.
            ExactMatrix G = H;
            for (std::size_t i = 0; i < ncomp; ++i) {
                b[i] -= rho * phi[i];
                for (std::size_t k = 0; k < ncomp; ++k) G[i][k] += phi[i] * phis[k];
            }
            x = solve_linear(G, b);
        }
        for (std::size_t c = 0; c < ncomp; ++c)
            if (!x[c].is_zero()) sol.psi[c][h] = x[c];
    }
    return sol;
}

ModulationCoefficients solvability(const HarmonicProblem& p, const std::vector<Poly>& resonant_at_beta,
                                   const std::vector<Poly>& carried)
{
    ModulationCoefficients mc;
    mc.model = p.model.id;
    const std::size_t namp = p.critical.size();
    for (std::size_t j = 0; j < namp; ++j) {
        const int ij = static_cast<int>(j);
        Poly R = resonant_at_beta[j] + carried[j];
        Poly drift = Poly::drift(ij);
        if (!(R.coefficient({{AtomKind::Drift, ij, false, 0}}) == Exact(-1)))
            throw DerivationError("solvability: drift marker does not carry coefficient -1");
        R += drift;

        auto A = [&](bool conj, int d = 0, int idx = -1) { return Atom{AtomKind::Amplitude, idx < 0 ? ij : idx, conj, d}; };
        const Atom mu{AtomKind::MuBar, 0, false, 0};
        Exact diff = R.coefficient({A(false, 2)});
        Exact lin = R.coefficient({mu, A(false)});
        Exact adv = -R.coefficient({A(false, 1)});
        Exact self = R.coefficient({A(false), A(false), A(true)});
        Exact cross(0);
        Poly recognised = Poly::amplitude(ij, false, 2) * diff + Poly::mu() * Poly::amplitude(ij) * lin -
                          Poly::amplitude(ij, false, 1) * adv +
                          Poly::amplitude(ij) * Poly::amplitude(ij) * Poly::amplitude(ij, true) * self;
        for (std::size_t k = 0; k < namp; ++k) {
            if (k == j) continue;
            const int ik = static_cast<int>(k);
            cross = R.coefficient({A(false), A(false, 0, ik), A(true, 0, ik)});
            recognised += Poly::amplitude(ij) * Poly::amplitude(ik) * Poly::amplitude(ik, true) * cross;
        }
        if (!(recognised == R))
            throw DerivationError("solvability: non-cubic residual polynomial: " + (R - recognised).str(p.names));
        mc.diffusion.push_back(diff);
        mc.mu_linear.push_back(lin);
        mc.advection.push_back(adv);
        mc.cubic_self.push_back(self);
        mc.cubic_cross.push_back(cross);
    }
    return mc;
}

bool reality_closed(const VecField& f)
{
    for (const auto& comp : f) {
        for (const auto& [h, poly] : comp) {
            auto it = comp.find({-h.first, -h.second});
            if (it == comp.end() || !(it->second == poly.conj())) return false;
        }
    }
    return true;
}

std::string field_str(const VecField& f, const SymbolNames& names)
{
    std::ostringstream os;
    bool any = false;
    for (std::size_t c = 0; c < f.size(); ++c) {
        for (const auto& [h, poly] : f[c]) {
            os << "    [" << c + 1 << "] " << harmonic_str(h) << ": " << poly.str(names) << "\n";
            any = true;
        }
    }
    if (!any) os << "    0\n";
    return os.str();
}

BrusselatorCoefficients brusselator_reference(const BrusselatorParams& p)
{
    using C = std::complex<double>;
    const double a = p.a, a2 = a * a;
    BrusselatorCoefficients r;
    r.c1 = C(p.d1 + p.d2, -a * (p.d1 - p.d2)) / 2.0;
    r.c2 = (1 + a2) / 2;
    r.c3 = 0.5 * C((2 + a2) / a2, (4 - 7 * a2 + 4 * a2 * a2) / (3 * a2 * a));
    return r;
}

namespace {

Exact coefficient_of(const ScalarField& f, const Harmonic& h, const Monomial& m)
{
    auto it = f.find(h);
    return it == f.end() ? Exact(0) : it->second.coefficient(m);
}

std::vector<NamedConstant> named_constants(const HarmonicProblem& p, const VecField& psi1)
{
    std::vector<NamedConstant> out;
    auto amp = [](int j, bool conj = false) { return Atom{AtomKind::Amplitude, j, conj, 0}; };
    if (p.model.id == ModelId::M2) {
        const char* comp[] = {"u", "v"};
        for (std::size_t c = 0; c < 2; ++c)
            out.push_back({std::string("V_") + comp[c], coefficient_of(psi1[c], {0, 2}, {amp(0), amp(0)})});
        for (std::size_t c = 0; c < 2; ++c)
            out.push_back({std::string("V0_") + comp[c], coefficient_of(psi1[c], {0, 0}, {amp(0), amp(0, true)})});
    } else if (p.model.id == ModelId::M3) {
        const char* sym[] = {"v", "eta"};
        for (std::size_t c = 0; c < 2; ++c) {
            out.push_back({std::string(sym[c]) + "2", coefficient_of(psi1[c], {2, -2}, {amp(0), amp(0)})});
            out.push_back({std::string(sym[c]) + "3", coefficient_of(psi1[c], {2, 0}, {amp(0), amp(1)})});
            out.push_back({std::string(sym[c]) + "4", coefficient_of(psi1[c], {2, 2}, {amp(1), amp(1)})});
        }
    }
    return out;
}

std::string equation_str(const HarmonicProblem& p, const ModulationCoefficients& mc)
{
    std::ostringstream os;
    for (std::size_t j = 0; j < p.critical.size(); ++j) {
        const std::string& A = p.names.amplitudes[j];
        os << "  Dt[" << A << "] = (" << mc.diffusion[j].str() << ") dxbar^2 " << A << " + (" << mc.mu_linear[j].str()
           << ") mubar " << A;
        if (!mc.advection[j].is_zero()) os << " - (" << mc.advection[j].str() << ") dxbar " << A;
        os << " + (" << mc.cubic_self[j].str() << ") " << A << "|" << A << "|^2";
        if (p.critical.size() > 1) {
            const std::string& B = p.names.amplitudes[1 - j];
            os << " + (" << mc.cubic_cross[j].str() << ") " << A << "|" << B << "|^2";
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace

DerivationResult derive(const ModelSpec& m, const DerivationOptions& opt)
{
    if (m.id == ModelId::M4) return derive_m4_hierarchy(3);
    HarmonicProblem p = make_problem(m);
    p.reverse_harmonic_order = opt.reverse_harmonic_order;

    DerivationResult res;
    res.series.orders.push_back(neutral_solution(p));
    std::vector<Poly> carried(p.critical.size());
    std::ostringstream rep;
    rep << "model " << m.name() << " (beta = " << p.beta << ")\n";
    for (std::size_t j = 0; j < p.critical.size(); ++j) {
        const auto H = harmonic_matrix(p, p.critical[j]);
        const auto phi = right_null_vector(H);
        rep << "critical harmonic " << harmonic_str(p.critical[j]) << ": phi = " << vec_str(phi)
            << ", phi* = " << vec_str(left_null_vector(H, phi)) << "\n";
    }
    rep << "order 0\n  psi^(0):\n" << field_str(res.series.orders[0], p.names);

    MatchingRHS b0 = assemble_matching(p, 0, res.series);
    res.rhs.push_back(b0);
    for (int nu = 1; nu <= p.beta; ++nu) {
        MatchingRHS b = assemble_matching(p, nu, res.series);
        if (!reality_closed(b.B)) throw DerivationError("matching right-hand side is not reality-closed");
        res.rhs.push_back(b);
        OrderSolution sol = solve_order(p, b);
        rep << "order " << nu << "\n  B^(" << nu << "):\n" << field_str(b.B, p.names);
        for (std::size_t j = 0; j < p.critical.size(); ++j)
            rep << "  resonant projection [" << p.names.amplitudes[j] << "]: " << sol.resonant[j].str(p.names) << "\n";
        if (nu < p.beta) {
            for (std::size_t j = 0; j < carried.size(); ++j) carried[j] += sol.resonant[j];
            res.series.orders.push_back(sol.psi);
            rep << "  psi^(" << nu << "):\n" << field_str(sol.psi, p.names);
        } else {
            res.coefficients = solvability(p, sol.resonant, carried);
        }
    }
    if (res.series.orders.size() > 1) res.constants = named_constants(p, res.series.orders[1]);
    rep << "constants\n";
    for (const auto& c : res.constants) rep << "  " << c.name << " = " << c.value.str() << "\n";
    rep << "modulation equation\n" << equation_str(p, res.coefficients);
    res.report = rep.str();
    return res;
}

}  // namespace dynbif
