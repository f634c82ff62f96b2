#include "dynbif/opexpand.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace dynbif {

int MultiIndex::order() const { return std::accumulate(alpha.begin(), alpha.end(), 0); }

int OperatorSpec::order() const
{
    int m = 0;
    for (const auto& comp : components)
        for (const auto& t : comp) m = std::max(m, t.alpha.order());
    return m;
}

void OperatorSpec::validate() const
{
    if (n < 1 || p < 0 || p > n) throw std::invalid_argument("OperatorSpec: need 0 <= p <= n, n >= 1");
    for (const auto& comp : components) {
        for (const auto& t : comp) {
            if (static_cast<int>(t.alpha.alpha.size()) != n)
                throw std::invalid_argument("OperatorSpec: multi-index length differs from n");
            for (int a : t.alpha.alpha)
                if (a < 0) throw std::invalid_argument("OperatorSpec: negative multi-index entry");
            if (t.tag != CoefficientTag::Constant && p == n)
                throw std::invalid_argument("OperatorSpec: sin y / cos y tags need a bounded direction");
        }
    }
}

bool word_key_less(const DerivativeWord& a, const DerivativeWord& b)
{
    return std::tie(a.slow, a.fast, a.tag) < std::tie(b.slow, b.fast, b.tag);
}

void normalize_words(std::vector<DerivativeWord>& words)
{
    std::stable_sort(words.begin(), words.end(), word_key_less);
    std::vector<DerivativeWord> out;
    for (auto& w : words) {
        if (!out.empty() && !word_key_less(out.back(), w) && !word_key_less(w, out.back())) {
            out.back().coefficient += w.coefficient;
        } else {
            out.push_back(std::move(w));
        }
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const DerivativeWord& w) { return w.coefficient.is_zero(); }),
              out.end());
    words = std::move(out);
}

const std::vector<DerivativeWord>& GradedExpansion::words(int grade, int component) const
{
    static const std::vector<DerivativeWord> empty;
    if (grade < 0 || grade >= static_cast<int>(grades.size())) return empty;
    return grades[static_cast<std::size_t>(grade)].at(static_cast<std::size_t>(component));
}

int GradedExpansion::nonempty_grades() const
{
    int c = 0;
    for (const auto& g : grades) {
        bool any = std::any_of(g.begin(), g.end(), [](const auto& ws) { return !ws.empty(); });
        if (any) ++c;
    }
    return c;
}

GradedExpansion expand_operator(const OperatorSpec& spec)
{
    spec.validate();
    GradedExpansion out;
    out.n = spec.n;
    out.p = spec.p;
    out.m = spec.order();
    const std::size_t ncomp = spec.components.size();
    out.grades.assign(static_cast<std::size_t>(out.m + 1), std::vector<std::vector<DerivativeWord>>(ncomp));

    for (std::size_t j = 0; j < ncomp; ++j) {
        for (const auto& term : spec.components[j]) {
            const auto& alpha = term.alpha.alpha;
            // Enumerate q_k in [0, alpha_k] for the unbounded directions.
            std::vector<int> q(static_cast<std::size_t>(spec.p), 0);
            while (true) {
                DerivativeWord w;
                w.tag = term.tag;
                w.fast = alpha;
                w.slow.assign(static_cast<std::size_t>(spec.p), 0);
                Exact c = term.coefficient;
                int grade = 0;
                for (int k = 0; k < spec.p; ++k) {
                    auto uk = static_cast<std::size_t>(k);
                    w.fast[uk] = alpha[uk] - q[uk];
                    w.slow[uk] = q[uk];
                    c *= binomial(alpha[uk], q[uk]);
                    grade += q[uk];
                }
                w.coefficient = c;
                out.grades[static_cast<std::size_t>(grade)][j].push_back(std::move(w));

                int k = 0;
                for (; k < spec.p; ++k) {
                    auto uk = static_cast<std::size_t>(k);
                    if (q[uk] < alpha[uk]) {
                        ++q[uk];
                        break;
                    }
                    q[uk] = 0;
                }
                if (k == spec.p) break;
            }
        }
    }
    for (auto& g : out.grades)
        for (auto& ws : g) normalize_words(ws);
    return out;
}

namespace {

const char* fast_name(int k)
{
    static const char* names[] = {"dx", "dy", "dz"};
    return k < 3 ? names[k] : "d?";
}

const char* slow_name(int k)
{
    static const char* names[] = {"dxbar", "dybar", "dzbar"};
    return k < 3 ? names[k] : "d?bar";
}

std::string power(const char* base, int e)
{
    if (e == 1) return base;
    return std::string(base) + "^" + std::to_string(e);
}

// Monomial part of a word, without coefficient ("" for the identity).
std::string word_body(const DerivativeWord& w, int n, int p, int fast_shift = 0)
{
    std::vector<std::string> parts;
    if (w.tag == CoefficientTag::SinY) parts.emplace_back("siny");
    if (w.tag == CoefficientTag::CosY) parts.emplace_back("cosy");
    for (int k = 0; k < n; ++k) {
        int e = w.fast[static_cast<std::size_t>(k)] - (k == 0 ? fast_shift : 0);
        if (e > 0) parts.push_back(power(fast_name(k), e));
    }
    for (int k = 0; k < p; ++k) {
        int e = w.slow[static_cast<std::size_t>(k)];
        if (e > 0) parts.push_back(power(slow_name(k), e));
    }
    std::string s;
    for (const auto& part : parts) s += (s.empty() ? "" : " ") + part;
    return s;
}

bool is_rational(const Exact& c) { return c.is_real() && c.re().sqrt2_part() == 0; }

std::string coeff_prefix(const Exact& c, bool has_body)
{
    if (!has_body) return c.str();
    if (c == Exact(1)) return "";
    if (c == Exact(-1)) return "-";
    std::string s = c.str();
    if (!is_rational(c)) s = "(" + s + ")";
    return s + " ";
}

std::string join_signed(const std::vector<std::pair<Exact, std::string>>& terms)
{
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        Exact c = terms[i].first;
        const std::string& body = terms[i].second;
        bool negative = is_rational(c) && c.re().rational_part() < 0;
        if (i > 0) {
            out += negative ? " - " : " + ";
            if (negative) c = -c;
        }
        out += coeff_prefix(c, !body.empty()) + body;
    }
    return out;
}

Rational gcd_rational(const Rational& a, const Rational& b)
{
    using boost::multiprecision::cpp_int;
    cpp_int na = boost::multiprecision::numerator(a), da = boost::multiprecision::denominator(a);
    cpp_int nb = boost::multiprecision::numerator(b), db = boost::multiprecision::denominator(b);
    cpp_int g = boost::multiprecision::gcd(na, nb);
    cpp_int l = boost::multiprecision::lcm(da, db);
    if (g < 0) g = -g;
    return Rational(g, l);
}

}  // namespace

std::string format_words(const std::vector<DerivativeWord>& words, int n, int p)
{
    if (words.empty()) return "0";
    bool factorable = n == 1 && words.size() > 1;
    for (const auto& w : words) {
        if (w.tag != CoefficientTag::Constant || !is_rational(w.coefficient) || w.slow != words.front().slow)
            factorable = false;
    }
    if (!factorable) {
        std::vector<std::pair<Exact, std::string>> terms;
        for (const auto& w : words) terms.emplace_back(w.coefficient, word_body(w, n, p));
        return join_signed(terms);
    }
    // Single direction, common slow part: pull out the content and the lowest dx power.
    Rational g = words.front().coefficient.re().rational_part();
    int f0 = words.front().fast[0];
    for (const auto& w : words) {
        g = gcd_rational(g, w.coefficient.re().rational_part());
        f0 = std::min(f0, w.fast[0]);
    }
    auto sorted = words;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.fast[0] < b.fast[0]; });
    if (sorted.front().coefficient.re().rational_part() < 0) g = -g;

    std::vector<std::pair<Exact, std::string>> inner;
    for (const auto& w : sorted) {
        DerivativeWord v = w;
        v.slow.assign(v.slow.size(), 0);
        inner.emplace_back(Exact(w.coefficient.re().rational_part() / g), word_body(v, n, p, f0));
    }
    DerivativeWord outer = words.front();
    outer.fast[0] = f0;
    std::string body = word_body(outer, n, p);
    std::string prefix = coeff_prefix(Exact(g), true);
    std::string paren = "(" + join_signed(inner) + ")";
    if (body.empty()) return prefix + paren;
    return prefix + body + " " + paren;
}

OperatorSpec swift_hohenberg_operator()
{
    OperatorSpec s;
    s.n = 1;
    s.p = 1;
    s.components = {{{Exact(-1), CoefficientTag::Constant, {{0}}},
                     {Exact(-2), CoefficientTag::Constant, {{2}}},
                     {Exact(-1), CoefficientTag::Constant, {{4}}}}};
    return s;
}

OperatorSpec laplacian_operator(int n, int p)
{
    OperatorSpec s;
    s.n = n;
    s.p = p;
    std::vector<OperatorTerm> terms;
    for (int k = 0; k < n; ++k) {
        MultiIndex a{std::vector<int>(static_cast<std::size_t>(n), 0)};
        a.alpha[static_cast<std::size_t>(k)] = 2;
        terms.push_back({Exact(1), CoefficientTag::Constant, a});
    }
    s.components = {terms};
    return s;
}

OperatorSpec kolmogorov_operator_family()
{
    OperatorSpec s;
    s.n = 2;
    s.p = 1;
    s.components = {
        {{Exact(1), CoefficientTag::Constant, {{2, 0}}},
         {Exact(1), CoefficientTag::Constant, {{0, 2}}},
         {-Exact::sqrt2(), CoefficientTag::SinY, {{1, 0}}}},
        {{Exact(1), CoefficientTag::Constant, {{1, 0}}}},
        {{Exact(1), CoefficientTag::Constant, {{0, 1}}}},
    };
    return s;
}

// ---------------------------------------------------------------------------
// Test fields

namespace {

std::complex<double> poly_eval(const std::vector<std::complex<double>>& c, double x)
{
    std::complex<double> v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
}

std::vector<std::complex<double>> poly_derivative(const std::vector<std::complex<double>>& c)
{
    if (c.size() <= 1) return {0.0};
    std::vector<std::complex<double>> d(c.size() - 1);
    for (std::size_t j = 1; j < c.size(); ++j) d[j - 1] = c[j] * double(j);
    return d;
}

std::vector<std::complex<double>> poly_mul(const std::vector<std::complex<double>>& a,
                                           const std::vector<std::complex<double>>& b)
{
    std::vector<std::complex<double>> c(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

std::complex<double> tag_value(CoefficientTag tag, const std::vector<double>& x, int p)
{
    switch (tag) {
    case CoefficientTag::Constant: return 1.0;
    case CoefficientTag::SinY: return std::sin(x.at(static_cast<std::size_t>(p)));
    case CoefficientTag::CosY: return std::cos(x.at(static_cast<std::size_t>(p)));
    }
    return 0.0;
}

}  // namespace

std::complex<double> Factor1D::derivative(int order, double x) const
{
    // Leibniz rule on poly(x) * exp(rate x).
    std::complex<double> sum = 0;
    auto d = poly;
    std::complex<double> binom = 1;
    for (int j = 0; j <= order; ++j) {
        sum += binom * poly_eval(d, x) * std::pow(rate, order - j);
        d = poly_derivative(d);
        binom = binom * double(order - j) / double(j + 1);
    }
    return sum * std::exp(rate * x);
}

TestField& TestField::add(SeparableTerm t)
{
    if (static_cast<int>(t.fast.size()) != n_ || static_cast<int>(t.slow.size()) != p_)
        throw std::invalid_argument("TestField: factor counts do not match (n, p)");
    terms_.push_back(std::move(t));
    return *this;
}

std::complex<double> TestField::derivative(const std::vector<int>& fast, const std::vector<int>& slow,
                                           const std::vector<double>& x, const std::vector<double>& xbar) const
{
    std::complex<double> total = 0;
    for (const auto& t : terms_) {
        std::complex<double> v = t.coefficient;
        for (int k = 0; k < n_; ++k) {
            auto uk = static_cast<std::size_t>(k);
            v *= t.fast[uk].derivative(fast[uk], x[uk]);
        }
        for (int k = 0; k < p_; ++k) {
            auto uk = static_cast<std::size_t>(k);
            v *= t.slow[uk].derivative(slow[uk], xbar[uk]);
        }
        total += v;
    }
    return total;
}

TestField TestField::restricted(double r) const
{
    TestField g(n_, 0);
    for (const auto& t : terms_) {
        SeparableTerm s;
        s.coefficient = t.coefficient;
        s.fast = t.fast;
        for (int k = 0; k < p_; ++k) {
            auto uk = static_cast<std::size_t>(k);
            // Q(r x) exp(rate r x): scale coefficients by r^j.
            auto q = t.slow[uk].poly;
            double rj = 1;
            for (auto& c : q) {
                c *= rj;
                rj *= r;
            }
            s.fast[uk].poly = poly_mul(s.fast[uk].poly, q);
            s.fast[uk].rate += r * t.slow[uk].rate;
        }
        g.add(std::move(s));
    }
    return g;
}

std::vector<EvalField> apply_graded(const GradedExpansion& exp, int component, const std::vector<TestField>& series,
                                    int order)
{
    if (order > static_cast<int>(series.size()))
        throw std::out_of_range("apply_graded: requested order exceeds the supplied series");
    std::vector<EvalField> out;
    for (int s = 0; s < order; ++s) {
        out.push_back([exp, component, series, s](const std::vector<double>& x, const std::vector<double>& xbar) {
            std::complex<double> v = 0;
            for (int q = 0; q <= std::min(s, exp.m); ++q) {
                const auto& psi = series[static_cast<std::size_t>(s - q)];
                for (const auto& w : exp.words(q, component))
                    v += w.coefficient.to_complex() * tag_value(w.tag, x, exp.p) *
                         psi.derivative(w.fast, w.slow, x, xbar);
            }
            return v;
        });
    }
    return out;
}

std::vector<std::vector<double>> substitution_sample_points(int n)
{
    std::vector<std::vector<double>> pts;
    for (int j = 0; j < 33; ++j) {
        std::vector<double> x(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) x[static_cast<std::size_t>(k)] = -1.0 + 2.0 * j / 32 + 0.137 * k - 0.05 * ((j * (k + 3)) % 5);
        pts.push_back(x);
    }
    return pts;
}

SubstitutionReport substitution_check(const OperatorSpec& spec, int component, const TestField& f, double r)
{
    spec.validate();
    if (f.n() != spec.n || f.p() != spec.p) throw std::invalid_argument("substitution_check: field shape mismatch");
    const GradedExpansion exp = expand_operator(spec);
    const TestField g = f.restricted(r);
    const std::vector<int> no_slow;
    SubstitutionReport rep;
    for (const auto& x : substitution_sample_points(spec.n)) {
        std::vector<double> xbar(x.begin(), x.begin() + spec.p);
        for (auto& v : xbar) v *= r;

        std::complex<double> direct = 0;
        for (const auto& t : spec.components.at(static_cast<std::size_t>(component)))
            direct += t.coefficient.to_complex() * tag_value(t.tag, x, spec.p) * g.derivative(t.alpha.alpha, no_slow, x, {});

        std::complex<double> graded = 0;
        double rl = 1;
        for (int l = 0; l <= exp.m; ++l) {
            std::complex<double> gl = 0;
            for (const auto& w : exp.words(l, component))
                gl += w.coefficient.to_complex() * tag_value(w.tag, x, spec.p) * f.derivative(w.fast, w.slow, x, xbar);
            graded += rl * gl;
            rl *= r;
        }
        rep.max_abs_error = std::max(rep.max_abs_error, std::abs(direct - graded));
        rep.max_abs_value = std::max(rep.max_abs_value, std::abs(direct));
    }
    return rep;
}

}  // namespace dynbif
