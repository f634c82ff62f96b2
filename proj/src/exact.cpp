#include "dynbif/exact.hpp"

#include <cmath>
#include <stdexcept>

namespace dynbif {

Rational rational_from_double(double v)
{
    if (!std::isfinite(v)) throw std::invalid_argument("rational_from_double: non-finite value");
    if (v == 0.0) return Rational(0);
    int exp = 0;
    double mant = std::frexp(v, &exp);  // v = mant * 2^exp, 0.5 <= |mant| < 1
    auto m = static_cast<long long>(std::ldexp(mant, 53));
    exp -= 53;
    Rational q(m);
    using boost::multiprecision::cpp_int;
    cpp_int p = 1;
    p <<= std::abs(exp);
    if (exp >= 0) q *= Rational(p);
    else q /= Rational(p);
    return q;
}

double rational_to_double(const Rational& q) { return q.convert_to<double>(); }

std::string rational_str(const Rational& q)
{
    auto num = boost::multiprecision::numerator(q);
    auto den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

QSqrt2& QSqrt2::operator+=(const QSqrt2& o)
{
    a_ += o.a_;
    b_ += o.b_;
    return *this;
}

QSqrt2& QSqrt2::operator-=(const QSqrt2& o)
{
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
}

QSqrt2& QSqrt2::operator*=(const QSqrt2& o)
{
    Rational a = a_ * o.a_ + 2 * b_ * o.b_;
    Rational b = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(a);
    b_ = std::move(b);
    return *this;
}

QSqrt2& QSqrt2::operator/=(const QSqrt2& o)
{
    Rational n = o.a_ * o.a_ - 2 * o.b_ * o.b_;
    if (n == 0) throw std::domain_error("QSqrt2: division by zero");
    *this *= QSqrt2(o.a_ / n, -o.b_ / n);
    return *this;
}

double QSqrt2::to_double() const
{
    return rational_to_double(a_) + rational_to_double(b_) * std::sqrt(2.0);
}

std::string QSqrt2::str() const
{
    if (b_ == 0) return rational_str(a_);
    std::string s;
    if (a_ != 0) s = rational_str(a_) + (b_ > 0 ? " + " : " - ");
    else if (b_ < 0) s = "-";
    Rational mag = b_ < 0 ? Rational(-b_) : b_;
    if (mag != 1) s += rational_str(mag) + "*";
    s += "sqrt2";
    return s;
}

Exact Exact::from_double(double re, double im)
{
    return {QSqrt2(rational_from_double(re)), QSqrt2(rational_from_double(im))};
}

Exact& Exact::operator+=(const Exact& o)
{
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

Exact& Exact::operator-=(const Exact& o)
{
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

Exact& Exact::operator*=(const Exact& o)
{
    if (im_.is_zero() && o.im_.is_zero()) {
        re_ *= o.re_;
        return *this;
    }
    QSqrt2 re = re_ * o.re_ - im_ * o.im_;
    QSqrt2 im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

Exact& Exact::operator/=(const Exact& o)
{
    QSqrt2 n = o.re_ * o.re_ + o.im_ * o.im_;
    if (n.is_zero()) throw std::domain_error("Exact: division by zero");
    *this *= o.conj();
    re_ /= n;
    im_ /= n;
    return *this;
}

std::string Exact::str() const
{
    if (im_.is_zero()) return re_.str();
    std::string im = im_.str();
    if (re_.is_zero()) return "(" + im + ")i";
    return "(" + re_.str() + ") + (" + im + ")i";
}

Exact binomial(int n, int k)
{
    if (k < 0 || k > n) return Exact(0);
    Rational c(1);
    for (int j = 1; j <= k; ++j) c = c * (n - k + j) / j;
    return Exact(c);
}

}  // namespace dynbif
