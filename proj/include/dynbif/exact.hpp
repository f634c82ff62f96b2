#pragma once

// Exact arithmetic in Q(sqrt2)(i): numbers (a + b*sqrt2) + i*(c + d*sqrt2)
// with arbitrary-precision rational a, b, c, d.

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <string>

namespace dynbif {

using Rational = boost::multiprecision::cpp_rational;

// Exact binary expansion of a finite double.
Rational rational_from_double(double v);
double rational_to_double(const Rational& q);
std::string rational_str(const Rational& q);

class QSqrt2 {
public:
    QSqrt2() = default;
    QSqrt2(Rational a) : a_(std::move(a)) {}  // NOLINT(implicit)
    QSqrt2(int a) : a_(a) {}                   // NOLINT(implicit)
    QSqrt2(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

    static QSqrt2 sqrt2() { return QSqrt2(Rational(0), Rational(1)); }

    const Rational& rational_part() const { return a_; }
    const Rational& sqrt2_part() const { return b_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    double to_double() const;
    std::string str() const;

    QSqrt2 operator-() const { return {-a_, -b_}; }
    QSqrt2& operator+=(const QSqrt2& o);
    QSqrt2& operator-=(const QSqrt2& o);
    QSqrt2& operator*=(const QSqrt2& o);
    QSqrt2& operator/=(const QSqrt2& o);

    friend QSqrt2 operator+(QSqrt2 x, const QSqrt2& y) { return x += y; }
    friend QSqrt2 operator-(QSqrt2 x, const QSqrt2& y) { return x -= y; }
    friend QSqrt2 operator*(QSqrt2 x, const QSqrt2& y) { return x *= y; }
    friend QSqrt2 operator/(QSqrt2 x, const QSqrt2& y) { return x /= y; }
    friend bool operator==(const QSqrt2& x, const QSqrt2& y) { return x.a_ == y.a_ && x.b_ == y.b_; }

private:
    Rational a_{0};
    Rational b_{0};
};

class Exact {
public:
    Exact() = default;
    Exact(int v) : re_(v) {}                            // NOLINT(implicit)
    Exact(Rational v) : re_(std::move(v)) {}            // NOLINT(implicit)
    Exact(QSqrt2 re) : re_(std::move(re)) {}            // NOLINT(implicit)
    Exact(QSqrt2 re, QSqrt2 im) : re_(std::move(re)), im_(std::move(im)) {}

    static Exact i() { return {QSqrt2(0), QSqrt2(1)}; }
    static Exact sqrt2() { return QSqrt2::sqrt2(); }
    static Exact ratio(long num, long den) { return Rational(num, den); }
    // Exact image of a double (or pair of doubles for a complex value).
    static Exact from_double(double re, double im = 0.0);

    const QSqrt2& re() const { return re_; }
    const QSqrt2& im() const { return im_; }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_real() const { return im_.is_zero(); }
    Exact conj() const { return {re_, -im_}; }
    std::complex<double> to_complex() const { return {re_.to_double(), im_.to_double()}; }
    std::string str() const;

    Exact operator-() const { return {-re_, -im_}; }
    Exact& operator+=(const Exact& o);
    Exact& operator-=(const Exact& o);
    Exact& operator*=(const Exact& o);
    Exact& operator/=(const Exact& o);

    friend Exact operator+(Exact x, const Exact& y) { return x += y; }
    friend Exact operator-(Exact x, const Exact& y) { return x -= y; }
    friend Exact operator*(Exact x, const Exact& y) { return x *= y; }
    friend Exact operator/(Exact x, const Exact& y) { return x /= y; }
    friend bool operator==(const Exact& x, const Exact& y) { return x.re_ == y.re_ && x.im_ == y.im_; }

private:
    QSqrt2 re_;
    QSqrt2 im_;
};

Exact binomial(int n, int k);

}  // namespace dynbif
