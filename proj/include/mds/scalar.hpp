// scalar.hpp -- exact rational / quadratic-surd scalars with a tagged
// complex floating fallback.
//
// The symbolic layer works over Q by default.  The isometry V = n^{-1/2} sum t_i
// forces adjoining sqrt(n), so the exact value is a + b*sqrt(r) with a,b
// rational and r a fixed nonnegative integer radicand.  Floating values are
// complex<double> and compare with tolerance 1e-12.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace mds {

class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    Rational operator-() const { return Rational(-num_, den_, raw_tag{}); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                    i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return a + (-b);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
        return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }

    Rational abs() const { return num_ < 0 ? -*this : *this; }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
        return os << r.str();
    }

private:
    using i128 = __int128;
    struct raw_tag {};
    Rational(long long n, long long d, raw_tag) : num_(n), den_(d) {}

    static Rational make(i128 n, i128 d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        i128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw std::overflow_error("Rational: overflow");
        return Rational(static_cast<long long>(n), static_cast<long long>(d), raw_tag{});
    }
    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) { i128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }
    void normalize() { *this = make(num_, den_); }

    long long num_;
    long long den_;
};

// A scalar is either exact (a + b*sqrt(rad), conjugation-invariant since real)
// or a complex floating value.  Mixing exact and floating demotes to floating.
class Scalar {
public:
    static constexpr double kTol = 1e-12;

    Scalar() : exact_(true), rad_(0) {}
    Scalar(long long n) : exact_(true), a_(n), rad_(0) {}
    Scalar(const Rational& r) : exact_(true), a_(r), rad_(0) {}
    Scalar(const Rational& a, const Rational& b, int rad)
        : exact_(true), a_(a), b_(b), rad_(rad) {
        if (b_.is_zero()) rad_ = 0;
        if (rad_ < 0) throw std::domain_error("Scalar: negative radicand");
        if (rad_ == 0) b_ = Rational(0);  // b*sqrt(0) contributes nothing
        reduce_radicand();
    }
    static Scalar complex(std::complex<double> z) {
        Scalar s;
        s.exact_ = false;
        s.c_ = z;
        return s;
    }

    bool is_exact() const { return exact_; }
    bool is_rational() const { return exact_ && b_.is_zero(); }
    const Rational& rat() const {
        if (!is_rational()) throw std::domain_error("Scalar: not a plain rational");
        return a_;
    }
    const Rational& surd_a() const { return a_; }
    const Rational& surd_b() const { return b_; }
    int radicand() const { return rad_; }

    bool is_zero() const {
        if (exact_) return a_.is_zero() && b_.is_zero();
        return std::abs(c_) <= kTol;
    }

    std::complex<double> to_complex() const {
        if (!exact_) return c_;
        return {a_.to_double() + b_.to_double() * std::sqrt(double(rad_)), 0.0};
    }

    Scalar conj() const {
        if (exact_) return *this;
        return complex(std::conj(c_));
    }

    // sign of the real exact value a + b*sqrt(rad)
    int sign() const {
        if (!exact_) throw std::domain_error("Scalar: sign of floating value");
        if (b_.is_zero()) return a_.sign();
        if (a_.is_zero()) return b_.sign();
        if (a_.sign() == b_.sign()) return a_.sign();
        // compare a^2 against b^2 * rad; sign decided by the larger magnitude
        Rational a2 = a_ * a_, b2r = b_ * b_ * Rational(rad_);
        if (a2 == b2r) return 0;
        return (a2 < b2r) ? b_.sign() : a_.sign();
    }

    Scalar abs() const {
        if (!exact_) return complex(std::abs(c_));
        return sign() < 0 ? -*this : *this;
    }

    Scalar operator-() const {
        if (exact_) return Scalar(-a_, -b_, rad_);
        return complex(-c_);
    }

    friend Scalar operator+(const Scalar& x, const Scalar& y) {
        if (x.exact_ && y.exact_) {
            int rad = merge_rad(x, y);
            return Scalar(x.a_ + y.a_, x.b_ + y.b_, rad);
        }
        return complex(x.to_complex() + y.to_complex());
    }
    friend Scalar operator-(const Scalar& x, const Scalar& y) { return x + (-y); }
    friend Scalar operator*(const Scalar& x, const Scalar& y) {
        if (x.exact_ && y.exact_) {
            int rad = merge_rad(x, y);
            // (a1 + b1 s)(a2 + b2 s) = a1 a2 + b1 b2 rad + (a1 b2 + a2 b1) s
            return Scalar(x.a_ * y.a_ + x.b_ * y.b_ * Rational(rad),
                          x.a_ * y.b_ + x.b_ * y.a_, rad);
        }
        return complex(x.to_complex() * y.to_complex());
    }
    friend Scalar operator/(const Scalar& x, const Scalar& y) {
        if (x.exact_ && y.exact_) {
            if (y.is_zero()) throw std::domain_error("Scalar: division by zero");
            int rad = merge_rad(x, y);
            // multiply by the conjugate surd (a - b s) / (a^2 - b^2 rad)
            Rational d = y.a_ * y.a_ - y.b_ * y.b_ * Rational(rad);
            if (d.is_zero()) throw std::domain_error("Scalar: division by zero norm");
            Scalar num = x * Scalar(y.a_, -y.b_, rad);
            return Scalar(num.a_ / d, num.b_ / d, num.rad_);
        }
        return complex(x.to_complex() / y.to_complex());
    }
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    friend bool operator==(const Scalar& x, const Scalar& y) {
        if (x.exact_ && y.exact_) {
            if (x.rad_ != 0 && y.rad_ != 0 && x.rad_ != y.rad_) return false;
            return x.a_ == y.a_ && x.b_ == y.b_;
        }
        return std::abs(x.to_complex() - y.to_complex()) <= kTol;
    }
    friend bool operator!=(const Scalar& x, const Scalar& y) { return !(x == y); }

    // exact comparison of |x| vs |y| for exact scalars (used by exact norms)
    static bool abs_less(const Scalar& x, const Scalar& y) {
        if (x.exact_ && y.exact_) return (y.abs() - x.abs()).sign() > 0;
        return std::abs(x.to_complex()) < std::abs(y.to_complex());
    }

    static Scalar sqrt_of(int r) { return Scalar(Rational(0), Rational(1), r); }

    std::string str() const {
        if (!exact_) {
            return "(" + std::to_string(c_.real()) + "," + std::to_string(c_.imag()) + "i)";
        }
        if (b_.is_zero()) return a_.str();
        std::string s = b_.str() + "*sqrt(" + std::to_string(rad_) + ")";
        if (a_.is_zero()) return s;
        return a_.str() + "+" + s;
    }

private:
    void reduce_radicand() {
        if (rad_ == 0) return;
        if (rad_ == 1) {  // sqrt(1) = 1
            a_ += b_;
            b_ = Rational(0);
            rad_ = 0;
            return;
        }
        // pull out square factors so equal values share a representation
        for (int k = 2; k * k <= rad_; ++k) {
            while (rad_ % (k * k) == 0) {
                rad_ /= k * k;
                b_ *= Rational(k);
            }
        }
        if (rad_ == 1) { a_ += b_; b_ = Rational(0); rad_ = 0; }
    }

    static int merge_rad(const Scalar& x, const Scalar& y) {
        if (x.rad_ == 0) return y.rad_;
        if (y.rad_ == 0 || x.rad_ == y.rad_) return x.rad_;
        throw std::domain_error("Scalar: mixing incompatible radicands " +
                                std::to_string(x.rad_) + " and " + std::to_string(y.rad_));
    }

    bool exact_;
    Rational a_, b_;
    int rad_ = 0;
    std::complex<double> c_{0.0, 0.0};
};

}  // namespace mds
