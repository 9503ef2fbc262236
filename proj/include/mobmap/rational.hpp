#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mobmap {

// Exact rational arithmetic on 128-bit integers. Distribution oracles compare
// probabilities exactly, so overflow is an error, never a silent wrap.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) : num_(n), den_(d) {
        if (d == 0) throw std::invalid_argument("Rational: zero denominator");
        normalize();
    }

    static Rational from_i128(__int128 n, __int128 d) {
        if (d == 0) throw std::invalid_argument("Rational: zero denominator");
        Rational r;
        r.num_ = n;
        r.den_ = d;
        r.normalize();
        return r;
    }

    __int128 num() const { return num_; }
    __int128 den() const { return den_; }

    bool is_zero() const { return num_ == 0; }

    Rational operator+(const Rational& o) const {
        __int128 g = gcd128(den_, o.den_);
        __int128 l = mul(den_ / g, o.den_);
        __int128 a = mul(num_, o.den_ / g);
        __int128 b = mul(o.num_, den_ / g);
        return from_i128(add(a, b), l);
    }
    Rational operator-(const Rational& o) const { return *this + Rational::from_i128(-o.num_, o.den_); }
    Rational operator*(const Rational& o) const {
        __int128 g1 = gcd128(abs128(num_), o.den_);
        __int128 g2 = gcd128(abs128(o.num_), den_);
        return from_i128(mul(num_ / g1, o.num_ / g2), mul(den_ / g2, o.den_ / g1));
    }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw std::domain_error("Rational: division by zero");
        return *this * from_i128(o.den_, o.num_);
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const { return mul(num_, o.den_) < mul(o.num_, den_); }
    bool operator<=(const Rational& o) const { return mul(num_, o.den_) <= mul(o.num_, den_); }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return o <= *this; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const {
        std::string s = i128_str(num_);
        if (den_ != 1) s += "/" + i128_str(den_);
        return s;
    }
    std::string num_str() const { return i128_str(num_); }
    std::string den_str() const { return i128_str(den_); }

    static std::string i128_str(__int128 v) {
        if (v == 0) return "0";
        bool neg = v < 0;
        unsigned __int128 u = neg ? -(unsigned __int128)v : (unsigned __int128)v;
        std::string s;
        while (u) {
            s.push_back(char('0' + int(u % 10)));
            u /= 10;
        }
        if (neg) s.push_back('-');
        return std::string(s.rbegin(), s.rend());
    }

private:
    __int128 num_, den_;

    static __int128 abs128(__int128 v) { return v < 0 ? -v : v; }
    static __int128 gcd128(__int128 a, __int128 b) {
        a = abs128(a);
        b = abs128(b);
        while (b) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }
    static __int128 mul(__int128 a, __int128 b) {
        __int128 r;
        if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Rational: 128-bit overflow (mul)");
        return r;
    }
    static __int128 add(__int128 a, __int128 b) {
        __int128 r;
        if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("Rational: 128-bit overflow (add)");
        return r;
    }
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        __int128 g = gcd128(num_, den_);
        num_ /= g;
        den_ /= g;
    }
};

}  // namespace mobmap
