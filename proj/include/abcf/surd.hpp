#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"

namespace abcf {

namespace mp = boost::multiprecision;
using bigint = mp::number<mp::cpp_int_backend<>, mp::et_off>;

namespace detail {

inline int sgn(const bigint& x) { return x.sign(); }

// floor(a / b) for b > 0
inline bigint floor_div(const bigint& a, const bigint& b)
{
    bigint q = a / b;
    if (a.sign() < 0 && q * b != a)
        --q;
    return q;
}

inline double ratio_to_double(const bigint& n, const bigint& d)
{
    if (n.is_zero())
        return 0.0;
    auto shrink = [](const bigint& x, long& e) {
        bigint ax = mp::abs(x);
        long bits = static_cast<long>(mp::msb(ax)) + 1;
        e = bits > 62 ? bits - 62 : 0;
        double v = static_cast<double>((ax >> e).convert_to<std::uint64_t>());
        return x.sign() < 0 ? -v : v;
    };
    long en = 0, ed = 0;
    double vn = shrink(n, en), vd = shrink(d, ed);
    return std::ldexp(vn / vd, static_cast<int>(en - ed));
}

// d = k^2 m with m square-free; returns m and multiplies k into `k`.
// Once f^3 exceeds what is left, the rest is 1, p, pq or p^2.
inline long long squarefree(long long d, bigint& k)
{
    unsigned long long rest = static_cast<unsigned long long>(d), m = 1;
    for (unsigned long long f = 2; f * f * f <= rest; ++f) {
        while (rest % f == 0) {
            rest /= f;
            if (rest % f == 0) {
                rest /= f;
                k *= f;
            } else {
                m *= f;
            }
        }
    }
    auto s = static_cast<unsigned long long>(std::sqrt(static_cast<long double>(rest)));
    while (s * s > rest)
        --s;
    while ((s + 1) * (s + 1) <= rest)
        ++s;
    if (s > 1 && s * s == rest) {
        k *= s;
        rest = 1;
    }
    return static_cast<long long>(m * rest);
}

} // namespace detail

// (p + q sqrt(d)) / r in canonical form
class Surd {
public:
    Surd() : p_(0), q_(0), r_(1), d_(0), approx_(0.0) {}
    Surd(long long n) : p_(n), q_(0), r_(1), d_(0), approx_(static_cast<double>(n)) {}
    Surd(int n) : Surd(static_cast<long long>(n)) {}
    explicit Surd(const bigint& n) : p_(n), q_(0), r_(1), d_(0) { approx_ = detail::ratio_to_double(p_, r_); }

    static Surd make(bigint p, bigint q, bigint r, long long d)
    {
        if (r.is_zero())
            throw Error(Errc::invalid_denominator, "r = 0");
        if (d < 0)
            throw Error(Errc::domain_error, "negative radicand");
        if (!q.is_zero() && d != 0) {
            bigint k = 1;
            d = detail::squarefree(d, k);
            q *= k;
            if (d == 1) {
                p += q;
                q = 0;
                d = 0;
            }
        }
        return canonical(std::move(p), std::move(q), std::move(r), d);
    }

    static Surd rational(const bigint& p, const bigint& r) { return make(p, 0, r, 0); }

private:
    // d must already be square-free (or 0)
    static Surd canonical(bigint p, bigint q, bigint r, long long d)
    {
        if (r.is_zero())
            throw Error(Errc::invalid_denominator, "r = 0");
        Surd s;
        if (q.is_zero() || d == 0) {
            q = 0;
            d = 0;
        }
        if (r.sign() < 0) {
            p = -p;
            q = -q;
            r = -r;
        }
        bigint g = mp::gcd(mp::gcd(mp::abs(p), mp::abs(q)), r);
        if (g > 1) {
            p /= g;
            q /= g;
            r /= g;
        }
        s.p_ = std::move(p);
        s.q_ = std::move(q);
        s.r_ = std::move(r);
        s.d_ = d;
        s.refresh();
        return s;
    }

public:
    // sqrt of a non-negative rational n/m
    static Surd sqrt_of(const Surd& x)
    {
        if (!x.is_rational())
            throw Error(Errc::unsupported_field, "sqrt of an irrational surd");
        if (x.sign() < 0)
            throw Error(Errc::domain_error, "sqrt of a negative number");
        bigint rad = x.p_ * x.r_;
        if (rad > bigint(std::numeric_limits<long long>::max()))
            throw Error(Errc::unsupported_field, "radicand too large");
        return make(0, 1, x.r_, rad.convert_to<long long>());
    }

    const bigint& p() const { return p_; }
    const bigint& q() const { return q_; }
    const bigint& r() const { return r_; }
    long long d() const { return d_; }
    bool is_rational() const { return d_ == 0; }
    bool is_integer() const { return d_ == 0 && r_ == 1; }
    double to_double() const { return approx_; }

    int sign() const { return sign_of(p_, q_, d_); }

    Surd conj() const { return canonical(p_, -q_, r_, d_); }

    bigint floor() const
    {
        if (d_ == 0)
            return detail::floor_div(p_, r_);
        // q sqrt(d) is irrational, so its floor is determined by isqrt(q^2 d)
        bigint s = mp::sqrt(q_ * q_ * d_);
        bigint fs = q_.sign() > 0 ? s : bigint(-s - 1);
        return detail::floor_div(p_ + fs, r_);
    }

    friend Surd operator-(const Surd& x) { return canonical(-x.p_, -x.q_, x.r_, x.d_); }

    friend Surd operator+(const Surd& x, const Surd& y)
    {
        long long d = common_field(x, y);
        return canonical(x.p_ * y.r_ + y.p_ * x.r_, x.q_ * y.r_ + y.q_ * x.r_, x.r_ * y.r_, d);
    }

    friend Surd operator-(const Surd& x, const Surd& y) { return x + (-y); }

    friend Surd operator*(const Surd& x, const Surd& y)
    {
        long long d = common_field(x, y);
        return canonical(x.p_ * y.p_ + x.q_ * y.q_ * d, x.p_ * y.q_ + y.p_ * x.q_, x.r_ * y.r_, d);
    }

    Surd inverse() const
    {
        bigint n = p_ * p_ - q_ * q_ * d_;
        if (n.is_zero())
            throw Error(Errc::domain_error, "division by zero");
        return canonical(r_ * p_, -r_ * q_, n, d_);
    }

    friend Surd operator/(const Surd& x, const Surd& y) { return x * y.inverse(); }

    friend bool operator==(const Surd& x, const Surd& y)
    {
        return x.d_ == y.d_ && x.p_ == y.p_ && x.q_ == y.q_ && x.r_ == y.r_;
    }

    friend std::strong_ordering operator<=>(const Surd& x, const Surd& y)
    {
        int s;
        if (x.d_ == 0 && y.d_ == 0) {
            bigint l = x.p_ * y.r_, rr = y.p_ * x.r_;
            s = l < rr ? -1 : (l > rr ? 1 : 0);
        } else {
            long long d = common_field(x, y);
            s = sign_of(x.p_ * y.r_ - y.p_ * x.r_, x.q_ * y.r_ - y.q_ * x.r_, d);
        }
        return s < 0 ? std::strong_ordering::less
                     : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    // exact ordering that also accepts two different irrational fields
    static std::strong_ordering compare_any(const Surd& x, const Surd& y)
    {
        if (x.d_ == 0 || y.d_ == 0 || x.d_ == y.d_)
            return x <=> y;
        int s = cross_sign(x.p_ * y.r_ - y.p_ * x.r_, x.q_ * y.r_, x.d_, -y.q_ * x.r_, y.d_);
        return s < 0 ? std::strong_ordering::less
                     : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    std::size_t hash() const
    {
        std::size_t h = std::hash<long long>()(d_);
        auto mix = [&h](const bigint& v) {
            std::size_t x = mp::hash_value(v);
            h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        };
        mix(p_);
        mix(q_);
        mix(r_);
        return h;
    }

    // round-trippable text: p, p/r, (p+q*sqrt(d))/r
    std::string str() const
    {
        if (d_ == 0)
            return r_ == 1 ? p_.str() : p_.str() + "/" + r_.str();
        std::string rad;
        bigint aq = mp::abs(q_);
        rad = (aq == 1 ? std::string() : aq.str() + "*") + "sqrt(" + std::to_string(d_) + ")";
        std::string num;
        if (p_.is_zero())
            num = (q_.sign() < 0 ? "-" : "") + rad;
        else
            num = p_.str() + (q_.sign() < 0 ? "-" : "+") + rad;
        if (r_ == 1)
            return num;
        return "(" + num + ")/" + r_.str();
    }

private:
    static int sign_of(const bigint& p, const bigint& q, long long d)
    {
        int sp = p.sign(), sq = d == 0 ? 0 : q.sign();
        if (sq == 0)
            return sp;
        if (sp == 0 || sp == sq)
            return sq;
        bigint pp = p * p, qq = q * q * d;
        return pp > qq ? sp : sq;
    }

    // sign of al + be sqrt(d1) + ga sqrt(d2), d1 != d2 both square-free
    static int cross_sign(const bigint& al, const bigint& be, long long d1, const bigint& ga, long long d2)
    {
        int s1 = sign_of(al, be, d1), s2 = ga.sign();
        if (s2 == 0 || s1 == s2)
            return s1;
        if (s1 == 0)
            return s2;
        // compare (al + be sqrt d1)^2 with ga^2 d2
        int c = sign_of(al * al + be * be * d1 - ga * ga * d2, 2 * al * be, d1);
        return c > 0 ? s1 : s2;
    }

    static long long common_field(const Surd& x, const Surd& y)
    {
        if (x.d_ != 0 && y.d_ != 0 && x.d_ != y.d_)
            throw Error(Errc::unsupported_field,
                        "mixed fields sqrt(" + std::to_string(x.d_) + ") and sqrt(" + std::to_string(y.d_) + ")");
        return x.d_ != 0 ? x.d_ : y.d_;
    }

    void refresh()
    {
        if (d_ == 0) {
            approx_ = detail::ratio_to_double(p_, r_);
            return;
        }
        double rd = std::sqrt(static_cast<double>(d_));
        if (p_.sign() == 0 || p_.sign() == q_.sign()) {
            approx_ = detail::ratio_to_double(p_, r_) + detail::ratio_to_double(q_, r_) * rd;
        } else {
            // cancellation: use (p^2 - q^2 d) / (r (p - q sqrt d))
            bigint n = p_ * p_ - q_ * q_ * d_;
            double den = detail::ratio_to_double(p_, 1) - detail::ratio_to_double(q_, 1) * rd;
            approx_ = detail::ratio_to_double(n, r_) / den;
        }
    }

    bigint p_, q_, r_;
    long long d_;
    double approx_;
};

} // namespace abcf
