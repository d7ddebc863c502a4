#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "real.hpp"

namespace abcf {

// Element of PSL(2,Z): the matrix (p q; r s) up to sign.
class UnimodularMap {
public:
    UnimodularMap() : p_(1), q_(0), r_(0), s_(1) {}
    UnimodularMap(bigint p, bigint q, bigint r, bigint s)
        : p_(std::move(p)), q_(std::move(q)), r_(std::move(r)), s_(std::move(s))
    {
        if (p_ * s_ - q_ * r_ != 1)
            throw Error(Errc::domain_error, "determinant is not 1");
        normalize();
    }

    static UnimodularMap T(long long k = 1) { return {1, k, 0, 1}; }
    static UnimodularMap S() { return {0, -1, 1, 0}; }

    const bigint& p() const { return p_; }
    const bigint& q() const { return q_; }
    const bigint& r() const { return r_; }
    const bigint& s() const { return s_; }

    UnimodularMap inverse() const { return {s_, -q_, -r_, p_}; }

    friend UnimodularMap operator*(const UnimodularMap& m, const UnimodularMap& n)
    {
        return {m.p_ * n.p_ + m.q_ * n.r_, m.p_ * n.q_ + m.q_ * n.s_,
                m.r_ * n.p_ + m.s_ * n.r_, m.r_ * n.q_ + m.s_ * n.s_};
    }

    friend bool operator==(const UnimodularMap& m, const UnimodularMap& n)
    {
        return m.p_ == n.p_ && m.q_ == n.q_ && m.r_ == n.r_ && m.s_ == n.s_;
    }

    bigint trace() const { return p_ + s_; }

    ExtendedReal operator()(const ExtendedReal& x) const
    {
        if (x.is_inf())
            return r_.is_zero() ? ExtendedReal::inf() : ExtendedReal(Surd::rational(p_, r_));
        if (x.is_exact()) {
            Surd den = Surd(r_) * x.surd() + Surd(s_);
            Surd num = Surd(p_) * x.surd() + Surd(q_);
            if (den.sign() == 0)
                return ExtendedReal::inf();
            return num / den;
        }
        double v = x.to_double();
        double den = r_.convert_to<double>() * v + s_.convert_to<double>();
        if (den == 0.0)
            return ExtendedReal::inf();
        return (p_.convert_to<double>() * v + q_.convert_to<double>()) / den;
    }

    std::string str() const
    {
        return "(" + p_.str() + " " + q_.str() + "; " + r_.str() + " " + s_.str() + ")";
    }

private:
    void normalize()
    {
        if (r_.sign() < 0 || (r_.is_zero() && s_.sign() < 0)) {
            p_ = -p_;
            q_ = -q_;
            r_ = -r_;
            s_ = -s_;
        }
    }

    bigint p_, q_, r_, s_;
};

inline ExtendedReal moebius_apply(const UnimodularMap& m, const ExtendedReal& x) { return m(x); }

// A generator letter: T^k (k may be negative) or S.
struct Letter {
    enum Kind { T, S } kind;
    long long k = 0;

    static Letter t(long long k) { return {T, k}; }
    static Letter s() { return {S, 0}; }

    UnimodularMap matrix() const { return kind == S ? UnimodularMap::S() : UnimodularMap::T(k); }

    friend bool operator==(const Letter& x, const Letter& y)
    {
        return x.kind == y.kind && (x.kind == S || x.k == y.k);
    }

    std::string str() const
    {
        if (kind == S)
            return "S";
        return k == 1 ? "T" : "T^" + std::to_string(k);
    }
};

using Word = std::vector<Letter>;

// product w[0] w[1] ... w[n-1]; the rightmost letter acts first
inline UnimodularMap word_to_matrix(const Word& w)
{
    UnimodularMap m;
    for (const auto& l : w)
        m = m * l.matrix();
    return m;
}

inline std::string word_str(const Word& w)
{
    std::string s;
    for (const auto& l : w)
        s += (s.empty() ? "" : " ") + l.str();
    return s;
}

} // namespace abcf
