#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "moebius.hpp"

namespace abcf {

using Digit = long long;

// A point (a,b) of the parameter set: a <= 0 <= b, b - a >= 1, -ab <= 1.
struct ParamPair {
    ExtendedReal a, b;

    static ParamPair make(const ExtendedReal& a, const ExtendedReal& b)
    {
        if (a.is_inf() || b.is_inf())
            throw Error(Errc::invalid_params, "parameters must be finite");
        if (a.sign() > 0 || b.sign() < 0)
            throw Error(Errc::invalid_params, "need a <= 0 <= b");
        if (b - a < ExtendedReal(1))
            throw Error(Errc::invalid_params, "need b - a >= 1");
        if (-(a * b) > ExtendedReal(1))
            throw Error(Errc::invalid_params, "need -ab <= 1");
        return ParamPair{a, b};
    }

    static ParamPair parse(const std::string& a, const std::string& b)
    {
        return make(parse_real(a), parse_real(b));
    }

    bool exact() const { return a.is_exact() && b.is_exact(); }
    long long field() const { return a.field() != 0 ? a.field() : b.field(); }

    std::string str() const { return "(" + a.str() + ", " + b.str() + ")"; }

    friend bool operator==(const ParamPair& x, const ParamPair& y)
    {
        return x.a.identical(y.a) && x.b.identical(y.b);
    }
};

inline Digit to_digit(const bigint& n)
{
    if (n > bigint(std::numeric_limits<Digit>::max() / 2) || n < bigint(std::numeric_limits<Digit>::min() / 2))
        throw Error(Errc::digit_overflow, "digit " + n.str() + " out of range");
    return n.convert_to<Digit>();
}

namespace detail {

// floor(x - c); when x and c lie in different quadratic fields the difference is not
// representable, so the double estimate is corrected with exact comparisons
inline bigint floor_offset(const ExtendedReal& x, const ExtendedReal& c)
{
    if (!(x.is_exact() && c.is_exact()) || x.field() == 0 || c.field() == 0 || x.field() == c.field())
        return (x - c).floor();
    bigint n(static_cast<long long>(std::floor(x.to_double() - c.to_double())));
    while (x < c + ExtendedReal(Surd(n)))
        --n;
    while (!(x < c + ExtendedReal(Surd(bigint(n + 1)))))
        ++n;
    return n;
}

} // namespace detail

// generalized integral part: floor(x-a) below a, 0 on [a,b), ceil(x-b) (strict: floor(x-b)+1) from b on
inline Digit floor_ab(const ExtendedReal& x, const ParamPair& P)
{
    if (x.is_inf())
        throw Error(Errc::undefined_floor, "floor of infinity");
    if (x < P.a)
        return to_digit(detail::floor_offset(x, P.a));
    if (x < P.b)
        return 0;
    return to_digit(detail::floor_offset(x, P.b) + 1);
}

inline ExtendedReal f_ab(const ExtendedReal& x, const ParamPair& P)
{
    if (x.is_inf())
        return x;
    if (x < P.a)
        return x + ExtendedReal(1);
    if (x < P.b)
        return ExtendedReal(-1) / x;
    return x - ExtendedReal(1);
}

// left-continuous variant: the middle branch is (a,b]; used for the lower orbits Ta, Sb
inline ExtendedReal f_ab_left(const ExtendedReal& x, const ParamPair& P)
{
    if (x.is_inf())
        return x;
    if (x <= P.a)
        return x + ExtendedReal(1);
    if (x <= P.b)
        return ExtendedReal(-1) / x;
    return x - ExtendedReal(1);
}

inline ExtendedReal gauss_map(const ExtendedReal& x, const ParamPair& P)
{
    if (x.is_inf() || x < P.a || x >= P.b)
        throw Error(Errc::domain_error, "gauss_map needs x in [a,b), got " + x.str());
    if (x.is_zero())
        return ExtendedReal(0);
    ExtendedReal y = ExtendedReal(-1) / x;
    return y - ExtendedReal(floor_ab(y, P));
}

struct Expansion {
    enum class Tail { none, truncated, periodic };

    std::vector<Digit> head;
    Tail tail = Tail::none;
    std::vector<Digit> period;
    std::string reason;

    bool infinite() const { return tail == Tail::periodic; }

    std::size_t available() const
    {
        return infinite() ? std::numeric_limits<std::size_t>::max() : head.size();
    }

    Digit digit(std::size_t k) const
    {
        if (k < head.size())
            return head[k];
        if (!infinite())
            throw Error(Errc::digit_underflow, "digit " + std::to_string(k) + " not available");
        return period[(k - head.size()) % period.size()];
    }

    std::vector<Digit> digits(std::size_t n) const
    {
        std::vector<Digit> out;
        std::size_t m = std::min(n, available());
        for (std::size_t k = 0; k < m; ++k)
            out.push_back(digit(k));
        return out;
    }

    static const char* tail_name(Tail t)
    {
        switch (t) {
        case Tail::none: return "none";
        case Tail::truncated: return "truncated";
        case Tail::periodic: return "periodic";
        }
        return "?";
    }
};

inline constexpr double float_digit_cutoff = 1e-12;

inline Expansion expand(const ExtendedReal& x0, const ParamPair& P, std::size_t max_digits = 1000)
{
    if (x0.is_inf())
        throw Error(Errc::undefined_floor, "expansion of infinity");
    Expansion e;
    std::unordered_map<ExtendedReal, std::size_t, ExtendedRealHash, ExtendedRealSame> seen;
    ExtendedReal x = x0;
    const bool exact = x0.is_exact() && P.exact();
    for (std::size_t k = 0;; ++k) {
        if (exact) {
            auto it = seen.find(x);
            if (it != seen.end()) {
                e.period.assign(e.head.begin() + static_cast<std::ptrdiff_t>(it->second), e.head.end());
                e.head.resize(it->second);
                e.tail = Expansion::Tail::periodic;
                return e;
            }
            seen.emplace(x, k);
        }
        if (k >= max_digits) {
            e.tail = Expansion::Tail::truncated;
            e.reason = "max_digits";
            return e;
        }
        Digit n = floor_ab(x, P);
        if (k >= 1 && n == 0) {
            // only reachable through float rounding
            e.tail = Expansion::Tail::truncated;
            e.reason = "float precision";
            return e;
        }
        e.head.push_back(n);
        ExtendedReal rem = x - ExtendedReal(n);
        if (rem.is_zero()) {
            e.tail = Expansion::Tail::none;
            return e;
        }
        if (!rem.is_exact() && std::fabs(rem.to_double()) < float_digit_cutoff) {
            e.tail = Expansion::Tail::truncated;
            e.reason = "float precision";
            return e;
        }
        x = ExtendedReal(-1) / rem;
    }
}

struct ConvergentPair {
    bigint p, q;

    ExtendedReal value() const
    {
        if (q.is_zero())
            return ExtendedReal::inf();
        return Surd::rational(p, q);
    }
};

// r_j = T^{n_0} S ... T^{n_j} S (inf), via p_j = n_j p_{j-1} - p_{j-2}
inline std::vector<ConvergentPair> convergents(const std::vector<Digit>& digits, std::size_t k)
{
    if (digits.size() < k + 1)
        throw Error(Errc::digit_underflow, "need " + std::to_string(k + 1) + " digits");
    std::vector<ConvergentPair> out;
    bigint p1 = 1, q1 = 0, p2 = 0, q2 = -1;
    for (std::size_t j = 0; j <= k; ++j) {
        bigint p = digits[j] * p1 - p2;
        bigint q = digits[j] * q1 - q2;
        p2 = p1;
        q2 = q1;
        p1 = p;
        q1 = q;
        if (q.sign() < 0)
            out.push_back({-p, -q});
        else
            out.push_back({p, q});
    }
    return out;
}

inline std::vector<ConvergentPair> convergents(const Expansion& e, std::size_t k)
{
    if (e.available() < k + 1)
        throw Error(Errc::digit_underflow, "expansion has " + std::to_string(e.available()) + " digits");
    return convergents(e.digits(k + 1), k);
}

namespace detail {

inline void check_minus_validity(const std::vector<Digit>& seq, bool cyclic)
{
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (seq[i] == 0)
            throw Error(Errc::nonconvergent_sequence, "digit 0 in a minus continued fraction");
        bool has_next = i + 1 < seq.size() || cyclic;
        if (!has_next)
            continue;
        Digit next = seq[(i + 1) % seq.size()];
        if ((seq[i] == 1 && next > 0) || (seq[i] == -1 && next < 0))
            throw Error(Errc::nonconvergent_sequence,
                        "digit " + std::to_string(seq[i]) + " followed by " + std::to_string(next));
    }
}

// disc = k^2 d with d square-free and small enough for a Surd radicand
inline long long split_square(bigint disc, bigint& k)
{
    const bigint llmax(std::numeric_limits<long long>::max());
    if (disc <= llmax)
        return disc.convert_to<long long>();
    bigint m = 1;
    for (unsigned f = 2; f < 200000 && bigint(f) * f * f <= disc; ++f) {
        while (disc % f == 0) {
            disc /= f;
            if (disc % f == 0) {
                disc /= f;
                k *= f;
            } else {
                m *= f;
            }
        }
    }
    bigint s = mp::sqrt(disc);
    if (s * s == disc) {
        k *= s;
        disc = 1;
    }
    m *= disc;
    if (m > llmax)
        throw Error(Errc::unsupported_field, "square-free part of the discriminant is too large");
    return m.convert_to<long long>();
}

inline UnimodularMap minus_word(const std::vector<Digit>& ds)
{
    UnimodularMap m;
    for (Digit n : ds)
        m = m * UnimodularMap::T(n) * UnimodularMap::S();
    return m;
}

} // namespace detail

// Attracting fixed point of a hyperbolic or parabolic map (projective class).
inline ExtendedReal attracting_fixed_point(const UnimodularMap& m)
{
    bigint tr = m.trace();
    bigint disc = tr * tr - 4;
    if (disc.sign() < 0)
        throw Error(Errc::nonconvergent_sequence, "elliptic word has no attracting fixed point");
    if (m.r().is_zero())
        return ExtendedReal::inf();
    bigint k = 1;
    long long d = detail::split_square(disc, k);
    int sg = tr.sign() >= 0 ? 1 : -1;
    return Surd::make(m.p() - m.s(), sg * k, 2 * m.r(), d);
}

// Repelling fixed point (equals the attracting one for parabolic maps).
inline ExtendedReal repelling_fixed_point(const UnimodularMap& m) { return attracting_fixed_point(m.inverse()); }

// n_{-1} - 1/(n_{-2} - 1/(...)); `period` (possibly empty) repeats after `head`
inline ExtendedReal evaluate_minus_cf(const std::vector<Digit>& head, const std::vector<Digit>& period = {})
{
    std::vector<Digit> all = head;
    all.insert(all.end(), period.begin(), period.end());
    if (all.empty())
        throw Error(Errc::digit_underflow, "empty digit sequence");
    detail::check_minus_validity(all, false);
    if (period.empty()) {
        ExtendedReal v = ExtendedReal(all.back());
        for (std::size_t i = all.size() - 1; i-- > 0;)
            v = ExtendedReal(all[i]) - ExtendedReal(1) / v;
        return v;
    }
    detail::check_minus_validity(period, true);
    ExtendedReal v = attracting_fixed_point(detail::minus_word(period));
    return detail::minus_word(head)(v);
}

// Value of a forward expansion; these converge without the past-digit validity rule.
inline ExtendedReal expansion_value(const Expansion& e)
{
    if (e.tail == Expansion::Tail::truncated)
        throw Error(Errc::expansion_exhausted, "truncated expansion has no exact value");
    if (e.tail == Expansion::Tail::none)
        return convergents(e.head, e.head.size() - 1).back().value();
    ExtendedReal v = attracting_fixed_point(detail::minus_word(e.period));
    return detail::minus_word(e.head)(v);
}

} // namespace abcf
