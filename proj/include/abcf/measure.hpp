#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/digamma.hpp>

#include "attractor.hpp"

namespace abcf {

// nu-mass of [x1,x2]x[y1,y2] under dx dy / (1+xy)^2
inline double rect_mass(double x1, double x2, double y1, double y2)
{
    if (!std::isfinite(x1) || !std::isfinite(x2) || !std::isfinite(y1) || !std::isfinite(y2))
        throw Error(Errc::singular_rectangle, "unbounded rectangle");
    // 1 + xy is bilinear, so its extremes are at the corners
    for (double x : {x1, x2})
        for (double y : {y1, y2})
            if (1 + x * y <= 0)
                throw Error(Errc::singular_rectangle, "1 + xy vanishes on the rectangle");
    return std::log1p(x2 * y2) + std::log1p(x1 * y1) - std::log1p(x1 * y2) - std::log1p(x2 * y1);
}

inline double rect_mass(const Rect& r)
{
    return rect_mass(r.u.lo.to_double(), r.u.hi.to_double(), r.w.lo.to_double(), r.w.hi.to_double());
}

struct NormalizerK {
    double K = 0;                   // sum over the hat-Lambda rectangles
    std::optional<double> closed;   // log[(m-a)(1+b)^{2-m}] inside the family
    std::optional<long long> m;
};

namespace detail {

// family index of P or of its mirror (K and the density are mirror-symmetric)
inline std::optional<std::pair<long long, bool>> family_case(const ParamPair& P)
{
    if (auto m = family_index(P))
        return std::make_pair(*m, false);
    if (auto m = family_index(mirror_params(P)))
        return std::make_pair(*m, true);
    return std::nullopt;
}

} // namespace detail

inline constexpr double closed_form_tolerance = 1e-10;

inline NormalizerK normalizer_K(const ParamPair& P, const StepDomain& hat)
{
    if (P.a.is_zero() || P.b.is_zero())
        throw Error(Errc::infinite_measure, "a = 0 or b = 0: the invariant measure is infinite");
    NormalizerK out;
    for (const auto& r : hat.rects)
        out.K += rect_mass(r);
    if (auto fc = detail::family_case(P)) {
        ParamPair Q = fc->second ? mirror_params(P) : P;
        double a = Q.a.to_double(), b = Q.b.to_double();
        long long m = fc->first;
        out.m = m;
        out.closed = std::log(m - a) + static_cast<double>(2 - m) * std::log1p(b);
        if (hat.exact && std::fabs(*out.closed - out.K) > closed_form_tolerance)
            throw Error(Errc::inconsistent_domain, "closed-form K " + std::to_string(*out.closed) +
                                                       " disagrees with the rectangle sum " + std::to_string(out.K));
    }
    return out;
}

// exact domain when one is known, the simulation oracle otherwise
inline StepDomain hat_lambda(const ParamPair& P, const ApproxOptions& opt = {})
{
    StepDomain D;
    try {
        D = build_domain(P);
    } catch (const Error& e) {
        if (e.code() != Errc::unsupported_params)
            throw;
        D = approx_domain(P, opt);
    }
    return hat_lambda_of(D, P);
}

inline NormalizerK normalizer_K(const ParamPair& P)
{
    if (P.a.is_zero() || P.b.is_zero())
        throw Error(Errc::infinite_measure, "a = 0 or b = 0: the invariant measure is infinite");
    return normalizer_K(P, hat_lambda(P));
}

inline double entropy(double K) { return std::numbers::pi * std::numbers::pi / (3 * K); }

inline double entropy(const ParamPair& P) { return entropy(normalizer_K(P).K); }

// ---- density ----

struct DensityPiece {
    ExtendedReal l, r; // support [l, r)
    bool plus = true;  // 1/(x + c) when plus, 1/(c - x) otherwise
    ExtendedReal c;

    bool covers(double x) const { return l.to_double() <= x && x < r.to_double(); }
    double at(double x) const { return plus ? 1 / (x + c.to_double()) : 1 / (c.to_double() - x); }
    double integral() const
    {
        double L = l.to_double(), R = r.to_double(), C = c.to_double();
        return plus ? std::log((R + C) / (L + C)) : std::log((C - L) / (C - R));
    }
    std::string str() const
    {
        return std::string(plus ? "1/(x+" : "1/(") + c.str() + (plus ? ")" : "-x)") + " on [" + l.str() + ", " +
               r.str() + ")";
    }
};

struct PiecewiseDensity {
    ParamPair P;
    std::vector<DensityPiece> pieces;
    double K = 0;

    double h(double x) const
    {
        double s = 0;
        for (const auto& p : pieces)
            if (p.covers(x))
                s += p.at(x);
        return s;
    }
    double mu(double x) const { return h(x) / K; }
    double total() const
    {
        double s = 0;
        for (const auto& p : pieces)
            s += p.integral();
        return s / K;
    }
};

// closed-form density for the one-parameter family (and its mirror)
inline PiecewiseDensity density(const ParamPair& P)
{
    auto fc = detail::family_case(P);
    if (!fc)
        throw Error(Errc::unsupported_case, P.str() + " is outside the closed-form family; use marginal_density");
    ParamPair Q = fc->second ? mirror_params(P) : P;
    long long m = fc->first;
    const ExtendedReal one(1), M(m);
    std::vector<DensityPiece> ps;
    ExtendedReal c = Q.b - one;
    for (long long p = 1; p < m; ++p) {
        ExtendedReal next = ExtendedReal(-1) / c - ExtendedReal(2);
        ps.push_back({c, next, true, ExtendedReal::rational(p + 1, p)});
        c = next;
    }
    ExtendedReal top = ExtendedReal(-1) / Q.a - one;
    ps.push_back({c, top, true, ExtendedReal::rational(m + 1, m)});
    ps.push_back({top, Q.b, true, one});
    ExtendedReal mid = ExtendedReal(-1) / Q.b + M;
    ps.push_back({Q.a, mid, false, M});
    ps.push_back({mid, Q.a + one, false, M + one});
    std::erase_if(ps, [](const DensityPiece& p) { return !(p.l < p.r); });

    PiecewiseDensity D;
    D.P = P;
    D.K = std::log(m - Q.a.to_double()) + static_cast<double>(2 - m) * std::log1p(Q.b.to_double());
    if (fc->second) {
        // h(x) = h_mirror(-x); supports become (-r, -l], kept half-open on the left
        for (auto& p : ps)
            D.pieces.push_back({-p.r, -p.l, !p.plus, p.c});
    } else {
        D.pieces = std::move(ps);
    }
    return D;
}

// y-marginal of nu over hat-Lambda at x (any parameters, exact or oracle domain)
inline double marginal_density(const StepDomain& hat, double x)
{
    double s = 0;
    for (const auto& r : hat.rects) {
        double l = r.u.lo.to_double(), h = r.u.hi.to_double();
        if (!(l <= x && x < h))
            continue;
        double y1 = r.w.lo.to_double(), y2 = r.w.hi.to_double();
        s += (y2 - y1) / ((1 + x * y1) * (1 + x * y2));
    }
    return s;
}

// ---- transfer operator ----

namespace detail {

// sum over k >= 0 of g(k + s) where g(t) = 1/(t - p) - 1/(t - q): digamma(s - q) - digamma(s - p)
inline double digamma_tail(double s, double p, double q)
{
    return boost::math::digamma(s - q) - boost::math::digamma(s - p);
}

} // namespace detail

// |sum over inverse branches y = -1/(x+n) of h(y) y^2 - h(x)|
inline double transfer_check(const PiecewiseDensity& D, double x)
{
    const ParamPair& P = D.P;
    double a = P.a.to_double(), b = P.b.to_double();
    if (!(a <= x && x < b))
        throw Error(Errc::domain_error, "x outside [a, b)");
    for (const auto& p : D.pieces)
        for (double e : {p.l.to_double(), p.r.to_double()})
            if (std::fabs(x - e) < 1e-9)
                throw Error(Errc::ill_conditioned_point, "x on a piece boundary");
    // pieces met by y -> 0- and y -> 0+, and how far from 0 they stay valid
    std::vector<const DensityPiece*> below, above;
    double reach = 1;
    for (const auto& p : D.pieces) {
        double l = p.l.to_double(), r = p.r.to_double();
        if (l < 0 && r >= 0) {
            below.push_back(&p);
            reach = std::min(reach, -l);
        }
        if (l <= 0 && r > 0) {
            above.push_back(&p);
            reach = std::min(reach, r);
        }
    }
    // branch n >= 1 needs x in [b-1, b); n <= -1 needs x in [a, a+1)
    bool pos_branches = x >= b - 1, neg_branches = x < a + 1;
    long long N = static_cast<long long>(std::ceil(1 / reach + std::fabs(x))) + 2;
    double sum = 0;
    for (long long n = 1; n <= N; ++n)
        for (long long sn : {n, -n}) {
            if ((sn > 0 && !pos_branches) || (sn < 0 && !neg_branches))
                continue;
            double y = -1 / (x + static_cast<double>(sn));
            if (a <= y && y < b)
                sum += D.h(y) * y * y;
        }
    // closed-form tails over |n| > N
    auto tail = [&](const DensityPiece* p, bool positive_n) {
        double c = p->c.to_double();
        if (positive_n) {
            // t = x + n, y = -1/t; plus: 1/(t - 1/c) - 1/t, minus: 1/t - 1/(t + 1/c)
            double s = x + static_cast<double>(N + 1);
            return p->plus ? detail::digamma_tail(s, 1 / c, 0) : detail::digamma_tail(s, 0, -1 / c);
        }
        // s = -(x + n), y = 1/s; plus: 1/s - 1/(s + 1/c), minus: 1/(s - 1/c) - 1/s
        double s = static_cast<double>(N + 1) - x;
        return p->plus ? detail::digamma_tail(s, 0, -1 / c) : detail::digamma_tail(s, 1 / c, 0);
    };
    if (pos_branches)
        for (auto* p : below)
            sum += tail(p, true);
    if (neg_branches)
        for (auto* p : above)
            sum += tail(p, false);
    return std::fabs(sum - D.h(x));
}

// ---- Rokhlin ----

// -2 * integral of log|x| dmu over [a, b)
inline double rokhlin_entropy(const PiecewiseDensity& D)
{
    boost::math::quadrature::tanh_sinh<double> q;
    double s = 0;
    for (const auto& p : D.pieces) {
        double l = p.l.to_double(), r = p.r.to_double();
        auto f = [&](double x) { return x == 0 ? 0.0 : std::log(std::fabs(x)) * p.at(x); };
        // split at the logarithmic singularity
        if (l < 0 && 0 < r)
            s += q.integrate(f, l, 0.0) + q.integrate(f, 0.0, r);
        else
            s += q.integrate(f, l, r);
    }
    return -2 * s / D.K;
}

// ---- q_n growth ----

// log|q_N| / N along the Gauss-map orbit of x (double-precision digits, exact q_k)
inline double qn_growth(const ParamPair& P, double x, std::size_t N)
{
    double a = P.a.to_double(), b = P.b.to_double();
    if (!(a <= x && x < b))
        throw Error(Errc::domain_error, "x outside [a, b)");
    bigint q0 = 0, q1 = 1; // q_{-1}, q_0
    double y = x;
    for (std::size_t k = 1; k <= N; ++k) {
        if (y == 0)
            throw Error(Errc::rational_input, "orbit reached 0 after " + std::to_string(k - 1) + " steps");
        double t = -1 / y;
        Digit n = floor_ab(ExtendedReal(t), P);
        y = t - static_cast<double>(n);
        bigint q2 = bigint(n) * q1 - q0;
        q0 = std::move(q1);
        q1 = std::move(q2);
    }
    if (q1.is_zero())
        throw Error(Errc::rational_input, "q_N = 0");
    bigint aq = boost::multiprecision::abs(q1);
    auto bits = static_cast<long>(boost::multiprecision::msb(aq));
    long shift = bits > 60 ? bits - 60 : 0;
    double lead = static_cast<double>((aq >> shift).convert_to<unsigned long long>());
    return (std::log(lead) + static_cast<double>(shift) * std::numbers::ln2) / static_cast<double>(N);
}

inline double qn_limit(double K) { return std::numbers::pi * std::numbers::pi / (6 * K); }

// ---- branch partition of the Gauss map ----

struct Branch {
    Digit i = 0;
    Interval X;   // open interval in [a, b]
    Interval image;
    bool complete = false;
};

struct BranchPartition {
    ParamPair P;
    std::vector<Branch> branches; // |i| <= range; all further branches are complete
    Digit range = 0;
    double expansion = 0;         // min(1/a^2, 1/b^2)
    std::size_t distinct_images = 0;
    double max_distortion = 0;    // sup |f''/(f')^2| = sup 2|x|
};

namespace detail {

inline std::optional<Branch> make_branch(Digit i, const ParamPair& P)
{
    // -1/x in the strip of digit i, with x in [a, b]
    ExtendedReal N(i);
    Interval strip = i > 0 ? Interval{P.b + N - ExtendedReal(1), P.b + N} : Interval{P.a + N, P.a + N + ExtendedReal(1)};
    Interval X{ExtendedReal(-1) / strip.lo, ExtendedReal(-1) / strip.hi};
    if (X.hi < X.lo)
        std::swap(X.lo, X.hi);
    auto I = intersect(X, Interval{P.a, P.b});
    if (!I || !I->proper())
        return std::nullopt;
    Interval img{ExtendedReal(-1) / I->lo - N, ExtendedReal(-1) / I->hi - N};
    if (img.hi < img.lo)
        std::swap(img.lo, img.hi);
    Interval full = i > 0 ? Interval{P.b - ExtendedReal(1), P.b} : Interval{P.a, P.a + ExtendedReal(1)};
    bool complete = img.lo == full.lo && img.hi == full.hi;
    return Branch{i, *I, img, complete};
}

} // namespace detail

inline BranchPartition branch_partition(const ParamPair& P)
{
    if (!(P.a > ExtendedReal(-1)) || !(P.b < ExtendedReal(1)) || P.a.is_zero() || P.b.is_zero())
        throw Error(Errc::use_iterate_check, "direct branch conditions need -1 < a < 0 < b < 1");
    BranchPartition bp;
    bp.P = P;
    double a = P.a.to_double(), b = P.b.to_double();
    bp.expansion = std::min(1 / (a * a), 1 / (b * b));
    // beyond |i| > 1/min(|a|,b) + 2 every branch is complete
    bp.range = static_cast<Digit>(std::ceil(std::max(-1 / a, 1 / b))) + 2;
    std::vector<Interval> images;
    for (Digit i = -bp.range; i <= bp.range; ++i) {
        if (i == 0)
            continue;
        if (auto br = detail::make_branch(i, P)) {
            bp.branches.push_back(*br);
            bool seen = false;
            for (const auto& im : images)
                seen = seen || (im.lo == br->image.lo && im.hi == br->image.hi);
            if (!seen)
                images.push_back(br->image);
        }
    }
    bp.distinct_images = images.size();
    bp.max_distortion = 2 * std::max(-a, b);
    return bp;
}

// Smallest expansion over sampled points of the best iterate (f^n)', n <= K+1, for the
// regimes b >= 1 or a <= -1 where a single step need not expand.
inline double iterate_expansion(const ParamPair& P, std::size_t samples = 2000, unsigned seed = 1)
{
    double a = P.a.to_double(), b = P.b.to_double();
    // b (a+1)^K < 1, or the mirror condition when a <= -1
    double base = b >= 1 ? (a + 1) : (1 - b), lead = b >= 1 ? b : -a;
    std::size_t K = 0;
    while (lead * std::pow(base, static_cast<double>(K)) >= 1 && K < 1000)
        ++K;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(a, b);
    double gamma = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < samples; ++s) {
        double x = U(rng), d = 1, best = 0;
        for (std::size_t n = 1; n <= K + 1 && x != 0; ++n) {
            d /= x * x;
            best = std::max(best, d);
            double t = -1 / x;
            x = t - static_cast<double>(floor_ab(ExtendedReal(t), P));
        }
        gamma = std::min(gamma, best);
    }
    return gamma;
}

// ---- 2D invariance ----

// image of a rectangle of hat-Lambda inside one branch: (x, y) -> (-1/x - n, -1/(y - n))
inline std::array<double, 4> hat_F_rect(double x1, double x2, double y1, double y2, Digit n)
{
    double X1 = -1 / x1 - n, X2 = -1 / x2 - n, Y1 = -1 / (y1 - n), Y2 = -1 / (y2 - n);
    return {std::min(X1, X2), std::max(X1, X2), std::min(Y1, Y2), std::max(Y1, Y2)};
}

} // namespace abcf
