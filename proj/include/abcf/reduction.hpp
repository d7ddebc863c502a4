#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "attractor.hpp"

namespace abcf {

struct Geodesic {
    ExtendedReal u, w; // repelling, attracting

    std::string str() const { return "(" + u.str() + ", " + w.str() + ")"; }
    friend bool operator==(const Geodesic& x, const Geodesic& y)
    {
        return x.u.identical(y.u) && x.w.identical(y.w);
    }
};

// D_{a,b} together with Λ_{a,b}; exact when an exact construction exists.
struct Geometry {
    ParamPair P;
    StepDomain D, Lambda;
    bool exact = true;
    ExtendedReal lambda_umin, lambda_umax;

    static Geometry from_domain(const ParamPair& P, StepDomain D)
    {
        Geometry G{P, std::move(D), {}, true, 0, 0};
        G.exact = G.D.exact;
        G.Lambda = lambda_of(G.D, P);
        if (G.Lambda.empty())
            throw Error(Errc::inconsistent_domain, "empty Lambda for " + P.str());
        bool first = true;
        for (const auto& r : G.Lambda.rects) {
            if (r.u.lo.is_inf() || r.u.hi.is_inf())
                throw Error(Errc::inconsistent_domain, "unbounded Lambda");
            if (first || r.u.lo < G.lambda_umin)
                G.lambda_umin = r.u.lo;
            if (first || r.u.hi > G.lambda_umax)
                G.lambda_umax = r.u.hi;
            first = false;
        }
        return G;
    }

    // exact domain when available, otherwise the simulation oracle (if allowed)
    static Geometry build(const ParamPair& P, bool allow_oracle = true, const ApproxOptions& opt = {})
    {
        try {
            return from_domain(P, build_domain(P));
        } catch (const Error& e) {
            if (!allow_oracle || e.code() != Errc::unsupported_params)
                throw;
        }
        return from_domain(P, approx_domain(P, opt));
    }

    bool reduced(const Geodesic& g) const
    {
        if (g.u.is_inf() || g.w.is_inf())
            return false;
        return contains(Lambda, g.u, g.w);
    }
};

// R(u,w) = (ST^{-n}u, ST^{-n}w) with n the first digit of w.
inline std::pair<Geodesic, Digit> reduction_step(const Geodesic& g, const ParamPair& P)
{
    if (g.w.is_inf())
        throw Error(Errc::expansion_exhausted, "w = inf: the expansion has terminated");
    Digit n = floor_ab(g.w, P);
    ExtendedReal N(n);
    Geodesic h{ExtendedReal(-1) / (g.u - N), ExtendedReal(-1) / (g.w - N)};
    return {h, n};
}

inline constexpr std::size_t default_reduction_budget = 1000;

// first iterate R^l(g) in Λ
inline std::pair<Geodesic, std::size_t> reduce(const Geodesic& g, const Geometry& G,
                                               std::size_t budget = default_reduction_budget)
{
    if (!g.u.is_inf() && !g.w.is_inf() && g.u == g.w)
        throw Error(Errc::degenerate_geodesic, "u = w");
    Geodesic h = g;
    for (std::size_t l = 0; l <= budget; ++l) {
        if (G.reduced(h))
            return {h, l};
        if (l == budget)
            break;
        h = reduction_step(h, G.P).first;
    }
    throw Error(Errc::reduction_failed, "not reduced after " + std::to_string(budget) + " steps: " + g.str());
}

// n_{-1} and g_{-1} = (T^n S u, T^n S w) with g_{-1} in Λ.
inline std::pair<Digit, Geodesic> past_digit(const Geodesic& g, const Geometry& G)
{
    if (!G.reduced(g))
        throw Error(Errc::not_reduced, "past_digit needs a reduced geodesic: " + g.str());
    if (g.u.is_zero())
        throw Error(Errc::inversion_failed, "u = 0");
    ExtendedReal su = ExtendedReal(-1) / g.u, sw = ExtendedReal(-1) / g.w;
    // n - 1/u must lie in the u-extent of Λ, which leaves a handful of candidates.
    // Λ's corners may live in another field, so the range is widened doubles; membership is exact.
    double s = su.to_double();
    bigint n0 = bigint(static_cast<long long>(std::floor(G.lambda_umin.to_double() - s))) - 1;
    bigint n1 = bigint(static_cast<long long>(std::floor(G.lambda_umax.to_double() - s))) + 2;
    std::vector<std::pair<Digit, Geodesic>> found;
    for (bigint n = n0; n <= n1; ++n) {
        if (n.is_zero())
            continue;
        ExtendedReal N{Surd(n)};
        Geodesic c{N + su, N + sw};
        if (G.reduced(c))
            found.push_back({to_digit(n), c});
    }
    if (found.empty())
        throw Error(Errc::inversion_failed, "no past digit for " + g.str());
    if (found.size() > 1) {
        // boundary points: keep the candidate whose forward step returns to g
        std::vector<std::pair<Digit, Geodesic>> exact_back;
        for (auto& f : found) {
            auto [back, d] = reduction_step(f.second, G.P);
            if (d == f.first && back == g)
                exact_back.push_back(f);
        }
        if (exact_back.size() != 1)
            throw Error(Errc::ambiguous_boundary, "several past digits for " + g.str());
        return exact_back.front();
    }
    return found.front();
}

struct CodingWindow {
    std::size_t K = 0;
    std::vector<Digit> future; // n_0 .. n_K
    std::vector<Digit> past;   // n_{-1} .. n_{-K}
    Geodesic anchor;           // the geodesic at index 0
    std::size_t reduction_steps = 0;

    Digit at(long long k) const
    {
        if (k >= 0 && static_cast<std::size_t>(k) < future.size())
            return future[static_cast<std::size_t>(k)];
        if (k < 0 && static_cast<std::size_t>(-k) <= past.size())
            return past[static_cast<std::size_t>(-k - 1)];
        throw Error(Errc::digit_underflow, "index " + std::to_string(k) + " outside the window");
    }
};

inline CodingWindow coding_window(const Geodesic& g, const Geometry& G, std::size_t K,
                                  std::size_t budget = default_reduction_budget)
{
    CodingWindow cw;
    cw.K = K;
    auto [h, l] = reduce(g, G, budget);
    cw.anchor = h;
    cw.reduction_steps = l;
    Geodesic f = h;
    for (std::size_t k = 0; k <= K; ++k) {
        auto [next, n] = reduction_step(f, G.P);
        cw.future.push_back(n);
        f = next;
    }
    Geodesic p = h;
    for (std::size_t k = 0; k < K; ++k) {
        auto [n, prev] = past_digit(p, G);
        cw.past.push_back(n);
        p = prev;
    }
    return cw;
}

// ---- cross-section ----

enum class Arc { C, C_minus, C_plus };

inline const char* arc_name(Arc a)
{
    switch (a) {
    case Arc::C: return "C";
    case Arc::C_minus: return "C-";
    case Arc::C_plus: return "C+";
    }
    return "?";
}

struct CrossSectionPoint {
    ExtendedReal x; // exact when u, w are
    double y = 0;
    Arc arc = Arc::C;
};

namespace detail {

// endpoints in two different quadratic fields cannot be combined exactly
inline bool mixed_fields(const ExtendedReal& u, const ExtendedReal& w)
{
    return u.is_exact() && w.is_exact() && u.field() && w.field() && u.field() != w.field();
}

inline ExtendedReal as_float(const ExtendedReal& x) { return x.is_inf() ? x : ExtendedReal(x.to_double()); }

// intersection of the geodesic (u,w) with the unit circle centred at `shift`
inline std::optional<ExtendedReal> unit_circle_hit(const ExtendedReal& u1, const ExtendedReal& w1, long long shift)
{
    bool mixed = mixed_fields(u1, w1);
    const ExtendedReal u0 = mixed ? as_float(u1) : u1, w0 = mixed ? as_float(w1) : w1;
    ExtendedReal s(shift);
    ExtendedReal u = u0.is_inf() ? u0 : u0 - s, w = w0.is_inf() ? w0 : w0 - s;
    ExtendedReal x;
    if (u.is_inf())
        x = w;
    else if (w.is_inf())
        x = u;
    else {
        ExtendedReal sum = u + w;
        if (sum.is_zero())
            return std::nullopt; // concentric: no transversal hit
        x = (ExtendedReal(1) + u * w) / sum;
    }
    // the hit must be on the geodesic: between u and w, with |x| <= 1
    if (x > ExtendedReal(1) || x < ExtendedReal(-1))
        return std::nullopt;
    if (!u.is_inf() && !w.is_inf()) {
        ExtendedReal l = u < w ? u : w, h = u < w ? w : u;
        if (x < l || x > h)
            return std::nullopt;
    }
    return x + s;
}

} // namespace detail

// All arc hits in the order met when travelling from u to w.
inline std::vector<CrossSectionPoint> cross_section_hits(const Geodesic& g)
{
    std::vector<CrossSectionPoint> hits;
    auto y_of = [](const ExtendedReal& x, long long s) {
        double d = x.to_double() - static_cast<double>(s);
        return std::sqrt(std::max(0.0, 1.0 - d * d));
    };
    if (auto x = detail::unit_circle_hit(g.u, g.w, 0))
        hits.push_back({*x, y_of(*x, 0), Arc::C});
    if (auto x = detail::unit_circle_hit(g.u, g.w, -1); x && *x >= ExtendedReal::rational(-1, 2) && x->sign() <= 0)
        hits.push_back({*x, y_of(*x, -1), Arc::C_minus});
    if (auto x = detail::unit_circle_hit(g.u, g.w, 1); x && x->sign() >= 0 && *x <= ExtendedReal::rational(1, 2))
        hits.push_back({*x, y_of(*x, 1), Arc::C_plus});
    // x moves monotonically from u to w along the half-circle
    bool increasing = g.u.is_inf() ? false : (g.w.is_inf() ? true : g.u < g.w);
    std::sort(hits.begin(), hits.end(), [&](const CrossSectionPoint& p, const CrossSectionPoint& q) {
        return increasing ? p.x < q.x : q.x < p.x;
    });
    return hits;
}

inline CrossSectionPoint cross_section_point(const Geodesic& g)
{
    auto hits = cross_section_hits(g);
    for (const auto& h : hits)
        if (h.arc == Arc::C)
            return h;
    bool minus = false, plus = false;
    for (const auto& h : hits) {
        minus = minus || h.arc == Arc::C_minus;
        plus = plus || h.arc == Arc::C_plus;
    }
    if (!minus || !plus)
        throw Error(Errc::not_reduced, "geodesic " + g.str() + " misses C and one of C-, C+");
    return hits.front();
}

// ---- return time ----

inline double return_time_h(const Geodesic& g)
{
    ExtendedReal w2m1 = g.w * g.w - ExtendedReal(1), one_m_u2 = ExtendedReal(1) - g.u * g.u;
    if (w2m1.sign() <= 0 || one_m_u2.sign() <= 0)
        throw Error(Errc::formula_domain_error, "need |w| > 1 and |u| < 1, got " + g.str());
    double gap = detail::mixed_fields(g.u, g.w) ? g.w.to_double() - g.u.to_double() : (g.w - g.u).to_double();
    double num = std::fabs(gap) * std::sqrt(w2m1.to_double());
    double den = (g.w * g.w).to_double() * std::sqrt(one_m_u2.to_double());
    return num / den;
}

inline double return_time(const Geodesic& g, const Geodesic& next, const ParamPair& P)
{
    if (P.a < ExtendedReal(-1) || P.b > ExtendedReal(1))
        throw Error(Errc::formula_domain_error, "return time needs -1 <= a and b <= 1");
    if (g.w.is_inf() || g.u.is_inf() || next.w.is_inf() || next.u.is_inf())
        throw Error(Errc::formula_domain_error, "infinite endpoint");
    return 2 * std::log(std::fabs(g.w.to_double())) + std::log(return_time_h(g)) - std::log(return_time_h(next));
}

// ---- periodic geodesics ----

// the axis of a hyperbolic word: repelling -> attracting fixed point
inline Geodesic word_axis(const UnimodularMap& m)
{
    bigint tr = m.trace();
    if (tr * tr <= 4)
        throw Error(Errc::degenerate_geodesic, "word is not hyperbolic");
    return {repelling_fixed_point(m), attracting_fixed_point(m)};
}

// The R-cycle through a reduced periodic geodesic (exact inputs only).
inline std::vector<Geodesic> reduced_cycle(const Geodesic& g, const Geometry& G, std::size_t budget = 10000)
{
    auto [h, l] = reduce(g, G, budget);
    (void)l;
    std::vector<Geodesic> cyc{h};
    Geodesic f = h;
    for (std::size_t i = 0; i < budget; ++i) {
        f = reduction_step(f, G.P).first;
        if (f == h)
            return cyc;
        cyc.push_back(f);
    }
    throw Error(Errc::finiteness_undetected, "no return to " + h.str());
}

// ---- tails ----

// offsets (i, j) <= max_offset with e1[i..i+len) == e2[j..j+len); nothing if none
inline std::optional<std::pair<std::size_t, std::size_t>> common_tail(const Expansion& e1, const Expansion& e2,
                                                                       std::size_t len, std::size_t max_offset)
{
    if (e1.available() < len || e2.available() < len)
        return std::nullopt;
    std::size_t m1 = std::min(max_offset, e1.available() - len), m2 = std::min(max_offset, e2.available() - len);
    auto d1 = e1.digits(m1 + len), d2 = e2.digits(m2 + len);
    for (std::size_t s = 0; s <= m1 + m2; ++s)
        for (std::size_t i = 0; i <= std::min(s, m1); ++i) {
            std::size_t j = s - i;
            if (j > m2)
                continue;
            if (std::equal(d1.begin() + static_cast<std::ptrdiff_t>(i),
                           d1.begin() + static_cast<std::ptrdiff_t>(i + len), d2.begin() + static_cast<std::ptrdiff_t>(j)))
                return std::make_pair(i, j);
        }
    return std::nullopt;
}

} // namespace abcf
