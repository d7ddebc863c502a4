#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cf.hpp"

namespace abcf {

enum class Component { upper, lower };

inline const char* component_name(Component c) { return c == Component::upper ? "upper" : "lower"; }

// Closed interval; an infinite `lo` means -inf and an infinite `hi` means +inf.
struct Interval {
    ExtendedReal lo, hi;

    bool unbounded_below() const { return lo.is_inf(); }
    bool unbounded_above() const { return hi.is_inf(); }

    bool contains(const ExtendedReal& x, double eps = 0.0) const
    {
        if (x.is_inf())
            return false;
        if (eps > 0.0 && (!x.is_exact() || !lo.is_exact() || !hi.is_exact())) {
            double v = x.to_double();
            return (lo.is_inf() || lo.to_double() - eps <= v) && (hi.is_inf() || v <= hi.to_double() + eps);
        }
        return (lo.is_inf() || lo <= x) && (hi.is_inf() || x <= hi);
    }

    // positive length (degenerate intervals are dropped by the geometry code)
    bool proper() const { return lo.is_inf() || hi.is_inf() || lo < hi; }

    std::string str() const
    {
        return "[" + (lo.is_inf() ? std::string("-inf") : lo.str()) + ", " +
               (hi.is_inf() ? std::string("+inf") : hi.str()) + "]";
    }
};

inline bool lo_less(const ExtendedReal& x, const ExtendedReal& y) // as lower bounds
{
    if (x.is_inf())
        return !y.is_inf();
    if (y.is_inf())
        return false;
    return x < y;
}

inline bool hi_less(const ExtendedReal& x, const ExtendedReal& y) // as upper bounds
{
    if (y.is_inf())
        return !x.is_inf();
    if (x.is_inf())
        return false;
    return x < y;
}

inline std::optional<Interval> intersect(const Interval& x, const Interval& y)
{
    Interval r{lo_less(x.lo, y.lo) ? y.lo : x.lo, hi_less(x.hi, y.hi) ? x.hi : y.hi};
    if (!r.lo.is_inf() && !r.hi.is_inf() && r.hi < r.lo)
        return std::nullopt;
    return r;
}

inline Interval shift(const Interval& I, const ExtendedReal& k) { return {I.lo + k, I.hi + k}; }

// Image under S(x) = -1/x, split where the interval crosses 0.
inline std::vector<Interval> s_image(const Interval& I)
{
    auto S = [](const ExtendedReal& x) { return ExtendedReal(-1) / x; };
    std::vector<Interval> out;
    bool neg_part = I.lo.is_inf() || I.lo.sign() < 0;
    bool pos_part = I.hi.is_inf() || I.hi.sign() > 0;
    if (neg_part) {
        // [lo, min(hi,0)] on the negative half-line: S increases from S(lo) (0 for -inf) to S(hi) (+inf at 0)
        ExtendedReal top = (!I.hi.is_inf() && I.hi.sign() <= 0) ? I.hi : ExtendedReal(0);
        ExtendedReal l = I.lo.is_inf() ? ExtendedReal(0) : S(I.lo);
        ExtendedReal h = top.is_zero() ? ExtendedReal::inf() : S(top);
        out.push_back({l, h});
    }
    if (pos_part) {
        ExtendedReal bot = (!I.lo.is_inf() && I.lo.sign() >= 0) ? I.lo : ExtendedReal(0);
        ExtendedReal l = bot.is_zero() ? ExtendedReal::inf() : S(bot);
        ExtendedReal h = I.hi.is_inf() ? ExtendedReal(0) : S(I.hi);
        out.push_back({l, h});
    }
    return out;
}

struct Rect {
    Interval u, w;
    Component comp = Component::upper;

    bool contains(const ExtendedReal& x, const ExtendedReal& y, double eps = 0.0) const
    {
        return u.contains(x, eps) && w.contains(y, eps);
    }
    bool proper() const { return u.proper() && w.proper(); }
};

// Finite union of closed axis-parallel rectangles (D, Lambda or hat-Lambda).
struct StepDomain {
    std::vector<Rect> rects;
    bool exact = true;
    std::string note;

    bool empty() const { return rects.empty(); }

    std::vector<Rect> component(Component c) const
    {
        std::vector<Rect> out;
        for (const auto& r : rects)
            if (r.comp == c)
                out.push_back(r);
        return out;
    }
};

inline constexpr double float_membership_eps = 1e-12;

inline bool contains(const StepDomain& D, const ExtendedReal& u, const ExtendedReal& w)
{
    double eps = (u.is_exact() && w.is_exact() && D.exact) ? 0.0 : float_membership_eps;
    for (const auto& r : D.rects)
        if (r.contains(u, w, eps))
            return true;
    return false;
}

namespace detail {

inline void sort_unique(std::vector<ExtendedReal>& xs)
{
    std::sort(xs.begin(), xs.end(), [](const ExtendedReal& x, const ExtendedReal& y) { return x < y; });
    xs.erase(std::unique(xs.begin(), xs.end(), [](const ExtendedReal& x, const ExtendedReal& y) { return x == y; }),
             xs.end());
}

inline void add_finite(std::vector<ExtendedReal>& xs, const ExtendedReal& x)
{
    if (!x.is_inf())
        xs.push_back(x);
}

// one interior point of each elementary interval cut out by sorted breakpoints
inline std::vector<ExtendedReal> representatives(const std::vector<ExtendedReal>& br)
{
    std::vector<ExtendedReal> reps;
    if (br.empty()) {
        reps.push_back(ExtendedReal(0));
        return reps;
    }
    reps.push_back(br.front() - ExtendedReal(1));
    for (std::size_t i = 0; i + 1 < br.size(); ++i)
        reps.push_back((br[i] + br[i + 1]) / ExtendedReal(2));
    reps.push_back(br.back() + ExtendedReal(1));
    return reps;
}

// elementary interval i: (br[i-1], br[i]) with infinite ends
inline Interval elementary(const std::vector<ExtendedReal>& br, std::size_t i)
{
    return {i == 0 ? ExtendedReal::inf() : br[i - 1], i == br.size() ? ExtendedReal::inf() : br[i]};
}

inline std::vector<Interval> merge_intervals(std::vector<Interval> v)
{
    std::sort(v.begin(), v.end(), [](const Interval& x, const Interval& y) { return lo_less(x.lo, y.lo); });
    std::vector<Interval> out;
    for (const auto& I : v) {
        if (!out.empty() && (out.back().hi.is_inf() || !lo_less(out.back().hi, I.lo) || out.back().hi == I.lo)) {
            if (hi_less(out.back().hi, I.hi))
                out.back().hi = I.hi;
        } else {
            out.push_back(I);
        }
    }
    return out;
}

} // namespace detail

inline std::vector<ExtendedReal> breakpoints_u(const std::vector<Rect>& rs)
{
    std::vector<ExtendedReal> b;
    for (const auto& r : rs) {
        detail::add_finite(b, r.u.lo);
        detail::add_finite(b, r.u.hi);
    }
    detail::sort_unique(b);
    return b;
}

inline std::vector<ExtendedReal> breakpoints_w(const std::vector<Rect>& rs)
{
    std::vector<ExtendedReal> b;
    for (const auto& r : rs) {
        detail::add_finite(b, r.w.lo);
        detail::add_finite(b, r.w.hi);
    }
    detail::sort_unique(b);
    return b;
}

// Compare two unions of rectangles up to boundaries. Returns a point in the
// symmetric difference, or nothing when the regions agree.
inline std::optional<std::pair<ExtendedReal, ExtendedReal>> region_difference(const std::vector<Rect>& A,
                                                                               const std::vector<Rect>& B)
{
    std::vector<Rect> all = A;
    all.insert(all.end(), B.begin(), B.end());
    auto ru = detail::representatives(breakpoints_u(all));
    auto rw = detail::representatives(breakpoints_w(all));
    for (const auto& u : ru) {
        std::vector<const Rect*> ca, cb;
        for (const auto& r : A)
            if (r.u.contains(u))
                ca.push_back(&r);
        for (const auto& r : B)
            if (r.u.contains(u))
                cb.push_back(&r);
        for (const auto& w : rw) {
            bool ia = false, ib = false;
            for (auto* r : ca)
                if (r->w.contains(w)) {
                    ia = true;
                    break;
                }
            for (auto* r : cb)
                if (r->w.contains(w)) {
                    ib = true;
                    break;
                }
            if (ia != ib)
                return std::make_pair(u, w);
        }
    }
    return std::nullopt;
}

inline bool same_region(const std::vector<Rect>& A, const std::vector<Rect>& B)
{
    return !region_difference(A, B).has_value();
}

// Rewrite a union of rectangles as two staircases: vertical slabs
// [u_i, u_{i+1}] x [level, +inf] (upper) and [u_i, u_{i+1}] x [-inf, level] (lower).
inline StepDomain canonical_staircase(const std::vector<Rect>& input, bool exact = true)
{
    std::vector<Rect> rs;
    for (const auto& r : input)
        if (r.proper())
            rs.push_back(r);
    auto br = breakpoints_u(rs);
    auto reps = detail::representatives(br);
    std::vector<Rect> upper, lower;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        std::vector<Interval> ws;
        for (const auto& r : rs)
            if (r.u.contains(reps[i]))
                ws.push_back(r.w);
        auto merged = detail::merge_intervals(ws);
        Interval slab_u = detail::elementary(br, i);
        for (const auto& I : merged) {
            if (I.lo.is_inf() && I.hi.is_inf())
                throw Error(Errc::inconsistent_domain, "full vertical line at u = " + reps[i].str());
            if (!I.lo.is_inf() && !I.hi.is_inf())
                throw Error(Errc::inconsistent_domain,
                            "bounded vertical slice " + I.str() + " at u = " + reps[i].str());
            if (I.hi.is_inf()) {
                if (!upper.empty() && upper.back().u.hi == slab_u.lo && upper.back().w.lo == I.lo)
                    upper.back().u.hi = slab_u.hi;
                else
                    upper.push_back({slab_u, I, Component::upper});
            } else {
                if (!lower.empty() && lower.back().u.hi == slab_u.lo && lower.back().w.hi == I.hi)
                    lower.back().u.hi = slab_u.hi;
                else
                    lower.push_back({slab_u, I, Component::lower});
            }
        }
    }
    StepDomain D;
    D.exact = exact;
    D.rects = upper;
    D.rects.insert(D.rects.end(), lower.begin(), lower.end());
    return D;
}

// Rewrite a union of rectangles as horizontal slabs [u_lo, u_hi] x [w_i, w_{i+1}].
inline std::vector<Rect> horizontal_slabs(const std::vector<Rect>& input)
{
    std::vector<Rect> rs;
    for (const auto& r : input)
        if (r.proper())
            rs.push_back(r);
    auto br = breakpoints_w(rs);
    auto reps = detail::representatives(br);
    std::vector<Rect> out;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        std::vector<Interval> us;
        Component comp = Component::upper;
        for (const auto& r : rs)
            if (r.w.contains(reps[i])) {
                us.push_back(r.u);
                comp = r.comp;
            }
        Interval slab_w = detail::elementary(br, i);
        for (const auto& I : detail::merge_intervals(us)) {
            bool merged = false;
            for (auto it = out.rbegin(); it != out.rend(); ++it) {
                if (it->w.hi == slab_w.lo && !it->w.hi.is_inf() && it->u.lo.identical(I.lo) &&
                    it->u.hi.identical(I.hi)) {
                    it->w.hi = slab_w.hi;
                    merged = true;
                    break;
                }
            }
            if (!merged)
                out.push_back({I, slab_w, comp});
        }
    }
    return out;
}

// Check that the non-decreasing step-function description holds.
inline bool staircase_monotone(const StepDomain& D)
{
    for (Component c : {Component::upper, Component::lower}) {
        auto rs = D.component(c);
        std::sort(rs.begin(), rs.end(), [](const Rect& x, const Rect& y) { return lo_less(x.u.lo, y.u.lo); });
        for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
            const ExtendedReal& l0 = c == Component::upper ? rs[i].w.lo : rs[i].w.hi;
            const ExtendedReal& l1 = c == Component::upper ? rs[i + 1].w.lo : rs[i + 1].w.hi;
            if (l1 < l0)
                return false;
        }
    }
    return true;
}

// Image of a rectangle under the natural extension F_{a,b}, split by branch.
inline std::vector<Rect> image_under_F(const Rect& r, const ParamPair& P)
{
    std::vector<Rect> out;
    auto part = [&](const ExtendedReal& lo, const ExtendedReal& hi) -> std::optional<Interval> {
        auto I = intersect(r.w, Interval{lo, hi});
        if (!I || !I->proper())
            return std::nullopt;
        return I;
    };
    if (auto I = part(ExtendedReal::inf(), P.a))
        out.push_back({shift(r.u, 1), shift(*I, 1), r.comp});
    if (auto I = part(P.b, ExtendedReal::inf()))
        out.push_back({shift(r.u, -1), shift(*I, -1), r.comp});
    if (auto I = part(P.a, P.b)) {
        for (const auto& su : s_image(r.u))
            for (const auto& sw : s_image(*I)) {
                Rect q{su, sw, r.comp};
                if (q.proper())
                    out.push_back(q);
            }
    }
    return out;
}

inline std::vector<Rect> image_under_F(const std::vector<Rect>& rs, const ParamPair& P)
{
    std::vector<Rect> out;
    for (const auto& r : rs) {
        auto im = image_under_F(r, P);
        out.insert(out.end(), im.begin(), im.end());
    }
    return out;
}

// F(D) = D up to boundaries; returns a witness point of the discrepancy.
inline std::optional<std::pair<ExtendedReal, ExtendedReal>> invariance_defect(const StepDomain& D, const ParamPair& P)
{
    return region_difference(image_under_F(D.rects, P), D.rects);
}

inline bool is_invariant(const StepDomain& D, const ParamPair& P) { return !invariance_defect(D, P).has_value(); }

// (u,w) -> (-u,-w): the attractor of the mirror pair (-b,-a)
inline StepDomain mirror(const StepDomain& D)
{
    StepDomain M;
    M.exact = D.exact;
    M.note = D.note;
    for (const auto& r : D.rects)
        M.rects.push_back({{-r.u.hi, -r.u.lo}, {-r.w.hi, -r.w.lo},
                           r.comp == Component::upper ? Component::lower : Component::upper});
    return M;
}

// psi(u,w) = (-w,-u): reflection in the anti-diagonal
inline StepDomain reflect_psi(const StepDomain& D)
{
    std::vector<Rect> rs;
    for (const auto& r : D.rects)
        rs.push_back({{-r.w.hi, -r.w.lo}, {-r.u.hi, -r.u.lo}, r.comp});
    StepDomain out = canonical_staircase(rs, D.exact);
    out.note = D.note;
    return out;
}

} // namespace abcf
