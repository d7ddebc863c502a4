#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "reduction.hpp"

namespace abcf {

inline bool has_dual(const std::pair<CycleInfo, CycleInfo>& cycles)
{
    return cycles.first.status != CycleStatus::strong_cycle && cycles.second.status != CycleStatus::strong_cycle;
}

inline bool has_dual(const ParamPair& P) { return has_dual(detect_cycle(P)); }

struct DualReport {
    ParamPair P;
    bool has_dual = false;
    std::optional<ParamPair> dual;
    bool self_dual = false;
    bool approximate = false; // read off an oracle domain
    std::optional<char> strong_endpoint;
    ExtendedReal x_a, x_b;
};

namespace detail {

// sup{u : (u, b) in the upper part}
inline ExtendedReal level_b_end(const StepDomain& D, const ExtendedReal& b)
{
    std::optional<ExtendedReal> x;
    for (const auto& r : D.component(Component::upper))
        if (r.w.lo < b && (!x || hi_less(*x, r.u.hi)))
            x = r.u.hi;
    return x ? *x : -ExtendedReal::inf(); // no upper part: a' = 0
}

// inf{u : (u, a) in the lower part}
inline ExtendedReal level_a_end(const StepDomain& D, const ExtendedReal& a)
{
    std::optional<ExtendedReal> x;
    for (const auto& r : D.component(Component::lower))
        if (a < r.w.hi && (!x || lo_less(r.u.lo, *x)))
            x = r.u.lo;
    return x ? *x : ExtendedReal::inf(); // no lower part: b' = 0
}

inline ExtendedReal recip(const ExtendedReal& x) { return x.is_inf() ? ExtendedReal(0) : ExtendedReal(1) / x; }

// exact equality for exact values, a loose tolerance for oracle readings
inline bool agrees(const ExtendedReal& x, const ExtendedReal& y, bool exact)
{
    if (x.is_inf() || y.is_inf())
        return x.is_inf() && y.is_inf();
    if (exact)
        return x == y;
    return std::fabs(x.to_double() - y.to_double()) < 5e-2;
}

} // namespace detail

// a' = 1/x_b, b' = 1/x_a, checked against the outer vertical boundaries 1 - b' and -1 - a'
inline ParamPair dual_params(const ParamPair& P, const StepDomain& D, ExtendedReal* xa = nullptr,
                             ExtendedReal* xb = nullptr)
{
    ExtendedReal x_b = detail::level_b_end(D, P.b), x_a = detail::level_a_end(D, P.a);
    ExtendedReal a2 = detail::recip(x_b), b2 = detail::recip(x_a);
    if (xa)
        *xa = x_a;
    if (xb)
        *xb = x_b;
    std::optional<ExtendedReal> right, left;
    for (const auto& r : D.component(Component::upper))
        if (!right || hi_less(*right, r.u.hi))
            right = r.u.hi;
    for (const auto& r : D.component(Component::lower))
        if (!left || lo_less(r.u.lo, *left))
            left = r.u.lo;
    bool exact = D.exact;
    if ((right && !detail::agrees(*right, ExtendedReal(1) - b2, exact)) ||
        (left && !detail::agrees(*left, ExtendedReal(-1) - a2, exact)))
        throw Error(Errc::inconsistent_domain, "dual levels " + a2.str() + ", " + b2.str() +
                                                   " disagree with the vertical boundaries of D");
    if (a2 < ExtendedReal(-1) || a2.sign() > 0 || b2.sign() < 0 || b2 > ExtendedReal(1))
        throw Error(Errc::inconsistent_domain, "dual parameters out of range: " + a2.str() + ", " + b2.str());
    return ParamPair{a2, b2};
}

inline DualReport dual_report(const ParamPair& P, const ApproxOptions& opt = {})
{
    DualReport rep;
    rep.P = P;
    auto cycles = detect_cycle(P);
    rep.has_dual = has_dual(cycles);
    if (!rep.has_dual) {
        rep.strong_endpoint = cycles.first.status == CycleStatus::strong_cycle ? 'a' : 'b';
        return rep;
    }
    auto G = Geometry::build(P, true, opt);
    rep.approximate = !G.exact;
    rep.dual = dual_params(P, G.D, &rep.x_a, &rep.x_b);
    if (!rep.approximate)
        rep.self_dual = rep.dual->a == P.a && rep.dual->b == P.b;
    return rep;
}

struct DualityCheck {
    bool ok = false;
    bool certified = false; // exact reflection equality plus exact invariance
    std::optional<std::pair<ExtendedReal, ExtendedReal>> witness;
    std::string detail;
};

// psi(D_{a,b}) = D_{a',b'} and psi(D_{a,b}) is F_{a',b'}-invariant
inline DualityCheck verify_duality(const ParamPair& P, const ParamPair& dual, const ApproxOptions& opt = {})
{
    DualityCheck out;
    auto G = Geometry::build(P, true, opt);
    StepDomain R = reflect_psi(G.D);
    if (G.exact) {
        try {
            out.witness = invariance_defect(R, dual);
        } catch (const Error& e) {
            // corners and parameters in different fields cannot be combined exactly
            out.detail = std::string("invariance not decidable: ") + e.what();
            return out;
        }
        if (out.witness) {
            out.detail = "psi(D) is not invariant under F for " + dual.str();
            return out;
        }
        std::optional<StepDomain> D2;
        try {
            D2 = build_domain(dual);
        } catch (const Error& e) {
            if (e.code() != Errc::unsupported_params)
                throw;
        }
        if (D2) {
            out.witness = region_difference(R.rects, D2->rects);
            if (!out.witness)
                out.witness = region_difference(D2->rects, R.rects);
            if (out.witness) {
                out.detail = "psi(D) differs from the domain of " + dual.str();
                return out;
            }
            out.ok = out.certified = true;
            out.detail = "exact reflection and invariance";
        } else {
            out.ok = out.certified = true;
            out.detail = "psi(D) is invariant; no stored domain for the dual to compare";
        }
        return out;
    }
    // oracle domains: Hausdorff agreement only, never certified
    StepDomain D2 = Geometry::build(dual, true, opt).D;
    double h = boundary_hausdorff(R, D2);
    out.ok = h < 5e-2;
    out.detail = "approximate domains, boundary Hausdorff " + std::to_string(h);
    return out;
}

struct JuxtapositionResult {
    bool ok = true;
    std::vector<Digit> past, dual_digits;
    bool periodic_checked = false;
    std::string detail;
};

// past digits of g are the dual expansion of 1/u
inline JuxtapositionResult juxtaposition_check(const Geodesic& g, const Geometry& G, const ParamPair& dual,
                                               std::size_t K)
{
    JuxtapositionResult res;
    if (K == 0)
        return res;
    auto cw = coding_window(g, G, K);
    res.past = cw.past;
    ExtendedReal inv = detail::recip(cw.anchor.u);
    auto e = expand(inv, dual, K + 1);
    res.dual_digits = e.digits(K);
    if (res.dual_digits != res.past) {
        res.ok = false;
        res.detail = "past digits differ from the dual expansion of 1/u";
        return res;
    }
    // purely periodic w: 1/u carries the reversed period
    const ExtendedReal& u = cw.anchor.u;
    const ExtendedReal& w = cw.anchor.w;
    bool axis = u.is_exact() && w.is_exact() && !w.is_rational() && u == ExtendedReal(w.surd().conj());
    auto ew = expand(w, G.P, 10000);
    if (axis && ew.tail == Expansion::Tail::periodic && ew.head.empty()) {
        auto eu = expand(inv, dual, 10000);
        res.periodic_checked = true;
        std::vector<Digit> rev(ew.period.rbegin(), ew.period.rend());
        std::size_t n = 2 * rev.size();
        std::vector<Digit> want;
        for (std::size_t k = 0; k < n; ++k)
            want.push_back(rev[k % rev.size()]);
        if (eu.digits(n) != want) {
            res.ok = false;
            res.detail = "1/u does not carry the reversed period";
        }
    }
    return res;
}

} // namespace abcf
