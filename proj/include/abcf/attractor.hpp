#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "domain.hpp"

namespace abcf {

using Point = std::pair<ExtendedReal, ExtendedReal>;

inline Point natural_extension_step(const ExtendedReal& u, const ExtendedReal& w, const ParamPair& P)
{
    if (u.identical(w) || (!u.is_inf() && !w.is_inf() && u == w))
        throw Error(Errc::degenerate_geodesic, "u = w = " + u.str());
    if (w.is_inf())
        throw Error(Errc::domain_error, "w = inf has no branch");
    if (w < P.a)
        return {u + ExtendedReal(1), w + ExtendedReal(1)};
    if (w >= P.b)
        return {u - ExtendedReal(1), w - ExtendedReal(1)};
    return {ExtendedReal(-1) / u, ExtendedReal(-1) / w};
}

// All preimages of (u,w) under F; at most three candidates survive the branch test.
inline std::vector<Point> natural_extension_preimages(const ExtendedReal& u, const ExtendedReal& w, const ParamPair& P)
{
    std::vector<Point> out;
    if (w.is_inf()) {
        // only S(0) = inf
        out.push_back({ExtendedReal(-1) / u, ExtendedReal(0)});
        return out;
    }
    ExtendedReal wm = w - ExtendedReal(1), wp = w + ExtendedReal(1);
    if (wm < P.a)
        out.push_back({u - ExtendedReal(1), wm});
    if (wp >= P.b)
        out.push_back({u + ExtendedReal(1), wp});
    ExtendedReal ws = ExtendedReal(-1) / w;
    if (!ws.is_inf() && ws >= P.a && ws < P.b)
        out.push_back({ExtendedReal(-1) / u, ws});
    return out;
}

// Inverse of F on D: the unique preimage lying in D (the first one if boundaries tie).
inline std::optional<Point> natural_extension_inverse(const ExtendedReal& u, const ExtendedReal& w, const ParamPair& P,
                                                      const StepDomain& D)
{
    for (auto& c : natural_extension_preimages(u, w, P))
        if (!c.first.is_inf() && !c.second.is_inf() && contains(D, c.first, c.second))
            return c;
    return std::nullopt;
}

// ---- boundary orbits and the cycle property ----

enum class OrbitKind { upper_of_a, lower_of_a, upper_of_b, lower_of_b };

inline const char* orbit_kind_name(OrbitKind k)
{
    switch (k) {
    case OrbitKind::upper_of_a: return "upper-of-a";
    case OrbitKind::lower_of_a: return "lower-of-a";
    case OrbitKind::upper_of_b: return "upper-of-b";
    case OrbitKind::lower_of_b: return "lower-of-b";
    }
    return "?";
}

struct OrbitTrace {
    ExtendedReal seed;
    OrbitKind kind;
    std::vector<ExtendedReal> points; // points[0] = seed
    std::vector<Letter> letters;      // letters[0] produces the seed from the endpoint
};

enum class CycleStatus { weak_cycle, strong_cycle, eventually_periodic };

inline const char* cycle_status_name(CycleStatus s)
{
    switch (s) {
    case CycleStatus::weak_cycle: return "weak-cycle";
    case CycleStatus::strong_cycle: return "strong-cycle";
    case CycleStatus::eventually_periodic: return "eventually-periodic";
    }
    return "?";
}

struct CycleInfo {
    char endpoint = 'a';
    CycleStatus status = CycleStatus::eventually_periodic;
    std::size_t m = 0, k = 0; // upper and lower meeting indices
    ExtendedReal cycle_end;
    Word upper_word, lower_word; // cycle_end = word(endpoint)
    OrbitTrace upper, lower;
};

namespace detail {

inline Letter branch_letter(const ExtendedReal& x, const ParamPair& P, bool left)
{
    bool below = left ? x <= P.a : x < P.a;
    bool inside = left ? x <= P.b : x < P.b;
    if (below)
        return Letter::t(1);
    if (inside)
        return Letter::s();
    return Letter::t(-1);
}

// letters applied in order l0, l1, ... -> word with the last letter leftmost, T powers merged
inline Word compose_letters(const std::vector<Letter>& ls, std::size_t n)
{
    Word w;
    for (std::size_t i = n; i-- > 0;) {
        const Letter& l = ls[i];
        if (l.kind == Letter::T && !w.empty() && w.back().kind == Letter::T) {
            w.back().k += l.k;
            if (w.back().k == 0)
                w.pop_back();
        } else {
            w.push_back(l);
        }
    }
    return w;
}

struct OrbitRun {
    OrbitTrace trace;
    bool left;
    bool stopped = false;
    std::unordered_map<ExtendedReal, std::size_t, ExtendedRealHash, ExtendedRealSame> index;

    void advance(const ParamPair& P)
    {
        const ExtendedReal& x = trace.points.back();
        if (x.is_inf()) {
            stopped = true; // inf is fixed
            return;
        }
        Letter l = branch_letter(x, P, left);
        ExtendedReal y = left ? f_ab_left(x, P) : f_ab(x, P);
        if (index.count(y)) {
            stopped = true;
            return;
        }
        index.emplace(y, trace.points.size());
        trace.points.push_back(y);
        trace.letters.push_back(l);
    }
};

inline CycleInfo detect_endpoint_cycle(char which, const ParamPair& P, std::size_t max_steps)
{
    const ExtendedReal& e = which == 'a' ? P.a : P.b;
    OrbitRun up, lo;
    up.left = false;
    lo.left = true;
    if (which == 'a') {
        up.trace = {ExtendedReal(-1) / e, OrbitKind::upper_of_a, {}, {Letter::s()}};
        lo.trace = {e + ExtendedReal(1), OrbitKind::lower_of_a, {}, {Letter::t(1)}};
    } else {
        up.trace = {e - ExtendedReal(1), OrbitKind::upper_of_b, {}, {Letter::t(-1)}};
        lo.trace = {ExtendedReal(-1) / e, OrbitKind::lower_of_b, {}, {Letter::s()}};
    }
    up.trace.points.push_back(up.trace.seed);
    lo.trace.points.push_back(lo.trace.seed);
    up.index.emplace(up.trace.seed, 0);
    lo.index.emplace(lo.trace.seed, 0);

    CycleInfo info;
    info.endpoint = which;
    const bool exact = P.exact();
    // a meeting counts as a cycle only if the words agree (strong) or it ends at 0 (weak);
    // other coincidences come from the one-sided conventions at a and b
    auto is_cycle = [&](std::size_t m, std::size_t k) {
        if (up.trace.points[m].is_zero())
            return true;
        return word_to_matrix(compose_letters(up.trace.letters, m + 1)) ==
               word_to_matrix(compose_letters(lo.trace.letters, k + 1));
    };
    auto meet = [&]() -> std::optional<std::pair<std::size_t, std::size_t>> {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        auto consider = [&](std::size_t m, std::size_t k) {
            if (!is_cycle(m, k))
                return;
            if (!best || m + k < best->first + best->second)
                best = std::make_pair(m, k);
        };
        std::size_t mu = up.trace.points.size() - 1, ml = lo.trace.points.size() - 1;
        if (auto it = lo.index.find(up.trace.points[mu]); it != lo.index.end())
            consider(mu, it->second);
        if (auto it = up.index.find(lo.trace.points[ml]); it != up.index.end())
            consider(it->second, ml);
        return best;
    };
    for (std::size_t step = 0; step <= max_steps; ++step) {
        if (exact) {
            if (auto mk = meet()) {
                info.m = mk->first;
                info.k = mk->second;
                info.cycle_end = up.trace.points[info.m];
                info.upper_word = compose_letters(up.trace.letters, info.m + 1);
                info.lower_word = compose_letters(lo.trace.letters, info.k + 1);
                bool strong = word_to_matrix(info.upper_word) == word_to_matrix(info.lower_word);
                info.status = strong ? CycleStatus::strong_cycle : CycleStatus::weak_cycle;
                info.upper = std::move(up.trace);
                info.lower = std::move(lo.trace);
                return info;
            }
            if (up.stopped && lo.stopped) {
                info.status = CycleStatus::eventually_periodic;
                info.upper = std::move(up.trace);
                info.lower = std::move(lo.trace);
                return info;
            }
        }
        if (step == max_steps)
            break;
        if (!up.stopped)
            up.advance(P);
        if (!lo.stopped)
            lo.advance(P);
        if (!exact && up.stopped && lo.stopped)
            break;
    }
    throw Error(Errc::finiteness_undetected,
                std::string("no cycle or repetition for the orbits of ") + which + " within " +
                    std::to_string(max_steps) + " steps" + (exact ? "" : " (float parameters)"));
}

} // namespace detail

inline constexpr std::size_t default_orbit_budget = 10000;

inline std::pair<CycleInfo, CycleInfo> detect_cycle(const ParamPair& P, std::size_t max_steps = default_orbit_budget)
{
    if (max_steps < 1)
        throw Error(Errc::domain_error, "max_steps must be positive");
    return {detail::detect_endpoint_cycle('a', P, max_steps), detail::detect_endpoint_cycle('b', P, max_steps)};
}

// ---- exact domains ----

namespace detail {

struct NamedDomain {
    const char* a;
    const char* b;
    std::vector<std::pair<const char*, const char*>> upper; // (left end, level); first left end is -inf
    const char* R;
    const char* L; // nullptr: no lower part
    std::vector<std::pair<const char*, const char*>> lower; // (left end, level); last slab runs to +inf
    const char* label;
};

#define ABCF_PHI "(1+sqrt(5))/2"
#define ABCF_PHI2 "(3+sqrt(5))/2"
#define ABCF_IPHI "(sqrt(5)-1)/2"
#define ABCF_IPHI2 "(3-sqrt(5))/2"

inline const std::vector<NamedDomain>& named_domains()
{
    static const std::vector<NamedDomain> table = {
        {"-1", "0", {{"-inf", "-1"}, {"-1", "0"}, {"0", "1"}}, "1", nullptr, {}, "classical minus"},
        {"-1", "1", {{"-inf", "0"}, {"-1", "1"}}, "0", "0", {{"0", "-1"}, {"1", "0"}}, "alternating"},
        {"-1/2", "1/2",
         {{"-inf", "-1/2"}, {"-" ABCF_PHI2, "0"}, {"-" ABCF_PHI, "1"}, {"-" ABCF_IPHI, "2"}}, ABCF_IPHI2,
         "-" ABCF_IPHI2, {{"-" ABCF_IPHI2, "-2"}, {ABCF_IPHI, "-1"}, {ABCF_PHI, "0"}, {ABCF_PHI2, "1/2"}},
         "nearest integer"},
        {"-" ABCF_IPHI, ABCF_IPHI,
         {{"-inf", "-" ABCF_IPHI2}, {"-2", ABCF_IPHI}, {"-1", ABCF_PHI}, {"0", ABCF_PHI2}}, "1/2", "-1/2",
         {{"-1/2", "-" ABCF_PHI2}, {"0", "-" ABCF_PHI}, {"1", "-" ABCF_IPHI}, {"2", ABCF_IPHI2}},
         "nearest integer dual"},
        {"-" ABCF_IPHI, ABCF_IPHI2,
         {{"-inf", "-" ABCF_IPHI}, {"-" ABCF_PHI2, "-" ABCF_IPHI2}, {"-" ABCF_PHI, ABCF_IPHI},
          {"-" ABCF_IPHI, ABCF_PHI}, {ABCF_IPHI2, ABCF_PHI2}},
         ABCF_IPHI, "-" ABCF_IPHI2,
         {{"-" ABCF_IPHI2, "-" ABCF_PHI2}, {ABCF_IPHI, "-" ABCF_PHI}, {ABCF_PHI, "-" ABCF_IPHI},
          {ABCF_PHI2, ABCF_IPHI2}},
         "golden self-dual"},
        {"-3/8", "2/3",
         {{"-inf", "-1/3"}, {"-3", "0"}, {"-8/3", "2/3"}, {"-2", "1"}, {"-5/3", "5/3"}, {"-1", "2"},
          {"-2/3", "8/3"}, {"0", "3"}},
         "1/3", "-5/8",
         {{"-5/8", "-5/2"}, {"-1/2", "-2"}, {"-2/5", "-8/5"}, {"0", "-3/2"}, {"1/2", "-1"}, {"3/5", "-3/5"},
          {"1", "-1/2"}, {"3/2", "0"}, {"8/5", "2/5"}, {"2", "1/2"}, {"5/2", "5/8"}},
         "rational self-dual"},
        {"-1/2", "3/2", {{"-inf", "1/2"}, {"-2", "1"}, {"-1", "2"}}, "0", "-1",
         {{"-1", "-3"}, {"-1/2", "-2"}, {"0", "-2/3"}, {"1", "1/3"}, {"2", "1/2"}}, "wide right"},
    };
    return table;
}

#undef ABCF_PHI
#undef ABCF_PHI2
#undef ABCF_IPHI
#undef ABCF_IPHI2

inline StepDomain named_to_domain(const NamedDomain& nd)
{
    StepDomain D;
    D.note = nd.label;
    auto val = [](const char* s) {
        std::string t = s;
        return t == "-inf" ? ExtendedReal::inf() : parse_real(t);
    };
    for (std::size_t i = 0; i < nd.upper.size(); ++i) {
        ExtendedReal lo = val(nd.upper[i].first);
        ExtendedReal hi = i + 1 < nd.upper.size() ? val(nd.upper[i + 1].first) : val(nd.R);
        D.rects.push_back({{lo, hi}, {val(nd.upper[i].second), ExtendedReal::inf()}, Component::upper});
    }
    for (std::size_t i = 0; i < nd.lower.size(); ++i) {
        ExtendedReal lo = val(nd.lower[i].first);
        ExtendedReal hi = i + 1 < nd.lower.size() ? val(nd.lower[i + 1].first) : ExtendedReal::inf();
        D.rects.push_back({{lo, hi}, {ExtendedReal::inf(), val(nd.lower[i].second)}, Component::lower});
    }
    return D;
}

} // namespace detail

inline ParamPair mirror_params(const ParamPair& P) { return ParamPair{-P.b, -P.a}; }

inline std::optional<StepDomain> named_domain(const ParamPair& P)
{
    if (!P.exact())
        return std::nullopt;
    for (const auto& nd : detail::named_domains()) {
        ExtendedReal a = parse_real(nd.a), b = parse_real(nd.b);
        if (a.identical(P.a) && b.identical(P.b))
            return detail::named_to_domain(nd);
        if ((-b).identical(P.a) && (-a).identical(P.b)) {
            StepDomain D = mirror(detail::named_to_domain(nd));
            D.note = std::string("mirror of ") + nd.label;
            return D;
        }
    }
    return std::nullopt;
}

// Index m of the one-parameter family 1 <= -1/a <= b+1, a <= -1/b + m <= a+1 (with a <= -b).
// Returns nothing outside the family; `boundary` reports ties at the edges of the conditions.
inline std::optional<long long> family_index(const ParamPair& P, bool* boundary = nullptr)
{
    if (boundary)
        *boundary = false;
    if (!P.exact() || P.a.sign() >= 0 || P.b.sign() <= 0)
        return std::nullopt;
    if (P.a > -P.b)
        return std::nullopt;
    ExtendedReal ia = ExtendedReal(-1) / P.a, ib = ExtendedReal(-1) / P.b;
    if (ia < ExtendedReal(1) || ia > P.b + ExtendedReal(1))
        return std::nullopt;
    ExtendedReal lo = P.a - ib; // m in [a + 1/b, a + 1 + 1/b]
    bigint m = lo.floor();
    if (ExtendedReal(Surd(m)) < lo)
        m += 1;
    if (m < 1)
        return std::nullopt;
    bool edge = ia == ExtendedReal(1) || ia == P.b + ExtendedReal(1) || ExtendedReal(Surd(m)) == lo;
    if (boundary)
        *boundary = edge;
    return to_digit(m);
}

// Strip part D ∩ {a <= w <= b} of the family, from the corner formulas.
inline std::vector<Rect> family_strip(const ParamPair& P, long long m)
{
    auto idx = family_index(P);
    if (!idx || *idx != m)
        throw Error(Errc::case_mismatch, "parameters " + P.str() + " are not in the family with m = " +
                                             std::to_string(m));
    const ExtendedReal one(1), inf = ExtendedReal::inf();
    std::vector<Rect> rs;
    ExtendedReal c = P.b - one; // c_p = T^{-2}S(c_{p-1})
    for (long long p = 1; p < m; ++p) {
        ExtendedReal next = ExtendedReal(-1) / c - ExtendedReal(2);
        rs.push_back({{inf, -ExtendedReal::rational(p + 1, p)}, {c, next}, Component::upper});
        c = next;
    }
    ExtendedReal top = ExtendedReal(-1) / P.a - one;
    rs.push_back({{inf, -ExtendedReal::rational(m + 1, m)}, {c, top}, Component::upper});
    rs.push_back({{inf, -one}, {top, P.b}, Component::upper});
    ExtendedReal mid = ExtendedReal(-1) / P.b + ExtendedReal(m);
    rs.push_back({{ExtendedReal(m), inf}, {P.a, mid}, Component::lower});
    rs.push_back({{ExtendedReal(m + 1), inf}, {mid, P.a + one}, Component::lower});
    return rs;
}

// S applied to the strip part of a set of rectangles; components follow the sign of w.
inline std::vector<Rect> strip_image(const std::vector<Rect>& rs, const ParamPair& P)
{
    std::vector<Rect> out;
    for (const auto& r : rs) {
        auto I = intersect(r.w, Interval{P.a, P.b});
        if (!I || !I->proper())
            continue;
        for (const auto& su : s_image(r.u))
            for (const auto& sw : s_image(*I)) {
                Rect q{su, sw, Component::upper};
                if (!q.proper())
                    continue;
                bool positive = sw.lo.is_inf() ? false : sw.lo.sign() >= 0;
                q.comp = positive ? Component::upper : Component::lower;
                out.push_back(q);
            }
    }
    return out;
}

// D = strip part ∪ Λ ∪ the translates F^j(Λ) taken before they re-enter the strip.
inline StepDomain complete_from_strip(const std::vector<Rect>& strip, const ParamPair& P)
{
    const ExtendedReal one(1), inf = ExtendedReal::inf();
    auto lam = strip_image(strip, P);
    std::vector<Rect> all = strip;
    all.insert(all.end(), lam.begin(), lam.end());

    auto ceil_of = [](const ExtendedReal& x) {
        bigint f = x.floor();
        if (ExtendedReal(Surd(f)) < x)
            f += 1;
        return to_digit(f);
    };

    // upper side: w >= b, translated down by T^{-1}
    long long J_up = 1, J_lo = 1;
    std::vector<Interval> inf_up, inf_lo;
    for (const auto& r : lam) {
        if (!r.w.lo.is_inf() && r.w.lo >= P.b && r.w.hi.is_inf()) {
            J_up = std::max(J_up, ceil_of(r.w.lo - P.b + one));
            inf_up.push_back(r.u);
        }
        if (!r.w.hi.is_inf() && r.w.hi <= P.a && r.w.lo.is_inf()) {
            J_lo = std::max(J_lo, ceil_of(P.a + one - r.w.hi));
            inf_lo.push_back(r.u);
        }
    }
    for (const auto& r : lam) {
        if (r.u.lo.is_inf() || r.u.hi.is_inf())
            throw Error(Errc::inconsistent_domain, "unbounded u-range in Lambda");
        if (!r.w.lo.is_inf() && r.w.lo >= P.b) {
            for (long long j = 1;; ++j) {
                ExtendedReal J(j);
                ExtendedReal cut = P.b + ExtendedReal(j - 1);
                if (r.w.hi.is_inf() ? j >= J_up : !(cut < r.w.hi))
                    break;
                ExtendedReal lo = r.w.lo < cut ? cut : r.w.lo;
                all.push_back({shift(r.u, -J), {lo - J, r.w.hi.is_inf() ? inf : r.w.hi - J}, Component::upper});
            }
        } else if (!r.w.hi.is_inf() && r.w.hi <= P.a) {
            for (long long j = 1;; ++j) {
                ExtendedReal J(j);
                ExtendedReal cut = P.a - ExtendedReal(j - 1);
                if (r.w.lo.is_inf() ? j >= J_lo : !(r.w.lo < cut))
                    break;
                ExtendedReal hi = cut < r.w.hi ? cut : r.w.hi;
                all.push_back({shift(r.u, J), {r.w.lo.is_inf() ? inf : r.w.lo + J, hi + J}, Component::lower});
            }
        }
    }
    auto tail = [&](std::vector<Interval> us, bool up) {
        if (us.empty())
            return;
        auto merged = detail::merge_intervals(us);
        if (merged.size() != 1 || merged[0].hi - merged[0].lo < one)
            throw Error(Errc::inconsistent_domain, "translation tail does not tile");
        if (up)
            all.push_back({{inf, merged[0].hi - ExtendedReal(J_up)}, {P.b - one, inf}, Component::upper});
        else
            all.push_back({{merged[0].lo + ExtendedReal(J_lo), inf}, {inf, P.a + one}, Component::lower});
    };
    tail(inf_up, true);
    tail(inf_lo, false);
    return canonical_staircase(all, true);
}

inline StepDomain family_domain(const ParamPair& P, long long m)
{
    StepDomain D = complete_from_strip(family_strip(P, m), P);
    D.note = "family m=" + std::to_string(m);
    return D;
}

// Exact D_{a,b} for the supported parameters; anything else is left to approx_domain.
inline StepDomain build_domain(const ParamPair& P)
{
    if (!P.exact())
        throw Error(Errc::unsupported_params, "float parameters: use approx_domain");
    if (auto D = named_domain(P))
        return *D;
    bool edge = false;
    if (auto m = family_index(P, &edge)) {
        if (edge)
            throw Error(Errc::unsupported_params, "boundary of the family conditions: use approx_domain");
        return family_domain(P, *m);
    }
    ParamPair M = mirror_params(P);
    if (auto m = family_index(M, &edge)) {
        if (edge)
            throw Error(Errc::unsupported_params, "boundary of the family conditions: use approx_domain");
        StepDomain D = mirror(family_domain(M, *m));
        D.note = "mirror of family m=" + std::to_string(*m);
        return D;
    }
    throw Error(Errc::unsupported_params, "no exact construction for " + P.str() + ": use approx_domain");
}

// Λ = S(D ∩ {a <= w <= b}), as horizontal slabs; upper component has w > 0.
inline StepDomain lambda_of(const StepDomain& D, const ParamPair& P)
{
    auto img = strip_image(D.rects, P);
    std::vector<Rect> up, lo;
    for (const auto& r : img)
        (r.comp == Component::upper ? up : lo).push_back(r);
    StepDomain L;
    L.exact = D.exact;
    for (auto* part : {&up, &lo})
        for (auto r : horizontal_slabs(*part)) {
            r.comp = part == &up ? Component::upper : Component::lower;
            L.rects.push_back(r);
        }
    return L;
}

// Λ-hat in coordinates x = -1/w_Λ = w_D, y = u_Λ = -1/u_D; vertical slabs in x.
inline StepDomain hat_lambda_of(const StepDomain& D, const ParamPair& P)
{
    std::vector<Rect> up, lo;
    for (const auto& r : D.rects) {
        auto I = intersect(r.w, Interval{P.a, P.b});
        if (!I || !I->proper())
            continue;
        for (const auto& y : s_image(r.u)) {
            // transpose so horizontal_slabs slices along x
            Rect t{y, *I, Component::upper};
            if (!t.proper())
                continue;
            bool positive = !y.lo.is_inf() && y.lo.sign() >= 0;
            (positive ? up : lo).push_back(t);
        }
    }
    StepDomain H;
    H.exact = D.exact;
    for (auto* part : {&up, &lo})
        for (const auto& t : horizontal_slabs(*part))
            H.rects.push_back({t.w, t.u, part == &up ? Component::upper : Component::lower});
    return H;
}

// ---- simulation oracle ----

struct ApproxOptions {
    std::size_t samples = 100000;
    std::size_t iterations = 100;
    double eps = 1e-2;
    double window = 8.0;
    std::uint64_t seed = 1;
};

namespace detail {

inline std::pair<double, double> step_double(double u, double w, double a, double b)
{
    if (w < a)
        return {u + 1, w + 1};
    if (w >= b)
        return {u - 1, w - 1};
    return {-1 / u, -1 / w};
}

// Per-column extreme samples of one component over [-window, window].
struct ColumnFit {
    bool upper;
    double lo, eps;
    std::vector<double> col;
    double umin = std::numeric_limits<double>::infinity();
    double umax = -std::numeric_limits<double>::infinity();

    ColumnFit(bool up, const ApproxOptions& opt)
        : upper(up), lo(-opt.window), eps(opt.eps / 4), // finer columns place the jumps
          col(static_cast<std::size_t>(std::ceil(8 * opt.window / opt.eps)),
              up ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity())
    {
    }

    void add(double u, double w)
    {
        umin = std::min(umin, u);
        umax = std::max(umax, u);
        if (u < lo || u >= -lo)
            return;
        std::size_t i = std::min(col.size() - 1, static_cast<std::size_t>((u - lo) / eps));
        col[i] = upper ? std::min(col[i], w) : std::max(col[i], w);
    }

    // monotone envelope (running min from the right / max from the left), then greedy merge
    std::vector<Rect> rects() const
    {
        std::vector<Rect> out;
        if (umin > umax)
            return out;
        std::size_t first = static_cast<std::size_t>(std::clamp((umin - lo) / eps, 0.0, double(col.size() - 1)));
        std::size_t last = static_cast<std::size_t>(std::clamp((umax - lo) / eps, 0.0, double(col.size() - 1)));
        std::vector<double> c(col.begin() + static_cast<std::ptrdiff_t>(first),
                              col.begin() + static_cast<std::ptrdiff_t>(last) + 1);
        std::size_t n = c.size();
        if (upper)
            for (std::size_t i = n - 1; i-- > 0;)
                c[i] = std::min(c[i], c[i + 1]);
        else
            for (std::size_t i = 1; i < n; ++i)
                c[i] = std::max(c[i], c[i - 1]);
        double left = std::max(umin, lo), right = std::min(umax, -lo);
        std::size_t start = 0;
        for (std::size_t i = 1; i <= n; ++i) {
            if (i < n && std::fabs(c[i] - c[start]) <= 2 * eps)
                continue;
            double level = c[start];
            if (std::isfinite(level)) {
                double u0 = start == 0 ? left : lo + eps * static_cast<double>(first + start);
                double u1 = i == n ? right : lo + eps * static_cast<double>(first + i);
                Interval W = upper ? Interval{ExtendedReal(level), ExtendedReal::inf()}
                                   : Interval{ExtendedReal::inf(), ExtendedReal(level)};
                out.push_back({{ExtendedReal(u0), ExtendedReal(u1)}, W, upper ? Component::upper : Component::lower});
            }
            start = i;
        }
        if (!out.empty()) {
            if (upper)
                out.front().u.lo = ExtendedReal::inf();
            else
                out.back().u.hi = ExtendedReal::inf();
        }
        return out;
    }
};

} // namespace detail

inline StepDomain approx_domain(const ParamPair& P, const ApproxOptions& opt = {})
{
    StepDomain D;
    D.exact = false;
    D.note = "simulation";
    if (opt.samples == 0 || opt.iterations == 0)
        return D;
    const double a = P.a.to_double(), b = P.b.to_double();
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> U(-10.0, 10.0);
    detail::ColumnFit up(true, opt), lo(false, opt);
    std::size_t burn = opt.iterations / 2;
    const double V = opt.window;
    for (std::size_t s = 0; s < opt.samples; ++s) {
        double u = U(rng), w = U(rng);
        if (u == w)
            continue;
        // one iteration = an inversion or a whole run of translations; every
        // intermediate point of a run inside the window is recorded
        for (std::size_t t = 0; t < opt.iterations; ++t) {
            double n = 0;
            if (w < a)
                n = std::ceil(a - w);
            else if (w >= b)
                n = -(std::floor(w - b) + 1);
            if (n == 0) {
                u = -1 / u;
                w = -1 / w;
                if (!std::isfinite(u) || !std::isfinite(w))
                    break;
                if (t >= burn)
                    (w > u ? up : lo).add(u, w);
                continue;
            }
            if (t >= burn) {
                auto& fit = w > u ? up : lo;
                double j0 = n > 0 ? std::max(1.0, std::ceil(-V - u)) : std::max(1.0, std::ceil(u - V));
                double j1 = n > 0 ? std::min(n, std::floor(V - u)) : std::min(-n, std::floor(u + V));
                for (double j = j0; j <= j1; ++j)
                    fit.add(n > 0 ? u + j : u - j, n > 0 ? w + j : w - j);
                fit.umin = std::min(fit.umin, u + n);
                fit.umax = std::max(fit.umax, u + n);
            }
            u += n;
            w += n;
            if (!std::isfinite(u))
                break;
        }
    }
    D.rects = up.rects();
    auto l = lo.rects();
    D.rects.insert(D.rects.end(), l.begin(), l.end());
    return D;
}

// ---- comparison of boundaries ----

struct Segment {
    double x0, y0, x1, y1;
};

namespace detail {

inline double clampd(const ExtendedReal& x, double sign_if_inf, double big)
{
    return x.is_inf() ? sign_if_inf * big : x.to_double();
}

inline void add_clipped(std::vector<Segment>& out, double x0, double y0, double x1, double y1, double V)
{
    if (x0 > x1)
        std::swap(x0, x1);
    if (y0 > y1)
        std::swap(y0, y1);
    if (x1 < -V || x0 > V || y1 < -V || y0 > V)
        return;
    out.push_back({std::max(x0, -V), std::max(y0, -V), std::min(x1, V), std::min(y1, V)});
}

inline double point_segment(double px, double py, const Segment& s)
{
    double dx = s.x1 - s.x0, dy = s.y1 - s.y0;
    double t = 0;
    double len2 = dx * dx + dy * dy;
    if (len2 > 0)
        t = std::clamp(((px - s.x0) * dx + (py - s.y0) * dy) / len2, 0.0, 1.0);
    double qx = s.x0 + t * dx - px, qy = s.y0 + t * dy - py;
    return std::sqrt(qx * qx + qy * qy);
}

} // namespace detail

// Staircase boundary of both components, clipped to [-V,V]^2.
inline std::vector<Segment> boundary_segments(const StepDomain& D, double V = 4.0)
{
    std::vector<Segment> segs;
    const double big = 10 * V + 10;
    for (Component c : {Component::upper, Component::lower}) {
        auto rs = D.component(c);
        if (rs.empty())
            continue;
        std::sort(rs.begin(), rs.end(), [](const Rect& x, const Rect& y) { return lo_less(x.u.lo, y.u.lo); });
        bool up = c == Component::upper;
        auto level = [&](const Rect& r) { return up ? r.w.lo.to_double() : r.w.hi.to_double(); };
        for (std::size_t i = 0; i < rs.size(); ++i) {
            double x0 = detail::clampd(rs[i].u.lo, -1, big), x1 = detail::clampd(rs[i].u.hi, 1, big);
            double y = level(rs[i]);
            detail::add_clipped(segs, x0, y, x1, y, V);
            if (i + 1 < rs.size())
                detail::add_clipped(segs, x1, y, x1, level(rs[i + 1]), V);
        }
        if (up) {
            const Rect& last = rs.back();
            if (!last.u.hi.is_inf()) {
                double x = last.u.hi.to_double();
                detail::add_clipped(segs, x, level(last), x, big, V);
            }
        } else {
            const Rect& first = rs.front();
            if (!first.u.lo.is_inf()) {
                double x = first.u.lo.to_double();
                detail::add_clipped(segs, x, -big, x, level(first), V);
            }
        }
    }
    return segs;
}

// Hausdorff distance between the clipped boundaries (densely sampled).
inline double boundary_hausdorff(const StepDomain& A, const StepDomain& B, double V = 4.0, double h = 2e-3)
{
    auto sa = boundary_segments(A, V), sb = boundary_segments(B, V);
    if (sa.empty() || sb.empty())
        return sa.empty() && sb.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    auto directed = [h](const std::vector<Segment>& from, const std::vector<Segment>& to) {
        double worst = 0;
        for (const auto& s : from) {
            double len = std::hypot(s.x1 - s.x0, s.y1 - s.y0);
            int n = std::max(1, static_cast<int>(std::ceil(len / h)));
            for (int i = 0; i <= n; ++i) {
                double t = static_cast<double>(i) / n;
                double px = s.x0 + t * (s.x1 - s.x0), py = s.y0 + t * (s.y1 - s.y0);
                double best = std::numeric_limits<double>::infinity();
                for (const auto& q : to)
                    best = std::min(best, detail::point_segment(px, py, q));
                worst = std::max(worst, best);
            }
        }
        return worst;
    };
    return std::max(directed(sa, sb), directed(sb, sa));
}

} // namespace abcf
