#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reduction.hpp"

namespace abcf {

struct Cell {
    Digit n = 0;     // base symbol (a representative digit for tail families)
    int sub = 0;     // 0 when Λ_n is a single rectangle, else 1, 2, ... from the bottom
    int tail = 0;    // +1 / -1 for the families of large positive / negative digits
    Rect rect;

    std::string label() const
    {
        if (tail)
            return tail > 0 ? "+tail" : "-tail";
        return sub ? std::to_string(n) + "_" + std::to_string(sub) : std::to_string(n);
    }
};

struct RefinedPartition {
    ParamPair P;
    std::vector<Cell> cells;
    Digit N = 0; // digits with |n| > N form the tail families
    bool exact = true;

    // cell holding (u,w), if exactly one does
    std::optional<std::size_t> locate(const ExtendedReal& u, const ExtendedReal& w) const;
    std::vector<std::size_t> cells_for(Digit n) const;
};

struct TransitionMatrix {
    std::vector<std::vector<bool>> adj;
    std::size_t edge_touches = 0; // degenerate intersections counted as empty

    bool operator()(std::size_t i, std::size_t j) const { return adj[i][j]; }
};

namespace detail {

// w-range of the digit n (closed)
inline Interval digit_strip(Digit n, const ParamPair& P)
{
    ExtendedReal N(n);
    if (n > 0)
        return {P.b + N - ExtendedReal(1), P.b + N};
    if (n < 0)
        return {P.a + N, P.a + N + ExtendedReal(1)};
    return {P.a, P.b};
}

inline bool interior_overlap(const Interval& x, const Interval& y)
{
    auto I = intersect(x, y);
    return I && I->proper();
}

inline bool inside(const Interval& x, const Interval& y) // x within y
{
    return !lo_less(x.lo, y.lo) && !hi_less(y.hi, x.hi);
}

// Λ ∩ {digit n}, cut horizontally where the u-slice changes
inline std::vector<Rect> slice_digit(const StepDomain& L, Digit n, const ParamPair& P)
{
    Interval W = digit_strip(n, P);
    std::vector<Rect> hit;
    for (const auto& r : L.rects)
        if (interior_overlap(r.w, W))
            hit.push_back(r);
    std::vector<ExtendedReal> br{W.lo, W.hi};
    for (const auto& r : hit)
        for (const auto& y : {r.w.lo, r.w.hi})
            if (!y.is_inf() && W.lo < y && y < W.hi)
                br.push_back(y);
    sort_unique(br);
    std::vector<Rect> out;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        Interval E{br[i], br[i + 1]};
        std::vector<Interval> us;
        Component comp = Component::upper;
        for (const auto& r : hit)
            if (inside(E, r.w)) {
                us.push_back(r.u);
                comp = r.comp;
            }
        us = merge_intervals(us);
        if (us.empty())
            continue;
        if (us.size() > 1)
            throw Error(Errc::inconsistent_domain, "Lambda slice at digit " + std::to_string(n) + " is not an interval");
        if (!out.empty() && out.back().u.lo.identical(us[0].lo) && out.back().u.hi.identical(us[0].hi) &&
            out.back().w.hi.identical(E.lo))
            out.back().w.hi = E.hi;
        else
            out.push_back({us[0], E, comp});
    }
    return out;
}

inline std::vector<Rect> image_under_R(const Rect& r, Digit n)
{
    ExtendedReal N(n);
    std::vector<Rect> out;
    for (const auto& U : s_image(shift(r.u, -N)))
        for (const auto& W : s_image(shift(r.w, -N)))
            out.push_back({U, W, r.comp});
    return out;
}

} // namespace detail

inline RefinedPartition build_partition(const StepDomain& L, const ParamPair& P)
{
    RefinedPartition part;
    part.P = P;
    part.exact = L.exact;
    ExtendedReal top(0);
    for (const auto& r : L.rects)
        for (const auto& y : {r.w.lo, r.w.hi})
            if (!y.is_inf()) {
                ExtendedReal ay = y.sign() < 0 ? -y : y;
                if (ay > top)
                    top = ay;
            }
    Digit N = to_digit(top.floor()) + 2;
    // images of subdivided cells may have bounded height; every digit they reach is explicit
    for (int round = 0; round < 4; ++round) {
        Digit grown = N;
        for (Digit n = -N; n <= N; ++n) {
            if (n == 0)
                continue;
            for (const auto& c : detail::slice_digit(L, n, P))
                for (const auto& im : detail::image_under_R(c, n))
                    for (const auto& y : {im.w.lo, im.w.hi})
                        if (!y.is_inf()) {
                            ExtendedReal ay = y.sign() < 0 ? -y : y;
                            grown = std::max(grown, to_digit(ay.floor()) + 2);
                        }
        }
        if (grown == N)
            break;
        N = grown;
    }
    part.N = N;
    for (Digit n = -N; n <= N; ++n) {
        if (n == 0)
            continue;
        auto rs = detail::slice_digit(L, n, P);
        for (std::size_t i = 0; i < rs.size(); ++i)
            part.cells.push_back({n, rs.size() > 1 ? static_cast<int>(i + 1) : 0, 0, rs[i]});
    }
    for (int sg : {1, -1}) {
        Digit n = sg * (N + 1);
        auto rs = detail::slice_digit(L, n, P);
        if (rs.size() > 1)
            throw Error(Errc::inconsistent_domain, "tail cell is subdivided");
        if (!rs.empty())
            part.cells.push_back({n, 0, sg, rs[0]});
    }
    return part;
}

inline std::vector<std::size_t> RefinedPartition::cells_for(Digit n) const
{
    std::vector<std::size_t> out;
    bool is_tail = n > N || n < -N;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const Cell& c = cells[i];
        if (is_tail ? (c.tail == (n > 0 ? 1 : -1)) : (!c.tail && c.n == n))
            out.push_back(i);
    }
    return out;
}

inline std::optional<std::size_t> RefinedPartition::locate(const ExtendedReal& u, const ExtendedReal& w) const
{
    Digit n = floor_ab(w, P);
    std::optional<std::size_t> found;
    for (std::size_t i : cells_for(n)) {
        const Cell& c = cells[i];
        bool in = c.tail ? c.rect.u.contains(u) : c.rect.contains(u, w);
        if (in) {
            if (found)
                return std::nullopt;
            found = i;
        }
    }
    return found;
}

// entry (i, j) iff R(M_i) meets M_j in a transversal rectangle
inline TransitionMatrix transition_matrix(const RefinedPartition& part)
{
    const auto& cs = part.cells;
    TransitionMatrix tm;
    tm.adj.assign(cs.size(), std::vector<bool>(cs.size(), false));
    auto target = [&](const Cell& c, Digit shift_by) {
        Rect r = c.rect;
        if (c.tail && shift_by) {
            ExtendedReal s(shift_by);
            r.w = shift(r.w, s);
        }
        return r;
    };
    auto source_images = [&](const Cell& c, Digit shift_by) {
        Rect r = target(c, shift_by);
        return detail::image_under_R(r, c.n + (c.tail ? shift_by : 0));
    };
    // tail families are checked at two representatives; they must agree
    for (Digit extra : {Digit(0), Digit(1)}) {
        std::size_t touches = 0;
        std::vector<std::vector<bool>> adj(cs.size(), std::vector<bool>(cs.size(), false));
        for (std::size_t i = 0; i < cs.size(); ++i) {
            Digit si = cs[i].tail ? cs[i].tail * extra : 0;
            for (const auto& im : source_images(cs[i], si))
                for (std::size_t j = 0; j < cs.size(); ++j) {
                    Rect M = target(cs[j], cs[j].tail ? cs[j].tail * extra : 0);
                    bool wo = detail::interior_overlap(im.w, M.w), uo = detail::interior_overlap(im.u, M.u);
                    if (!wo || !uo) {
                        if (intersect(im.w, M.w) && intersect(im.u, M.u))
                            ++touches;
                        continue;
                    }
                    if (!detail::inside(M.w, im.w) || !detail::inside(im.u, M.u))
                        throw Error(Errc::not_markov, "R(" + cs[i].label() + ") meets " + cs[j].label() +
                                                          " non-transversally at " + part.P.str());
                    adj[i][j] = true;
                }
        }
        if (extra == 0) {
            tm.adj = adj;
            tm.edge_touches = touches;
        } else if (adj != tm.adj) {
            throw Error(Errc::not_markov, "tail family is not homogeneous at " + part.P.str());
        }
    }
    return tm;
}

inline bool is_admissible(const std::vector<Digit>& digits, const TransitionMatrix& tm, const RefinedPartition& part)
{
    for (std::size_t k = 1; k < digits.size(); ++k)
        if (digits[k] == 0)
            throw Error(Errc::malformed_sequence, "digit 0 at index " + std::to_string(k));
    if (digits.empty())
        return true;
    std::vector<std::size_t> cur = part.cells_for(digits[0]);
    for (std::size_t k = 1; k < digits.size() && !cur.empty(); ++k) {
        std::vector<std::size_t> next;
        for (std::size_t j : part.cells_for(digits[k]))
            for (std::size_t i : cur)
                if (tm(i, j)) {
                    next.push_back(j);
                    break;
                }
        cur = std::move(next);
    }
    return !cur.empty();
}

} // namespace abcf
