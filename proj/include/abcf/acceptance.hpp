#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "duality.hpp"
#include "measure.hpp"
#include "sofic.hpp"

namespace abcf::acceptance {

struct Options {
    std::uint64_t seed = 1;
    std::optional<ParamPair> P; // overrides the pinned parameters where a criterion allows it
};

struct Result {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
    double limit = 0; // wall-clock budget in seconds
};

namespace detail {

inline ParamPair pp(const char* a, const char* b) { return ParamPair::parse(a, b); }

inline std::string num(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// irrational endpoints in Q(sqrt d); the parameter field is used when it has one
inline Geodesic random_geodesic(std::mt19937_64& rng, const ParamPair& P)
{
    static const long long ds[] = {2, 3, 5, 6, 7, 11, 13};
    long long d = P.field();
    if (d == 0)
        d = ds[rng() % 7];
    std::uniform_int_distribution<long long> c(-40, 40), r(1, 30), k(1, 9);
    return {Surd::make(c(rng), k(rng), r(rng), d), Surd::make(c(rng), k(rng), r(rng), d)};
}

// a field holding none of the corners of D, so samples never sit on its boundary
inline long long field_off_corners(const ParamPair& P, std::mt19937_64& rng)
{
    std::vector<long long> used;
    for (const auto& r : build_domain(P).rects)
        for (const auto* e : {&r.u.lo, &r.u.hi, &r.w.lo, &r.w.hi})
            if (!e->is_inf() && e->field())
                used.push_back(e->field());
    std::vector<long long> ok;
    for (long long d : {2, 3, 5, 6, 7, 11, 13})
        if (std::find(used.begin(), used.end(), d) == used.end())
            ok.push_back(d);
    return ok[rng() % ok.size()];
}

inline Geodesic random_reduced(std::mt19937_64& rng, const Geometry& G)
{
    for (;;) {
        Geodesic g = random_geodesic(rng, G.P);
        if (g.u == g.w)
            continue;
        try {
            auto h = reduce(g, G, 200).first;
            if (!h.u.is_zero())
                return h;
        } catch (const Error&) {
        }
    }
}

inline bool on_boundary(const StepDomain& D, const ExtendedReal& u, const ExtendedReal& w)
{
    for (const auto& r : D.rects)
        for (const auto* e : {&r.u.lo, &r.u.hi})
            if (!e->is_inf() && *e == u)
                return true;
    for (const auto& r : D.rects)
        for (const auto* e : {&r.w.lo, &r.w.hi})
            if (!e->is_inf() && *e == w)
                return true;
    return false;
}

inline Result timed(int id, std::string name, double limit, const std::function<bool(std::string&)>& body)
{
    Result r;
    r.id = id;
    r.name = std::move(name);
    r.limit = limit;
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body(r.detail);
    } catch (const std::exception& e) {
        r.detail += std::string(" exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.pass = ok && r.seconds < limit;
    if (ok && !r.pass)
        r.detail += " (over the time budget)";
    return r;
}

} // namespace detail

inline const ParamPair& fifths()
{
    static const ParamPair P = ParamPair::parse("-4/5", "2/5");
    return P;
}

// 1: rectangle-sum K over hat-Lambda = log(14/5)
inline Result normalizer(const Options& o = {})
{
    return detail::timed(1, "normalizer K vs closed form", 1.0, [&](std::string& d) {
        ParamPair P = o.P.value_or(fifths());
        auto H = hat_lambda(P);
        auto k = normalizer_K(P, H);
        if (!k.closed) {
            d = "no closed form for " + P.str();
            return false;
        }
        double want = P == fifths() ? std::log(14.0 / 5) : *k.closed;
        double err = std::fabs(k.K - want);
        d = "K = " + detail::num(k.K) + ", |K - closed| = " + detail::num(err) + " (tol 1e-10)";
        return H.exact && err < 1e-10;
    });
}

// 2: transfer operator fixes the density; a perturbed density does not
inline Result transfer(const Options& o = {})
{
    return detail::timed(2, "transfer-operator invariance", 5.0, [&](std::string& d) {
        ParamPair P = o.P.value_or(fifths());
        auto D = density(P);
        std::mt19937_64 rng(o.seed);
        std::uniform_real_distribution<double> U(P.a.to_double(), P.b.to_double());
        double worst = 0;
        for (int n = 0; n < 1000;) {
            try {
                worst = std::max(worst, transfer_check(D, U(rng)));
                ++n;
            } catch (const Error& e) {
                if (e.code() != Errc::ill_conditioned_point)
                    throw;
            }
        }
        auto E = D;
        E.pieces[0].c = E.pieces[0].c + ExtendedReal::rational(1, 1000);
        double bad = 0;
        for (int n = 0; n < 1000;) {
            try {
                bad = std::max(bad, transfer_check(E, U(rng)));
                ++n;
            } catch (const Error& e) {
                if (e.code() != Errc::ill_conditioned_point)
                    throw;
            }
        }
        d = "max residual " + detail::num(worst) + " (tol 1e-9); perturbed " + detail::num(bad) + " (need >= 1e-4)";
        return worst < 1e-9 && bad >= 1e-4;
    });
}

// 3: Rokhlin integral = pi^2/(3K)
inline Result rokhlin(const Options& o = {})
{
    return detail::timed(3, "Rokhlin entropy", 5.0, [&](std::string& d) {
        ParamPair P = o.P.value_or(fifths());
        auto D = density(P);
        double r = rokhlin_entropy(D), h = entropy(D.K);
        d = "-2 int log|x| dmu = " + detail::num(r) + ", pi^2/(3K) = " + detail::num(h) +
            ", diff " + detail::num(std::fabs(r - h)) + " (tol 1e-6)";
        return std::fabs(r - h) < 1e-6;
    });
}

// 4: mean log q_N / N over 100 seeded floats
inline Result qn(const Options& o = {})
{
    return detail::timed(4, "q_n growth", 30.0, [&](std::string& d) {
        ParamPair P = o.P.value_or(fifths());
        double K = normalizer_K(P).K, lim = qn_limit(K);
        std::mt19937_64 rng(o.seed);
        std::uniform_real_distribution<double> U(P.a.to_double(), P.b.to_double());
        double s = 0;
        int n = 0;
        while (n < 100) {
            try {
                s += qn_growth(P, U(rng), 10000);
                ++n;
            } catch (const Error& e) {
                if (e.code() != Errc::rational_input)
                    throw;
            }
        }
        double mean = s / n, rel = std::fabs(mean - lim) / lim;
        d = "mean " + detail::num(mean) + " vs pi^2/(6K) = " + detail::num(lim) + ", rel " + detail::num(rel) +
            " (tol 1%)";
        return rel < 0.01;
    });
}

// 5: trapping in D and exact forward/backward round trips
inline Result trapping(const Options& o = {})
{
    return detail::timed(5, "attractor trapping and bijectivity", 30.0, [&](std::string& d) {
        ParamPair P = o.P.value_or(fifths());
        auto D = build_domain(P);
        const double a = P.a.to_double(), b = P.b.to_double();
        std::mt19937_64 rng(o.seed);
        std::uniform_real_distribution<double> U(-1000, 1000);
        const int n = 10000;
        int trapped = 0;
        for (int i = 0; i < n; ++i) {
            double u = U(rng), w = U(rng);
            for (int step = 0; step <= 200; ++step) {
                if (contains(D, u, w)) {
                    ++trapped;
                    break;
                }
                if (w < a || w >= b) {
                    // the whole run of translations counts as one step
                    double k = w < a ? std::ceil(a - w) : -(std::floor(w - b) + 1);
                    u += k;
                    w += k;
                } else {
                    u = -1 / u;
                    w = -1 / w;
                }
            }
        }
        // round trips on exact points of D
        std::uniform_int_distribution<long long> t(1, 999999);
        int tried = 0, ok = 0;
        while (tried < 2000) {
            const Rect& r = D.rects[rng() % D.rects.size()];
            auto pick = [&](const Interval& I) {
                ExtendedReal lo = I.lo.is_inf() ? I.hi - ExtendedReal(3) : I.lo;
                ExtendedReal hi = I.hi.is_inf() ? I.lo + ExtendedReal(3) : I.hi;
                return lo + (hi - lo) * ExtendedReal::rational(t(rng), 1000000);
            };
            ExtendedReal u = pick(r.u), w = pick(r.w);
            if (u == w || detail::on_boundary(D, u, w))
                continue;
            auto [u1, w1] = natural_extension_step(u, w, P);
            if (u1.is_inf() || w1.is_inf() || detail::on_boundary(D, u1, w1))
                continue;
            ++tried;
            if (!contains(D, u1, w1))
                continue;
            int in_d = 0;
            bool back = false;
            for (auto& c : natural_extension_preimages(u1, w1, P))
                if (!c.first.is_inf() && contains(D, c.first, c.second)) {
                    ++in_d;
                    back = back || (c.first == u && c.second == w);
                }
            ok += in_d == 1 && back;
        }
        d = "trapped " + std::to_string(trapped) + "/" + std::to_string(n) + " (need 99.9%); round trips " +
            std::to_string(ok) + "/" + std::to_string(tried);
        return trapped * 1000 >= n * 999 && ok == tried;
    });
}

// 6: x and A.x share a tail
inline Result tail_property(const Options& o = {})
{
    return detail::timed(6, "tail property", 30.0, [&](std::string& d) {
        const std::vector<ParamPair> ps = o.P ? std::vector<ParamPair>{*o.P}
                                              : std::vector<ParamPair>{fifths(), detail::pp("-1/2", "1/2"),
                                                                       detail::pp("-1", "0"), detail::pp("-3/8", "2/3")};
        std::mt19937_64 rng(o.seed);
        std::uniform_int_distribution<int> len(1, 8), pw(-4, 4);
        int good = 0;
        const int n = 200;
        for (int i = 0; i < n; ++i) {
            const ParamPair& P = ps[i % ps.size()];
            std::uniform_int_distribution<long long> c(-40, 40), r(1, 30), k(1, 9);
            ExtendedReal x = Surd::make(c(rng), k(rng), r(rng), detail::field_off_corners(P, rng));
            UnimodularMap A;
            for (int k = len(rng); k > 0; --k)
                A = A * UnimodularMap::T(pw(rng)) * UnimodularMap::S();
            ExtendedReal y = A(x);
            auto ex = expand(x, P, 5000), ey = expand(y, P, 5000);
            good += common_tail(ex, ey, 30, default_reduction_budget).has_value();
        }
        d = std::to_string(good) + "/" + std::to_string(n) + " pairs share a 30-digit tail";
        return good == n;
    });
}

// 7: coding windows conjugate R to the shift
inline Result shift_conjugacy(const Options& o = {})
{
    return detail::timed(7, "shift conjugacy", 10.0, [&](std::string& d) {
        const std::vector<ParamPair> ps = o.P ? std::vector<ParamPair>{*o.P}
                                              : std::vector<ParamPair>{fifths(), detail::pp("-1/2", "1/2"),
                                                                       detail::pp("-1", "1"), detail::pp("-1/2", "3/2")};
        std::mt19937_64 rng(o.seed);
        const std::size_t K = 8;
        int good = 0;
        const int n = 1000;
        for (int i = 0; i < n; ++i) {
            auto G = Geometry::build(ps[i % ps.size()], false);
            Geodesic g = detail::random_reduced(rng, G);
            auto c0 = coding_window(g, G, K);
            auto c1 = coding_window(reduction_step(g, G.P).first, G, K);
            bool same = true;
            for (long long k = -static_cast<long long>(K); k < static_cast<long long>(K); ++k)
                same = same && c1.at(k) == c0.at(k + 1);
            good += same;
        }
        d = std::to_string(good) + "/" + std::to_string(n) + " windows shift exactly";
        return good == n;
    });
}

// 8: self-dual pairs, the Hurwitz pair and juxtaposition
inline Result duality(const Options& o = {})
{
    return detail::timed(8, "duality suite", 30.0, [&](std::string& d) {
        bool ok = true;
        std::ostringstream os;
        for (auto [a, b] : {std::pair{"-1", "0"}, std::pair{"-1", "1"}, std::pair{"(1-sqrt(5))/2", "(3-sqrt(5))/2"},
                            std::pair{"-3/8", "2/3"}}) {
            auto P = detail::pp(a, b);
            auto r = dual_report(P);
            bool self = r.dual && r.self_dual && verify_duality(P, P).certified;
            ok = ok && self;
            if (!self)
                os << P.str() << " not verified self-dual; ";
        }
        auto H = detail::pp("-1/2", "1/2"), Gd = detail::pp("(1-sqrt(5))/2", "(sqrt(5)-1)/2");
        auto rh = dual_report(H);
        bool pair = rh.dual && *rh.dual == Gd && verify_duality(H, Gd).certified && verify_duality(Gd, H).certified;
        ok = ok && pair;
        if (!pair)
            os << "Hurwitz pair not verified; ";
        auto G = Geometry::build(H);
        std::mt19937_64 rng(o.seed);
        int good = 0, n = 200;
        std::uniform_int_distribution<long long> c(-40, 40), r(1, 30), k(1, 9);
        for (int i = 0; i < n;) {
            // Q(sqrt5) samples hit the corners of the Hurwitz domain
            long long f = i % 2 ? 2 : 3;
            Geodesic g{Surd::make(c(rng), k(rng), r(rng), f), Surd::make(c(rng), k(rng), r(rng), f)};
            if (g.u == g.w)
                continue;
            Geodesic h;
            try {
                h = reduce(g, G, 200).first;
            } catch (const Error&) {
                continue;
            }
            if (h.u.is_zero())
                continue;
            good += juxtaposition_check(h, G, Gd, 15).ok;
            ++i;
        }
        ok = ok && good == n;
        os << "juxtaposition " << good << "/" << n;
        d = os.str();
        return ok;
    });
}

// 9: transversality, observed windows, classical full shift
inline Result sofic(const Options& o = {})
{
    return detail::timed(9, "sofic suite", 60.0, [&](std::string& d) {
        ParamPair P = o.P.value_or(detail::pp("-1/2", "1/2"));
        if (!has_dual(P)) {
            d = P.str() + " has no dual";
            return false;
        }
        auto G = Geometry::build(P, false);
        auto part = build_partition(G.Lambda, G.P);
        auto tm = transition_matrix(part); // throws not-markov on a non-transversal meeting
        std::mt19937_64 rng(o.seed);
        int good = 0, n = 10000;
        for (int i = 0; i < n; ++i) {
            Geodesic g = detail::random_reduced(rng, G);
            auto c = part.locate(g.u, g.w);
            bool ok = c.has_value();
            for (int k = 0; k < 8 && ok; ++k) {
                g = reduction_step(g, G.P).first;
                auto e = part.locate(g.u, g.w);
                ok = e && tm(*c, *e);
                c = e;
            }
            good += ok;
        }
        auto C = Geometry::build(detail::pp("-1", "0"), false);
        auto cp = build_partition(C.Lambda, C.P);
        auto ct = transition_matrix(cp);
        bool full = true;
        for (std::size_t i = 0; i < cp.cells.size(); ++i) {
            full = full && cp.cells[i].n >= 2 && cp.cells[i].sub == 0;
            for (std::size_t j = 0; j < cp.cells.size(); ++j)
                full = full && ct(i, j);
        }
        d = std::to_string(part.cells.size()) + " cells, " + std::to_string(good) + "/" + std::to_string(n) +
            " windows follow the matrix; classical full shift " + (full ? "yes" : "no");
        return good == n && full;
    });
}

// 10: reduced geodesics meet the cross-section
inline Result cross_section(const Options& o = {})
{
    return detail::timed(10, "cross-section coverage", 30.0, [&](std::string& d) {
        std::mt19937_64 rng(o.seed);
        int fails = 0, total = 0;
        std::ostringstream os;
        for (auto [a, b] : {std::pair{"-1/2", "1/2"}, std::pair{"-1/2", "3/2"}, std::pair{"-3/2", "1/2"}}) {
            auto G = Geometry::build(detail::pp(a, b), false);
            bool inner = G.P.a >= ExtendedReal(-1) && G.P.b <= ExtendedReal(1);
            int f = 0;
            for (int i = 0; i < 10000; ++i) {
                Geodesic g = detail::random_reduced(rng, G);
                try {
                    auto z = cross_section_point(g);
                    f += inner && z.arc != Arc::C;
                } catch (const Error&) {
                    ++f;
                }
                ++total;
            }
            fails += f;
            os << G.P.str() << ": " << f << " misses; ";
        }
        os << total << " geodesics";
        d = os.str();
        return fails == 0;
    });
}

// 11: return times telescope on periodic orbits; Monte Carlo K * int g drho
inline Result return_times(const Options& o = {})
{
    return detail::timed(11, "return-time telescoping", 60.0, [&](std::string& d) {
        ParamPair P = o.P.value_or(fifths());
        auto G = Geometry::build(P);
        std::mt19937_64 rng(o.seed);
        std::uniform_int_distribution<int> len(1, 5), pw(2, 6), sg(0, 1);
        int done = 0;
        double worst = 0;
        while (done < 100) {
            UnimodularMap A;
            for (int k = len(rng); k > 0; --k)
                A = A * UnimodularMap::T(sg(rng) ? pw(rng) : -pw(rng)) * UnimodularMap::S();
            bigint tr = A.trace();
            if (tr * tr <= 4)
                continue;
            std::vector<Geodesic> cyc;
            try {
                cyc = reduced_cycle(word_axis(A), G, 2000);
            } catch (const Error&) {
                continue;
            }
            double sum = 0, logs = 0;
            for (std::size_t k = 0; k < cyc.size(); ++k) {
                sum += return_time(cyc[k], cyc[(k + 1) % cyc.size()], G.P);
                logs += 2 * std::log(std::fabs(cyc[k].w.to_double()));
            }
            worst = std::max(worst, std::fabs(sum - logs) / std::max(1.0, logs));
            ++done;
        }
        // int g drho over Lambda, sampled through hat-Lambda: (x, y) -> (u, w) = (y, -1/x)
        auto H = hat_lambda_of(G.D, P);
        double K = 0;
        std::vector<double> mass;
        for (const auto& r : H.rects) {
            mass.push_back(rect_mass(r));
            K += mass.back();
        }
        std::discrete_distribution<std::size_t> pick(mass.begin(), mass.end());
        const int n = 200000;
        double acc = 0;
        for (int i = 0; i < n;) {
            // rectangle by nu-mass, point uniform inside, reweighted by the density
            const Rect& r = H.rects[pick(rng)];
            double x1 = r.u.lo.to_double(), x2 = r.u.hi.to_double(), y1 = r.w.lo.to_double(), y2 = r.w.hi.to_double();
            double x = std::uniform_real_distribution<double>(x1, x2)(rng);
            double y = std::uniform_real_distribution<double>(y1, y2)(rng);
            if (x == 0 || std::fabs(y) >= 1)
                continue;
            double wgt = (x2 - x1) * (y2 - y1) / ((1 + x * y) * (1 + x * y)) / rect_mass(x1, x2, y1, y2);
            Geodesic g{ExtendedReal(y), ExtendedReal(-1 / x)};
            Geodesic h = reduction_step(g, P).first;
            acc += wgt * return_time(g, h, P);
            ++i;
        }
        double integral = acc / n * K; // K times the mean of g under the normalized measure
        double target = std::numbers::pi * std::numbers::pi / 3, rel = std::fabs(integral - target) / target;
        d = std::to_string(done) + " periodic orbits, worst telescoping error " + detail::num(worst) +
            " (tol 1e-10); soft check K int g drho_norm = " + detail::num(integral) + " vs pi^2/3, rel " +
            detail::num(rel) + " (tol 5%)";
        return worst < 1e-10 && rel < 0.05;
    });
}

inline std::vector<std::function<Result(const Options&)>> all()
{
    return {normalizer, transfer, rokhlin, qn, trapping, tail_property, shift_conjugacy, duality, sofic,
            cross_section, return_times};
}

// verify suites: which criteria each runs
inline std::vector<int> suite(const std::string& name)
{
    if (name == "measure")
        return {1, 2, 3, 4};
    if (name == "attractor")
        return {5};
    if (name == "coding")
        return {6, 7, 10, 11};
    if (name == "duality")
        return {8};
    if (name == "sofic")
        return {9};
    if (name == "all")
        return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    return {};
}

inline std::string line(const Result& r)
{
    std::ostringstream os;
    os << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail << " ("
       << detail::num(r.seconds) << " s, limit " << r.limit << " s)";
    return os.str();
}

} // namespace abcf::acceptance
