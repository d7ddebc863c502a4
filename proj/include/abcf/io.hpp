#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "duality.hpp"
#include "measure.hpp"
#include "sofic.hpp"

namespace abcf::io {

using nlohmann::json;

inline std::string lo_str(const ExtendedReal& x) { return x.is_inf() ? "-inf" : x.str(); }
inline std::string hi_str(const ExtendedReal& x) { return x.is_inf() ? "+inf" : x.str(); }

inline json to_json(const ParamPair& P) { return {{"a", P.a.str()}, {"b", P.b.str()}}; }

inline json to_json(const Expansion& e, std::size_t n_convergents = 8)
{
    json j;
    j["head"] = e.head;
    j["tail"] = Expansion::tail_name(e.tail);
    j["period"] = e.period;
    if (!e.reason.empty())
        j["reason"] = e.reason;
    json cs = json::array();
    std::size_t n = std::min(n_convergents, e.available());
    if (n > 0)
        for (const auto& c : convergents(e, n - 1))
            cs.push_back(c.p.str() + "/" + c.q.str());
    j["convergents"] = cs;
    return j;
}

inline json to_json(const Rect& r)
{
    return {{"component", component_name(r.comp)},
            {"u", {lo_str(r.u.lo), hi_str(r.u.hi)}},
            {"w", {lo_str(r.w.lo), hi_str(r.w.hi)}}};
}

inline json to_json(const StepDomain& D)
{
    json rs = json::array();
    for (const auto& r : D.rects)
        rs.push_back(to_json(r));
    return {{"exact", D.exact}, {"note", D.note}, {"rects", rs}};
}

inline json to_json(const CycleInfo& c)
{
    return {{"endpoint", std::string(1, c.endpoint)},
            {"status", cycle_status_name(c.status)},
            {"m", c.m},
            {"k", c.k},
            {"cycle_end", c.cycle_end.str()},
            {"upper_word", word_str(c.upper_word)},
            {"lower_word", word_str(c.lower_word)}};
}

inline json to_json(const Geodesic& g) { return {{"u", g.u.str()}, {"w", g.w.str()}}; }

inline json to_json(const DensityPiece& p)
{
    return {{"l", p.l.str()}, {"r", p.r.str()}, {"form", p.plus ? "1/(x+c)" : "1/(c-x)"}, {"c", p.c.str()}};
}

// component,u_lo,u_hi,w_lo,w_hi
inline std::string domain_csv(const StepDomain& D)
{
    std::ostringstream os;
    os << "component,u_lo,u_hi,w_lo,w_hi\n";
    for (const auto& r : D.rects)
        os << component_name(r.comp) << ',' << lo_str(r.u.lo) << ',' << hi_str(r.u.hi) << ',' << lo_str(r.w.lo)
           << ',' << hi_str(r.w.hi) << '\n';
    return os.str();
}

inline std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// clipping to the viewport happens here only
inline std::string domain_svg(const StepDomain& D, const std::string& title, double V = 4.0)
{
    const double px = 600, s = px / (2 * V);
    auto X = [&](double u) { return (std::clamp(u, -V, V) + V) * s; };
    auto Y = [&](double w) { return (V - std::clamp(w, -V, V)) * s; };
    auto val = [&](const ExtendedReal& x, double inf_as) { return x.is_inf() ? inf_as : x.to_double(); };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px << "\" height=\"" << px << "\" viewBox=\"0 0 "
       << px << ' ' << px << "\">\n";
    os << "<title>" << title << "</title>\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"0\" y1=\"" << fmt(Y(0)) << "\" x2=\"" << px << "\" y2=\"" << fmt(Y(0))
       << "\" stroke=\"#999\" stroke-width=\"0.5\"/>\n";
    os << "<line x1=\"" << fmt(X(0)) << "\" y1=\"0\" x2=\"" << fmt(X(0)) << "\" y2=\"" << px
       << "\" stroke=\"#999\" stroke-width=\"0.5\"/>\n";
    for (const auto& r : D.rects) {
        double u0 = X(val(r.u.lo, -2 * V)), u1 = X(val(r.u.hi, 2 * V));
        double w0 = Y(val(r.w.hi, 2 * V)), w1 = Y(val(r.w.lo, -2 * V));
        const char* fill = r.comp == Component::upper ? "#4a7ab5" : "#c4663a";
        os << "<rect x=\"" << fmt(u0) << "\" y=\"" << fmt(w0) << "\" width=\"" << fmt(u1 - u0) << "\" height=\""
           << fmt(w1 - w0) << "\" fill=\"" << fill << "\" fill-opacity=\"0.5\" stroke=\"black\" stroke-width=\"0.5\">"
           << "<title>" << r.u.str() << " x " << r.w.str() << "</title></rect>\n";
    }
    os << "</svg>\n";
    return os.str();
}

// x,h,mu on a uniform grid of cell midpoints
inline std::string density_csv(const PiecewiseDensity& D, std::size_t n = 400)
{
    std::ostringstream os;
    os << "x,h,mu\n";
    double a = D.P.a.to_double(), b = D.P.b.to_double();
    for (std::size_t i = 0; i < n; ++i) {
        double x = a + (b - a) * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", x, D.h(x), D.mu(x));
        os << buf;
    }
    return os.str();
}

inline std::string matrix_csv(const RefinedPartition& part, const TransitionMatrix& tm)
{
    std::ostringstream os;
    os << "cell";
    for (const auto& c : part.cells)
        os << ',' << c.label();
    os << '\n';
    for (std::size_t i = 0; i < part.cells.size(); ++i) {
        os << part.cells[i].label();
        for (std::size_t j = 0; j < part.cells.size(); ++j)
            os << ',' << (tm(i, j) ? 1 : 0);
        os << '\n';
    }
    return os.str();
}

inline void write_file(const std::string& path, const std::string& body)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write " + path);
    f << body;
}

} // namespace abcf::io
