#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "abcf/acceptance.hpp"
#include "abcf/io.hpp"

using namespace abcf;
using io::json;

namespace {

constexpr int exit_domain = 1, exit_verify = 2, exit_usage = 64;

struct Globals {
    std::string a, b;
    std::uint64_t seed = 1;
    std::size_t budget = 0; // 0: the command's default
    std::string format = "json";
};

struct VerificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ParamPair params(const Globals& g)
{
    if (g.a.empty() || g.b.empty())
        throw Error(Errc::invalid_params, "--a and --b are required");
    return ParamPair::parse(g.a, g.b);
}

std::size_t budget_or(const Globals& g, std::size_t dflt) { return g.budget ? g.budget : dflt; }

void emit(const json& j, const Globals& g)
{
    if (g.format == "text") {
        for (auto it = j.begin(); it != j.end(); ++it)
            std::cout << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << '\n';
    } else {
        std::cout << j.dump(2) << '\n';
    }
}

Geometry geometry(const ParamPair& P, const Globals& g, bool simulate = false)
{
    ApproxOptions opt;
    opt.seed = g.seed;
    if (simulate)
        return Geometry::from_domain(P, approx_domain(P, opt));
    Geometry G = Geometry::build(P, true, opt);
    if (!G.exact)
        std::cerr << "warning: no exact domain for " << P.str() << "; using the simulation oracle\n";
    return G;
}

// ---- commands ----

void cmd_expand(const Globals& g, const std::string& xs, std::size_t digits)
{
    auto P = params(g);
    ExtendedReal x = parse_real(xs);
    auto e = expand(x, P, budget_or(g, digits));
    json j = io::to_json(e);
    j["params"] = io::to_json(P);
    j["x"] = x.str();
    emit(j, g);
}

void cmd_domain(const Globals& g, bool simulate, const std::string& svg, const std::string& csv)
{
    auto P = params(g);
    json j;
    j["params"] = io::to_json(P);
    if (P.exact()) {
        auto [ca, cb] = detect_cycle(P, budget_or(g, default_orbit_budget));
        j["cycles"] = {io::to_json(ca), io::to_json(cb)};
    }
    Geometry G = geometry(P, g, simulate);
    j["domain"] = io::to_json(G.D);
    j["lambda"] = io::to_json(G.Lambda);
    j["seed"] = g.seed;
    if (!svg.empty())
        io::write_file(svg, io::domain_svg(G.D, "D" + P.str()));
    if (!csv.empty())
        io::write_file(csv, io::domain_csv(G.D));
    emit(j, g);
}

void cmd_code(const Globals& g, const std::string& us, const std::string& ws, std::size_t K)
{
    auto P = params(g);
    Geometry G = geometry(P, g);
    Geodesic gd{parse_real(us), parse_real(ws)};
    auto cw = coding_window(gd, G, K, budget_or(g, default_reduction_budget));
    json j;
    j["params"] = io::to_json(P);
    std::vector<Digit> seq(cw.past.rbegin(), cw.past.rend());
    seq.insert(seq.end(), cw.future.begin(), cw.future.end());
    j["digits"] = seq;
    j["zero_index"] = cw.past.size();
    j["reduced"] = io::to_json(cw.anchor);
    j["reduction_steps"] = cw.reduction_steps;
    try {
        auto z = cross_section_point(cw.anchor);
        j["cross_section"] = {{"x", z.x.str()}, {"y", z.y}, {"arc", arc_name(z.arc)}};
    } catch (const Error& e) {
        j["cross_section"] = {{"error", errc_name(e.code())}};
    }
    json rt = json::array();
    try {
        Geodesic h = cw.anchor;
        for (std::size_t k = 0; k < K; ++k) {
            Geodesic n = reduction_step(h, P).first;
            rt.push_back(return_time(h, n, P));
            h = n;
        }
        j["return_times"] = rt;
    } catch (const Error& e) {
        j["return_times"] = {{"error", errc_name(e.code())}, {"detail", e.what()}};
    }
    emit(j, g);
}

void cmd_dual(const Globals& g, bool verify, bool juxt, const std::string& us, const std::string& ws, std::size_t K)
{
    auto P = params(g);
    ApproxOptions opt;
    opt.seed = g.seed;
    auto rep = dual_report(P, opt);
    json j;
    j["params"] = io::to_json(P);
    j["has_dual"] = rep.has_dual;
    if (rep.strong_endpoint)
        j["strong_endpoint"] = std::string(1, *rep.strong_endpoint);
    if (rep.dual) {
        j["dual"] = io::to_json(*rep.dual);
        j["self_dual"] = rep.self_dual;
        j["approximate"] = rep.approximate;
    }
    bool failed = false;
    if (verify && rep.dual) {
        auto c = verify_duality(P, *rep.dual, opt);
        j["verify"] = {{"ok", c.ok}, {"certified", c.certified}, {"detail", c.detail}};
        if (c.witness)
            j["verify"]["witness"] = {c.witness->first.str(), c.witness->second.str()};
        failed = failed || !c.ok;
    }
    if (juxt) {
        if (!rep.dual)
            throw Error(Errc::domain_error, "no dual to juxtapose with");
        Geometry G = geometry(P, g);
        Geodesic gd{parse_real(us), parse_real(ws)};
        auto h = reduce(gd, G, budget_or(g, default_reduction_budget)).first;
        auto r = juxtaposition_check(h, G, *rep.dual, K);
        j["juxtapose"] = {{"ok", r.ok},
                          {"past", r.past},
                          {"dual_digits", r.dual_digits},
                          {"periodic_checked", r.periodic_checked},
                          {"detail", r.detail}};
        failed = failed || !r.ok;
    }
    emit(j, g);
    if (failed)
        throw VerificationFailure("duality check failed");
}

std::vector<Digit> parse_digits(const std::string& s)
{
    std::istringstream is(s);
    std::vector<Digit> out;
    std::string tok;
    while (is >> tok) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoll(tok, &used));
            if (used != tok.size())
                throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw Error(Errc::parse_error, "bad digit '" + tok + "'");
        }
    }
    return out;
}

void cmd_sofic(const Globals& g, const std::string& matrix, const std::string& check, bool has_check)
{
    auto P = params(g);
    Geometry G = geometry(P, g);
    auto part = build_partition(G.Lambda, G.P);
    auto tm = transition_matrix(part);
    json j;
    j["params"] = io::to_json(P);
    j["exact"] = part.exact;
    j["tail_from"] = part.N + 1;
    json cells = json::array();
    for (std::size_t i = 0; i < part.cells.size(); ++i) {
        const auto& c = part.cells[i];
        std::vector<std::string> to;
        for (std::size_t k = 0; k < part.cells.size(); ++k)
            if (tm(i, k))
                to.push_back(part.cells[k].label());
        cells.push_back({{"label", c.label()}, {"rect", io::to_json(c.rect)}, {"to", to}});
    }
    j["cells"] = cells;
    j["edge_touches"] = tm.edge_touches;
    if (has_check) {
        auto ds = parse_digits(check);
        j["check"] = {{"digits", ds}, {"admissible", is_admissible(ds, tm, part)}};
    }
    if (!matrix.empty())
        io::write_file(matrix, io::matrix_csv(part, tm));
    emit(j, g);
}

void cmd_measure(const Globals& g, const std::string& dens, bool want_entropy, bool want_rokhlin, std::size_t qn_n,
                 const std::string& xs)
{
    auto P = params(g);
    auto k = normalizer_K(P);
    json j;
    j["params"] = io::to_json(P);
    j["K"] = k.K;
    if (k.closed) {
        j["K_closed"] = *k.closed;
        j["m"] = *k.m;
    }
    std::optional<PiecewiseDensity> D;
    try {
        D = density(P);
        json ps = json::array();
        for (const auto& p : D->pieces)
            ps.push_back(io::to_json(p));
        j["density"] = ps;
    } catch (const Error& e) {
        if (e.code() != Errc::unsupported_case)
            throw;
        j["density"] = "marginal of nu over hat-Lambda (no closed form)";
    }
    if (want_entropy)
        j["entropy"] = entropy(k.K);
    if (want_rokhlin) {
        if (!D)
            throw Error(Errc::unsupported_case, "Rokhlin integral needs the closed-form density");
        j["rokhlin"] = rokhlin_entropy(*D);
    }
    if (qn_n) {
        double x;
        if (!xs.empty()) {
            x = parse_real(xs).to_double();
        } else {
            std::mt19937_64 rng(g.seed);
            x = std::uniform_real_distribution<double>(P.a.to_double(), P.b.to_double())(rng);
        }
        j["qn"] = {{"x", x}, {"N", qn_n}, {"growth", qn_growth(P, x, qn_n)}, {"limit", qn_limit(k.K)}};
    }
    if (!dens.empty()) {
        if (D) {
            io::write_file(dens, io::density_csv(*D));
        } else {
            // numerical marginal on the same grid
            auto H = hat_lambda(P);
            std::ostringstream os;
            os << "x,h,mu\n";
            double a = P.a.to_double(), b = P.b.to_double();
            for (int i = 0; i < 400; ++i) {
                double x = a + (b - a) * (i + 0.5) / 400, h = marginal_density(H, x);
                char buf[96];
                std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", x, h, h / k.K);
                os << buf;
            }
            io::write_file(dens, os.str());
        }
    }
    emit(j, g);
}

void cmd_verify(const Globals& g, const std::string& suite)
{
    auto ids = acceptance::suite(suite);
    if (ids.empty())
        throw Error(Errc::parse_error, "unknown suite '" + suite + "' (measure, attractor, coding, duality, sofic, all)");
    acceptance::Options o;
    o.seed = g.seed;
    if (!g.a.empty() || !g.b.empty())
        o.P = params(g);
    auto runs = acceptance::all();
    int failed = 0;
    for (int id : ids) {
        auto r = runs[static_cast<std::size_t>(id - 1)](o);
        std::cout << acceptance::line(r) << '\n';
        failed += !r.pass;
    }
    if (failed)
        throw VerificationFailure(std::to_string(failed) + " criteria failed");
}

void cmd_simulate(const Globals& g, std::size_t samples, std::size_t iterations, const std::string& svg,
                  const std::string& csv)
{
    auto P = params(g);
    ApproxOptions opt;
    opt.seed = g.seed;
    opt.samples = samples;
    opt.iterations = budget_or(g, iterations);
    auto D = approx_domain(P, opt);
    json j;
    j["params"] = io::to_json(P);
    j["seed"] = g.seed;
    j["samples"] = samples;
    j["iterations"] = opt.iterations;
    j["domain"] = io::to_json(D);
    try {
        auto E = build_domain(P);
        j["hausdorff_to_exact"] = boundary_hausdorff(D, E);
    } catch (const Error& e) {
        if (e.code() != Errc::unsupported_params)
            throw;
    }
    if (!svg.empty())
        io::write_file(svg, io::domain_svg(D, "simulated D" + P.str()));
    if (!csv.empty())
        io::write_file(csv, io::domain_csv(D));
    emit(j, g);
}

const std::set<std::string> commands = {"expand", "domain", "code", "dual", "sofic", "measure", "verify", "simulate"};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"abcf: (a,b)-continued fractions, attractors, coding and invariant measures"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--a", g.a, "parameter a (e.g. -4/5, (1-sqrt(5))/2, 0.3)");
    app.add_option("--b", g.b, "parameter b");
    app.add_option("--seed", g.seed, "seed for every random choice")->capture_default_str();
    app.add_option("--budget", g.budget, "step budget (digits, reduction steps, orbit steps)");
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();

    std::string x, u, w, svg, csv, matrix, check, dens, suite = "all";
    std::size_t digits = 40, window = 8, qn_n = 0, samples = 100000, iterations = 100;
    bool exact_flag = false, simulate_flag = false, verify_flag = false, juxt = false, ent = false, rok = false;

    auto* ex = app.add_subcommand("expand", "digits, period and convergents of x");
    ex->add_option("--x", x, "number to expand")->required();
    ex->add_option("--digits", digits, "maximum number of digits")->capture_default_str();

    auto* dom = app.add_subcommand("domain", "attractor D and Lambda");
    dom->add_flag("--exact", exact_flag, "exact construction (falls back to the oracle with a warning)");
    dom->add_flag("--simulate", simulate_flag, "simulation oracle only");
    dom->add_option("--svg", svg, "write D as SVG");
    dom->add_option("--csv", csv, "write D as CSV");

    auto* code = app.add_subcommand("code", "coding window of the geodesic (u, w)");
    code->add_option("--u", u)->required();
    code->add_option("--w", w)->required();
    code->add_option("--window", window, "K")->capture_default_str();
    code->add_flag("--json", [&](std::int64_t) { g.format = "json"; }, "same as --format json");

    auto* dual = app.add_subcommand("dual", "dual parameters");
    dual->add_flag("--verify", verify_flag, "check psi(D) against the dual domain");
    dual->add_flag("--juxtapose", juxt, "compare past digits with the dual expansion of 1/u");
    dual->add_option("--u", u);
    dual->add_option("--w", w);
    dual->add_option("--window", window, "K")->capture_default_str();

    auto* sof = app.add_subcommand("sofic", "refined partition and transition matrix");
    sof->add_option("--matrix", matrix, "write the matrix as CSV");
    auto* chk = sof->add_option("--check", check, "digit sequence to test, e.g. \"3 -2 4\"");

    auto* mea = app.add_subcommand("measure", "normalizer, density, entropy");
    mea->add_option("--density", dens, "write the density as CSV");
    mea->add_flag("--entropy", ent);
    mea->add_flag("--rokhlin", rok);
    mea->add_option("--qn", qn_n, "log q_N / N for N digits");
    mea->add_option("--x", x, "start point for --qn (default: seeded random)");

    auto* ver = app.add_subcommand("verify", "run acceptance suites");
    ver->add_option("--suite", suite, "measure, attractor, coding, duality, sofic, all")->capture_default_str();

    auto* sim = app.add_subcommand("simulate", "simulation oracle for D");
    sim->add_option("--samples", samples)->capture_default_str();
    sim->add_option("--iterations", iterations)->capture_default_str();
    sim->add_option("--svg", svg);
    sim->add_option("--csv", csv);

    if (argc > 1) {
        std::string first = argv[1];
        if (first.rfind("-", 0) != 0 && !commands.count(first)) {
            std::cerr << "unknown command '" << first << "'\n\n" << app.help();
            return exit_usage;
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (ex->parsed())
            cmd_expand(g, x, digits);
        else if (dom->parsed())
            cmd_domain(g, simulate_flag && !exact_flag, svg, csv);
        else if (code->parsed())
            cmd_code(g, u, w, window);
        else if (dual->parsed()) {
            if (juxt && (u.empty() || w.empty()))
                throw Error(Errc::invalid_params, "--juxtapose needs --u and --w");
            cmd_dual(g, verify_flag, juxt, u, w, window);
        } else if (sof->parsed())
            cmd_sofic(g, matrix, check, chk->count() > 0);
        else if (mea->parsed())
            cmd_measure(g, dens, ent, rok, qn_n, x);
        else if (ver->parsed())
            cmd_verify(g, suite);
        else if (sim->parsed())
            cmd_simulate(g, samples, iterations, svg, csv);
    } catch (const VerificationFailure& e) {
        std::cerr << "verification failed: " << e.what() << '\n';
        return exit_verify;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_domain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_domain;
    }
    return 0;
}
