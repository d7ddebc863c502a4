// Nearest-integer expansions and their dual: reflect the attractor, compare,
// then read past digits of a coded geodesic as a dual expansion.
#include <iostream>

#include "abcf/duality.hpp"

using namespace abcf;

static void show(const char* title, const StepDomain& D)
{
    std::cout << title << " (" << D.note << ")\n";
    for (const auto& r : D.rects)
        std::cout << "  " << component_name(r.comp) << "  u " << r.u.str() << "  w " << r.w.str() << '\n';
}

int main()
{
    auto H = ParamPair::parse("-1/2", "1/2");
    auto rep = dual_report(H);
    std::cout << "dual of " << H.str() << " is " << rep.dual->str() << "\n\n";

    show("D for the nearest-integer pair", build_domain(H));
    show("psi(D)", reflect_psi(build_domain(H)));
    show("D for the dual pair", build_domain(*rep.dual));

    auto c = verify_duality(H, *rep.dual);
    std::cout << "\nverify: " << (c.ok ? "ok" : "FAILED") << ", " << c.detail << "\n\n";

    // x = sqrt(2) - 1 with a past from u = -sqrt(3)/3
    auto G = Geometry::build(H);
    Geodesic g{parse_real("-sqrt(3)/3"), parse_real("sqrt(2)-1")};
    auto h = reduce(g, G).first;
    auto j = juxtaposition_check(h, G, *rep.dual, 12);
    std::cout << "reduced geodesic " << h.str() << '\n';
    std::cout << "past digits       ";
    for (auto d : j.past)
        std::cout << ' ' << d;
    std::cout << "\ndual digits of 1/u";
    for (auto d : j.dual_digits)
        std::cout << ' ' << d;
    std::cout << '\n' << (j.ok ? "they agree" : "they differ") << '\n';
    return c.ok && j.ok ? 0 : 1;
}
