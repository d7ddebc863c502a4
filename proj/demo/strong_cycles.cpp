// (-4/5, 2/5): strong cycles at both ends, so no dual, yet the attractor, density
// and entropy are explicit. Then two pairs whose partition is not Markov.
#include <iostream>

#include "abcf/measure.hpp"
#include "abcf/sofic.hpp"

using namespace abcf;

int main()
{
    auto P = ParamPair::parse("-4/5", "2/5");
    auto [ca, cb] = detect_cycle(P);
    for (const auto* c : {&ca, &cb})
        std::cout << c->endpoint << ": " << cycle_status_name(c->status) << ", end " << c->cycle_end.str()
                  << ", upper " << word_str(c->upper_word) << ", lower " << word_str(c->lower_word) << '\n';

    auto D = build_domain(P);
    std::cout << "\nD has " << D.rects.size() << " rectangles\n";
    for (const auto& r : D.rects)
        std::cout << "  " << component_name(r.comp) << "  u " << r.u.str() << "  w " << r.w.str() << '\n';

    auto k = normalizer_K(P);
    auto h = density(P);
    std::cout << "\nK = " << k.K << " (closed form " << *k.closed << ", m = " << *k.m << ")\n";
    for (const auto& p : h.pieces)
        std::cout << "  " << p.str() << '\n';
    std::cout << "entropy " << entropy(k.K) << ", Rokhlin " << rokhlin_entropy(h) << '\n';
    std::cout << "log q_N / N at pi - 3, N = 10000: " << qn_growth(P, 3.14159265358979323846 - 3, 10000)
              << " (limit " << qn_limit(k.K) << ")\n";

    for (auto [a, b] : {std::pair{"-3/5", "7/10"}, std::pair{"-7/10", "1/2"}}) {
        auto Q = ParamPair::parse(a, b);
        auto G = Geometry::build(Q);
        try {
            transition_matrix(build_partition(G.Lambda, Q));
            std::cout << '\n' << Q.str() << ": Markov\n";
        } catch (const Error& e) {
            std::cout << '\n' << Q.str() << ": " << e.what() << '\n';
        }
    }
    return 0;
}
