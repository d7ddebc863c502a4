// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <cstdio>
#include <iostream>

#include "abcf/acceptance.hpp"

int main()
{
    using namespace abcf::acceptance;
    int failed = 0;
    for (const auto& run : all()) {
        Result r = run(Options{});
        std::cout << line(r) << std::endl;
        failed += !r.pass;
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed"))
              << std::endl;
    return failed ? 1 : 0;
}
