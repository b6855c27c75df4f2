#include <cstdint>
#include <iostream>

#include "paneitz_cli/acceptance.hpp"

int main() {
    constexpr std::uint64_t seed = 7;
    std::cout << "acceptance suite, n=5, seed=" << seed << std::endl;
    const auto criteria =
        paneitz::cli::run_acceptance(seed, [](const auto& c) { std::cout << paneitz::cli::summary_line(c) << std::endl; });
    int failed = 0;
    for (const auto& c : criteria) {
        failed += c.passed ? 0 : 1;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
