// Acceptance-suite driver: runs the certified problem battery across both
// variants, the three relaxation regimes and every schedule kind, audits the
// per-iteration inequalities, and writes a markdown report.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "padmm/acceptance.hpp"

int main(int argc, char** argv) {
    std::uint64_t seed = 12345;
    std::string out_path = "acceptance_report.md";
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--seed" && i + 1 < argc) {
            seed = std::strtoull(argv[++i], nullptr, 10);
        } else if (arg == "--out" && i + 1 < argc) {
            out_path = argv[++i];
        } else {
            std::cerr << "usage: padmm-accept [--seed N] [--out report.md]\n";
            return 2;
        }
    }
    const padmm::SuiteReport rep = padmm::acceptance_suite(seed);
    std::cout << rep.markdown();
    std::ofstream f(out_path);
    f << rep.markdown();
    for (const auto& c : rep.criteria) {
        if (!c.pass) {
            std::cerr << "criterion " << c.id << " failed: " << c.name << "\n";
        }
    }
    return rep.all_pass() ? 0 : 1;
}
