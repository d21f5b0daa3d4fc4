#include "lca/table.hpp"

#include <cmath>
#include <cstdio>

#include "lca/io.hpp"
#include "lca/verifiable.hpp"

namespace lca {

std::vector<ResultCell> comparison_table(const SolveOptions& solve_options) {
    const double capacities[] = {3.0, 99.0};
    const int lengths[] = {3, 5, 10, 20, 100};

    std::vector<ResultCell> cells;
    cells.reserve(20);
    for (double ma : capacities) {
        for (int n : lengths) {
            ResultCell v;
            v.capacity = ma;
            v.n_blocks = n;
            v.verifiable = true;
            v.t_star = attack_duration(MiningPower(ma), n).value;
            v.a_max = static_cast<double>(n) - v.t_star;
            cells.push_back(v);

            ResultCell u;
            u.capacity = ma;
            u.n_blocks = n;
            u.verifiable = false;
            u.t_star =
                unverifiable_objective(solve_optimal_reports(n, solve_options), MiningPower(ma))
                    .value;
            u.a_max = static_cast<double>(n) - u.t_star;
            cells.push_back(u);
        }
    }
    return cells;
}

namespace {

std::string round2(double v) {
    // Half away from zero, rendered with exactly two decimals.
    const double r = std::floor(std::abs(v) * 100.0 + 0.5) / 100.0;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", std::copysign(r, v));
    return buf;
}

}  // namespace

std::string comparison_table_csv(bool display_rounded, const SolveOptions& solve_options) {
    std::string out = "ma,n,regime,t_star,a_max\n";
    for (const ResultCell& c : comparison_table(solve_options)) {
        out += format_double(c.capacity);
        out += ',';
        out += std::to_string(c.n_blocks);
        out += ',';
        out += c.verifiable ? "verifiable" : "unverifiable";
        out += ',';
        out += display_rounded ? round2(c.t_star) : format_double(c.t_star);
        out += ',';
        out += display_rounded ? round2(c.a_max) : format_double(c.a_max);
        out += '\n';
    }
    return out;
}

}  // namespace lca
