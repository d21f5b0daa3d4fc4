#pragma once

#include <string>
#include <vector>

#include "lca/unverifiable.hpp"

// Head-to-head comparison of the two regimes: attack duration and largest
// erasable head start for capacities {3, 99} and chain lengths
// {3, 5, 10, 20, 100}.

namespace lca {

struct ResultCell {
    double capacity = 0.0;
    int n_blocks = 0;
    bool verifiable = false;
    double t_star = 0.0;  // mining time of the n-block attack
    double a_max = 0.0;   // n_blocks - t_star
};

/// All 20 cells, ordered by capacity, then block count, verifiable first.
std::vector<ResultCell> comparison_table(const SolveOptions& solve_options = {});

/// CSV with header ma,n,regime,t_star,a_max.  Full 17-significant-digit
/// precision by default; `display_rounded` renders 2 decimals, half away
/// from zero.
std::string comparison_table_csv(bool display_rounded = false,
                                 const SolveOptions& solve_options = {});

}  // namespace lca
