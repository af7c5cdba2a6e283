#pragma once

#include <vector>

#include "greenran/solution.hpp"

namespace greenran::mip {

/// Largest RRH count accepted by the exhaustive search.
inline constexpr int kMaxEnumerationRrh = 16;

/// Exhaustive search over all supports, in nondecreasing fronthaul power.
/// Ties go to the lexicographically smallest sorted index list.
AlgoResult enumerate_optimal(const SystemConfig& cfg, const Channel& ch);

struct BnbSettings {
    int max_nodes = 100000;
    double prune_tol = 1e-9;
    double integrality_tol = 1e-7;  // relaxations within this of binary close the node
};

struct BnbNode {
    std::vector<int> fixed_on;
    std::vector<int> fixed_off;
    double lower_bound = 0.0;
    int depth = 0;
};

struct BnbReport {
    AlgoResult result;
    std::vector<BnbNode> expanded;  // in expansion order
    bool node_limit_hit = false;
};

/// Best-first branch-and-bound on the box relaxation, branching on the most
/// fractional selection variable (lowest index on ties). Reaching max_nodes
/// returns the incumbent with status OuterLimit.
BnbReport branch_and_bound_detailed(const SystemConfig& cfg, const Channel& ch, const BnbSettings& settings = {});

AlgoResult branch_and_bound(const SystemConfig& cfg, const Channel& ch, const BnbSettings& settings = {});

/// Box relaxation, ordering by relaxed selection ascending, then bisection selection.
AlgoResult run_rmip(const SystemConfig& cfg, const Channel& ch);

}  // namespace greenran::mip
