#pragma once

#include <optional>
#include <vector>

#include "greenran/solution.hpp"

namespace greenran::gsbf {

/// Deactivation priority: perm[0] is the first RRH to switch off.
struct Ordering {
    std::vector<int> perm;
    std::vector<double> theta;  // indexed by RRH
};

/// Sorts RRHs by ascending criterion, lower index first on ties.
Ordering ordering_from_criterion(std::vector<double> theta);

/// theta_l = ||v_l|| * sqrt(eta_l / P_l^c).
Ordering ordering(const SystemConfig& cfg, const Beamformer& v);

/// Default stage-1 weights sqrt(P_l^c / eta_l).
std::vector<double> default_weights(const SystemConfig& cfg);

/// Weighted group-norm relaxation. Returns nullopt when the targets are unreachable.
std::optional<Beamformer> stage1_group_norm(const SystemConfig& cfg, const Channel& ch,
                                            const std::vector<double>& weights, int* solver_calls = nullptr);

/// The `count` hardest-to-remove RRHs: the last `count` entries of the ordering.
std::vector<int> prefix_active_set(const Ordering& order, int count);

/// Binary search for the smallest feasible prefix, then the cheapest prefix at or above it.
AlgoResult bisection_selection(const SystemConfig& cfg, const Channel& ch, const Ordering& order);

AlgoResult run_gsbf(const SystemConfig& cfg, const Channel& ch);

}  // namespace greenran::gsbf
