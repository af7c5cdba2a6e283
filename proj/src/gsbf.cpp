#include "greenran/gsbf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <spdlog/spdlog.h>

namespace greenran::gsbf {

Ordering ordering_from_criterion(std::vector<double> theta) {
    Ordering out;
    out.perm.resize(theta.size());
    std::iota(out.perm.begin(), out.perm.end(), 0);
    std::stable_sort(out.perm.begin(), out.perm.end(),
                     [&](int a, int b) { return theta[static_cast<std::size_t>(a)] < theta[static_cast<std::size_t>(b)]; });
    out.theta = std::move(theta);
    return out;
}

Ordering ordering(const SystemConfig& cfg, const Beamformer& v) {
    std::vector<double> theta(static_cast<std::size_t>(cfg.num_rrh));
    for (int l = 0; l < cfg.num_rrh; ++l) {
        const auto i = static_cast<std::size_t>(l);
        theta[i] = v.rrh_norm(l) * std::sqrt(cfg.efficiency[i] / cfg.fronthaul_power_w[i]);
    }
    return ordering_from_criterion(std::move(theta));
}

std::vector<double> default_weights(const SystemConfig& cfg) {
    std::vector<double> w(static_cast<std::size_t>(cfg.num_rrh));
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::sqrt(cfg.fronthaul_power_w[i] / cfg.efficiency[i]);
    return w;
}

std::optional<Beamformer> stage1_group_norm(const SystemConfig& cfg, const Channel& ch,
                                            const std::vector<double>& weights, int* solver_calls) {
    const conic::ConeProgram p = conic::build_group_sparse(cfg, ch, weights);
    const conic::SolveResult r = solve_checked(p, {}, "group-sparse relaxation");
    if (solver_calls != nullptr) ++*solver_calls;
    if (!r.optimal()) return std::nullopt;
    return conic::decode_beamformer(cfg, p, r.x);
}

std::vector<int> prefix_active_set(const Ordering& order, int count) {
    const int total = static_cast<int>(order.perm.size());
    if (count < 0 || count > total) throw ConfigError("prefix size out of range");
    std::vector<int> active(order.perm.end() - count, order.perm.end());
    std::sort(active.begin(), active.end());
    return active;
}

AlgoResult bisection_selection(const SystemConfig& cfg, const Channel& ch, const Ordering& order) {
    const int num_rrh = cfg.num_rrh;
    if (static_cast<int>(order.perm.size()) != num_rrh) throw ConfigError("ordering size does not match num_rrh");
    {
        std::vector<int> check = order.perm;
        std::sort(check.begin(), check.end());
        for (int l = 0; l < num_rrh; ++l) {
            if (check[static_cast<std::size_t>(l)] != l) throw ConfigError("ordering is not a permutation");
        }
    }

    std::map<int, SupportSolution> cache;
    auto evaluate = [&](int count) -> const SupportSolution& {
        auto it = cache.find(count);
        if (it == cache.end()) {
            it = cache.emplace(count, solve_fixed_support(cfg, ch, prefix_active_set(order, count))).first;
        }
        return it->second;
    };

    if (!evaluate(num_rrh).feasible) {
        AlgoResult r = infeasible_result(cfg);
        r.solver_calls = static_cast<int>(cache.size());
        return r;
    }

    int lo = 0;
    int hi = num_rrh;
    while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (evaluate(mid).feasible) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    const int min_count = hi;

    int best = -1;
    for (int count = min_count; count <= num_rrh; ++count) {
        const SupportSolution& s = evaluate(count);
        if (!s.feasible) {
            spdlog::debug("prefix {} infeasible above the minimal feasible prefix {}", count, min_count);
            continue;
        }
        if (best < 0 || s.power_w < cache.at(best).power_w) best = count;
    }

    AlgoResult r = result_from_support(cfg, cache.at(best));
    r.solver_calls = static_cast<int>(cache.size());
    return r;
}

AlgoResult run_gsbf(const SystemConfig& cfg, const Channel& ch) {
    cfg.validate();
    int calls = 0;
    const std::optional<Beamformer> v = stage1_group_norm(cfg, ch, default_weights(cfg), &calls);
    if (!v) {
        AlgoResult r = infeasible_result(cfg);
        r.solver_calls = calls;
        return r;
    }
    AlgoResult r = bisection_selection(cfg, ch, ordering(cfg, *v));
    r.solver_calls += calls;
    return r;
}

}  // namespace greenran::gsbf
