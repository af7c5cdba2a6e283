#include "greenran/mip.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <queue>
#include <map>

#include <spdlog/spdlog.h>

#include "greenran/gsbf.hpp"

namespace greenran::mip {

namespace {

std::vector<int> mask_to_set(std::uint32_t mask, int num_rrh) {
    std::vector<int> out;
    for (int l = 0; l < num_rrh; ++l) {
        if ((mask >> l) & 1U) out.push_back(l);
    }
    return out;
}

double static_power(const SystemConfig& cfg, std::uint32_t mask) {
    double total = 0.0;
    for (int l = 0; l < cfg.num_rrh; ++l) {
        if ((mask >> l) & 1U) total += cfg.fronthaul_power_w[static_cast<std::size_t>(l)];
    }
    return total;
}

// Strict preference used by both exact searches.
bool better(const SupportSolution& a, const SupportSolution& incumbent, bool have_incumbent) {
    if (!have_incumbent) return true;
    if (a.power_w < incumbent.power_w - 1e-12) return true;
    if (a.power_w > incumbent.power_w + 1e-12) return false;
    return a.active < incumbent.active;
}

}  // namespace

AlgoResult enumerate_optimal(const SystemConfig& cfg, const Channel& ch) {
    cfg.validate();
    const int num_rrh = cfg.num_rrh;
    if (num_rrh > kMaxEnumerationRrh) {
        throw ConfigError("enumeration is limited to " + std::to_string(kMaxEnumerationRrh) + " RRHs");
    }

    struct Candidate {
        std::uint32_t mask;
        double floor;
        std::vector<int> set;
    };
    std::vector<Candidate> order;
    order.reserve(std::size_t{1} << num_rrh);
    for (std::uint32_t mask = 0; mask < (1U << num_rrh); ++mask) {
        order.push_back({mask, static_power(cfg, mask), mask_to_set(mask, num_rrh)});
    }
    std::sort(order.begin(), order.end(), [](const Candidate& a, const Candidate& b) {
        if (a.floor != b.floor) return a.floor < b.floor;
        return a.set < b.set;
    });

    std::vector<std::uint32_t> infeasible;  // maximal known-infeasible supports
    SupportSolution best;
    bool have_best = false;
    int calls = 0;
    for (const Candidate& cand : order) {
        if (have_best && cand.floor > best.power_w + 1e-9) break;
        const bool dominated = std::any_of(infeasible.begin(), infeasible.end(),
                                           [&](std::uint32_t m) { return (cand.mask & ~m) == 0; });
        if (dominated) continue;

        SupportSolution s = solve_fixed_support(cfg, ch, cand.set);
        ++calls;
        if (!s.feasible) {
            std::erase_if(infeasible, [&](std::uint32_t m) { return (m & ~cand.mask) == 0; });
            infeasible.push_back(cand.mask);
            continue;
        }
        if (better(s, best, have_best)) {
            best = std::move(s);
            have_best = true;
        }
    }

    AlgoResult r = have_best ? result_from_support(cfg, best) : infeasible_result(cfg);
    r.solver_calls = calls;
    return r;
}

namespace {

struct NodeRelaxation {
    bool feasible = false;
    double bound = 0.0;
    Eigen::VectorXd z;
};

struct QueueEntry {
    double bound;
    long seq;
    BnbNode node;
    Eigen::VectorXd z;
};

struct QueueOrder {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;
        return a.seq > b.seq;
    }
};

}  // namespace

BnbReport branch_and_bound_detailed(const SystemConfig& cfg, const Channel& ch, const BnbSettings& settings) {
    cfg.validate();
    if (settings.max_nodes < 1) throw ConfigError("max_nodes must be at least 1");
    const int num_rrh = cfg.num_rrh;

    int calls = 0;
    auto relax = [&](const BnbNode& node) {
        std::vector<conic::Pin> pins(static_cast<std::size_t>(num_rrh), conic::Pin::Free);
        for (int l : node.fixed_on) pins[static_cast<std::size_t>(l)] = conic::Pin::On;
        for (int l : node.fixed_off) pins[static_cast<std::size_t>(l)] = conic::Pin::Off;
        const conic::ConeProgram p = conic::build_relaxed(cfg, ch, pins);
        const conic::SolveResult r = solve_checked(p, {}, "node relaxation");
        ++calls;
        NodeRelaxation out;
        out.feasible = r.optimal();
        if (out.feasible) {
            out.bound = r.objective_value;
            out.z = conic::decode_selection(p, r.x).z;
        }
        return out;
    };

    SupportSolution incumbent;
    bool have_incumbent = false;
    std::map<std::vector<int>, bool> tried;
    auto try_support = [&](std::vector<int> support) {
        std::sort(support.begin(), support.end());
        auto it = tried.find(support);
        if (it != tried.end()) return it->second;
        SupportSolution s = solve_fixed_support(cfg, ch, support);
        ++calls;
        tried.emplace(support, s.feasible);
        const bool feasible = s.feasible;
        if (feasible && better(s, incumbent, have_incumbent)) {
            incumbent = std::move(s);
            have_incumbent = true;
        }
        return feasible;
    };

    BnbReport report;
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> queue;
    long seq = 0;

    BnbNode root;
    const NodeRelaxation root_relax = relax(root);
    if (!root_relax.feasible) {
        report.result = infeasible_result(cfg);
        report.result.solver_calls = calls;
        return report;
    }
    root.lower_bound = root_relax.bound;
    queue.push({root.lower_bound, seq++, root, root_relax.z});

    int expanded = 0;
    while (!queue.empty()) {
        QueueEntry entry = queue.top();
        queue.pop();
        if (have_incumbent && entry.bound >= incumbent.power_w - settings.prune_tol) continue;
        if (expanded >= settings.max_nodes) {
            report.node_limit_hit = true;
            break;
        }
        ++expanded;
        report.expanded.push_back(entry.node);

        std::vector<bool> pinned(static_cast<std::size_t>(num_rrh), false);
        for (int l : entry.node.fixed_on) pinned[static_cast<std::size_t>(l)] = true;
        for (int l : entry.node.fixed_off) pinned[static_cast<std::size_t>(l)] = true;

        std::vector<int> rounded;
        std::vector<int> support;
        int branch_var = -1;
        double branch_frac = -1.0;
        for (int l = 0; l < num_rrh; ++l) {
            const double zl = entry.z[l];
            if (zl >= 0.5) rounded.push_back(l);
            if (zl > settings.integrality_tol) support.push_back(l);
            if (pinned[static_cast<std::size_t>(l)]) continue;
            const double frac = std::min(zl, 1.0 - zl);
            if (frac > branch_frac) {
                branch_frac = frac;
                branch_var = l;
            }
        }
        try_support(support);
        const bool rounded_feasible = try_support(rounded);
        if (branch_var < 0) continue;
        if (branch_frac <= settings.integrality_tol && rounded_feasible) continue;

        for (const bool on : {false, true}) {
            BnbNode child = entry.node;
            child.depth = entry.node.depth + 1;
            (on ? child.fixed_on : child.fixed_off).push_back(branch_var);
            std::sort(child.fixed_on.begin(), child.fixed_on.end());
            std::sort(child.fixed_off.begin(), child.fixed_off.end());
            const NodeRelaxation cr = relax(child);
            if (!cr.feasible) continue;
            child.lower_bound = std::max(cr.bound, entry.bound);
            if (have_incumbent && child.lower_bound >= incumbent.power_w - settings.prune_tol) continue;
            queue.push({child.lower_bound, seq++, std::move(child), cr.z});
        }
    }

    report.result = have_incumbent ? result_from_support(cfg, incumbent) : infeasible_result(cfg);
    if (report.node_limit_hit && have_incumbent) report.result.status = AlgoStatus::OuterLimit;
    report.result.outer_iterations = expanded;
    report.result.solver_calls = calls;
    spdlog::debug("branch-and-bound expanded {} nodes with {} solver calls", expanded, calls);
    return report;
}

AlgoResult branch_and_bound(const SystemConfig& cfg, const Channel& ch, const BnbSettings& settings) {
    return branch_and_bound_detailed(cfg, ch, settings).result;
}

AlgoResult run_rmip(const SystemConfig& cfg, const Channel& ch) {
    cfg.validate();
    const conic::ConeProgram p = conic::build_relaxed(cfg, ch);
    const conic::SolveResult r = solve_checked(p, {}, "box relaxation");
    if (!r.optimal()) {
        AlgoResult out = infeasible_result(cfg);
        out.solver_calls = 1;
        return out;
    }
    const Eigen::VectorXd z = conic::decode_selection(p, r.x).z;
    AlgoResult out = gsbf::bisection_selection(cfg, ch, gsbf::ordering_from_criterion({z.data(), z.data() + z.size()}));
    out.solver_calls += 1;
    return out;
}

}  // namespace greenran::mip
