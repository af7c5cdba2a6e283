#include "greenran/solution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace greenran {

const char* to_string(AlgoStatus status) {
    switch (status) {
        case AlgoStatus::Converged: return "converged";
        case AlgoStatus::OuterLimit: return "outer_limit";
        case AlgoStatus::Infeasible: return "infeasible";
    }
    return "unknown";
}

namespace {
double safe_log10(double value) { return std::log10(std::max(value, std::numeric_limits<double>::min())); }
}  // namespace

double TraceRecord::tol1() const { return safe_log10(z_step); }
double TraceRecord::tol2() const { return safe_log10(v_step); }

conic::SolveResult solve_checked(const conic::ConeProgram& p, const conic::SolverSettings& settings,
                                 const std::string& context) {
    conic::SolveResult r = conic::solve(p, settings);
    if (r.status != conic::SolveStatus::Optimal && r.status != conic::SolveStatus::Infeasible) {
        throw SolverError(r.status, context);
    }
    return r;
}

SupportSolution solve_fixed_support(const SystemConfig& cfg, const Channel& ch, const std::vector<int>& active,
                                    const conic::SolverSettings& settings) {
    const conic::ConeProgram p = conic::build_fixed_support(cfg, ch, active);
    const conic::SolveResult r = solve_checked(p, settings, "fixed-support program");
    SupportSolution out;
    out.active = active;
    std::sort(out.active.begin(), out.active.end());
    out.feasible = r.optimal();
    if (out.feasible) {
        out.v = conic::decode_beamformer(cfg, p, r.x);
        out.power_w = network_power(cfg, Selection::from_active(cfg.num_rrh, out.active), out.v);
    }
    return out;
}

AlgoResult infeasible_result(const SystemConfig& cfg) {
    AlgoResult r;
    r.status = AlgoStatus::Infeasible;
    r.z_final = Selection::from_active(cfg.num_rrh, {});
    r.v_final = Beamformer::zeros(cfg);
    return r;
}

AlgoResult result_from_support(const SystemConfig& cfg, const SupportSolution& support) {
    if (!support.feasible) return infeasible_result(cfg);
    AlgoResult r;
    r.status = AlgoStatus::Converged;
    r.active_set = support.active;
    r.z_final = Selection::from_active(cfg.num_rrh, support.active);
    r.v_final = support.v;
    r.power_w = support.power_w;
    return r;
}

}  // namespace greenran
