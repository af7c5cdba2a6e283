#include "greenran/l2box.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "greenran/gsbf.hpp"

namespace greenran::l2box {

void L2BoxSettings::validate() const {
    if (!(eps1 > 0.0) || !(eps2 > 0.0) || !(eps3 > 0.0)) throw ConfigError("l2box tolerances must be positive");
    if (!(lambda0 > 0.0)) throw ConfigError("lambda0 must be positive");
    if (!(alpha0 > 0.0)) throw ConfigError("alpha0 must be positive");
    if (max_outer < 1) throw ConfigError("max_outer must be at least 1");
    if (max_inner < 1) throw ConfigError("max_inner must be at least 1");
}

double lagrangian(const SystemConfig& cfg, const Selection& z, const Beamformer& v, double lambda) {
    return network_power(cfg, z, v) + lambda * sphere_residual(z);
}

double dual_step(double lambda, const Eigen::VectorXd& z, double alpha) {
    if (!(alpha > 0.0)) throw ConfigError("dual step size must be positive");
    return lambda + alpha * sphere_residual(z);
}

InitResult initialize(const SystemConfig& cfg, const Channel& ch) {
    const conic::ConeProgram p = conic::build_relaxed(cfg, ch);
    const conic::SolveResult r = solve_checked(p, {}, "box relaxation");
    InitResult out;
    out.feasible = r.optimal();
    if (out.feasible) {
        out.start.z = conic::decode_selection(p, r.x);
        out.start.v = conic::decode_beamformer(cfg, p, r.x);
    }
    return out;
}

InnerResult inner_mm(const SystemConfig& cfg, const Channel& ch, double lambda, const Iterate& start, double eps1,
                     int max_inner) {
    if (lambda < 0.0) throw ConfigError("lambda must be nonnegative");
    if (max_inner < 1) throw ConfigError("max_inner must be at least 1");

    // Tight gap so that solver slack cannot show up as a Lagrangian increase between iterates.
    conic::SolverSettings tight;
    tight.gap_abs_tol = 1e-9;
    tight.gap_rel_tol = 1e-11;

    InnerResult out;
    out.last = start;
    out.lagrangian.push_back(lagrangian(cfg, start.z, start.v, lambda));
    for (int s = 0; s < max_inner; ++s) {
        const conic::ConeProgram p = conic::build_surrogate(cfg, ch, lambda, out.last.z.z);
        conic::SolveResult r = conic::solve(p, tight);
        if (r.status == conic::SolveStatus::NumericalError) r = conic::solve(p);
        ++out.solves;
        if (!r.optimal()) throw SolverError(r.status, "majorization surrogate");

        Iterate next{conic::decode_selection(p, r.x), conic::decode_beamformer(cfg, p, r.x)};
        const double step = (next.z.z - out.last.z.z).norm() + next.v.distance(out.last.v);
        out.last = std::move(next);
        out.lagrangian.push_back(lagrangian(cfg, out.last.z, out.last.v, lambda));
        if (step < eps1) break;
    }
    return out;
}

AscentResult dual_ascent(const SystemConfig& cfg, const Channel& ch, const L2BoxSettings& settings) {
    settings.validate();
    cfg.validate();

    AscentResult out;
    const InitResult init = initialize(cfg, ch);
    if (!init.feasible) return out;

    out.last = init.start;
    out.lambda = settings.lambda0;
    out.status = AlgoStatus::OuterLimit;
    for (int t = 0; t < settings.max_outer; ++t) {
        InnerResult inner = inner_mm(cfg, ch, out.lambda, out.last, settings.eps1, settings.max_inner);
        out.inner_solves += inner.solves;
        ++out.outer_iterations;

        TraceRecord rec;
        rec.t = t;
        rec.lambda = out.lambda;
        rec.residual = sphere_residual(inner.last.z);
        rec.z_step = (inner.last.z.z - out.last.z.z).norm();
        rec.v_step = inner.last.v.distance(out.last.v);
        rec.lagrangian = inner.lagrangian.back();
        rec.inner_solves = inner.solves;
        rec.inner_lagrangian = std::move(inner.lagrangian);

        const double next_lambda = dual_step(out.lambda, inner.last.z.z, settings.alpha0);
        const bool dual_done = std::abs(next_lambda - out.lambda) < settings.eps2;
        const bool primal_done = rec.z_step + rec.v_step < settings.eps3;
        spdlog::debug("l2box t={} lambda={:.6g} residual={:.3e} dz={:.3e} dv={:.3e}", t, out.lambda, rec.residual,
                      rec.z_step, rec.v_step);

        out.trace.push_back(std::move(rec));
        out.last = std::move(inner.last);
        out.lambda = next_lambda;
        if (dual_done || primal_done) {
            out.status = AlgoStatus::Converged;
            break;
        }
    }
    return out;
}

std::vector<double> ordering_criterion(const SystemConfig& cfg, const Iterate& it) {
    std::vector<double> theta = gsbf::ordering(cfg, it.v).theta;
    const double lift = 1.0 + *std::max_element(theta.begin(), theta.end());
    for (std::size_t l = 0; l < theta.size(); ++l) {
        if (it.z.z[static_cast<Eigen::Index>(l)] >= 0.5) theta[l] += lift;
    }
    return theta;
}

AlgoResult run_l2box(const SystemConfig& cfg, const Channel& ch, const L2BoxSettings& settings) {
    AscentResult ascent = dual_ascent(cfg, ch, settings);
    if (ascent.status == AlgoStatus::Infeasible) {
        AlgoResult r = infeasible_result(cfg);
        r.solver_calls = 1;
        return r;
    }

    AlgoResult r = gsbf::bisection_selection(cfg, ch, gsbf::ordering_from_criterion(ordering_criterion(cfg, ascent.last)));
    if (r.status != AlgoStatus::Infeasible) r.status = ascent.status;
    r.solver_calls += 1 + ascent.inner_solves;
    r.outer_iterations = ascent.outer_iterations;
    r.inner_solves = ascent.inner_solves;
    r.trace = std::move(ascent.trace);
    return r;
}

}  // namespace greenran::l2box
