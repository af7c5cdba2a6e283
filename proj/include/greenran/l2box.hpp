#pragma once

#include <vector>

#include "greenran/solution.hpp"

namespace greenran::l2box {

struct L2BoxSettings {
    double eps1 = 1e-5;    // inner-loop step tolerance
    double eps2 = 1e-2;    // multiplier change tolerance
    double eps3 = 1e-3;    // outer-loop step tolerance
    double lambda0 = 0.1;  // initial multiplier
    double alpha0 = 10.0;  // constant dual step size
    int max_outer = 50;
    int max_inner = 3;

    /// Throws ConfigError on nonpositive tolerances, multiplier, step or caps.
    void validate() const;
};

/// Primal iterate (z, v).
struct Iterate {
    Selection z;
    Beamformer v;
};

/// network_power(z, v) + lambda * (L/4 - ||z - 1/2||^2).
double lagrangian(const SystemConfig& cfg, const Selection& z, const Beamformer& v, double lambda);

/// Multiplier update lambda + alpha * (L/4 - ||z - 1/2||^2).
double dual_step(double lambda, const Eigen::VectorXd& z, double alpha);

struct InitResult {
    bool feasible = false;
    Iterate start;
};

/// Box relaxation with all RRHs available.
InitResult initialize(const SystemConfig& cfg, const Channel& ch);

struct InnerResult {
    Iterate last;
    int solves = 0;
    std::vector<double> lagrangian;  // start point followed by each iterate
};

/// Majorization-minimization on the Lagrangian at fixed lambda.
/// Throws SolverError if a surrogate is not solved to optimality.
InnerResult inner_mm(const SystemConfig& cfg, const Channel& ch, double lambda, const Iterate& start, double eps1,
                     int max_inner);

/// Relaxed-selection iterate at the end of the dual ascent.
struct AscentResult {
    AlgoStatus status = AlgoStatus::Infeasible;
    Iterate last;
    double lambda = 0.0;
    int outer_iterations = 0;
    int inner_solves = 0;
    std::vector<TraceRecord> trace;
};

AscentResult dual_ascent(const SystemConfig& cfg, const Channel& ch, const L2BoxSettings& settings);

/// Ordering criterion seeded by the thresholded selection: RRHs with z >= 1/2 are
/// ranked after every RRH below it, each group sorted by beamformer group norm.
std::vector<double> ordering_criterion(const SystemConfig& cfg, const Iterate& it);

/// Dual ascent followed by ordering and bisection selection.
AlgoResult run_l2box(const SystemConfig& cfg, const Channel& ch, const L2BoxSettings& settings = {});

}  // namespace greenran::l2box
