#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "greenran/conic.hpp"
#include "greenran/model.hpp"

namespace greenran {

/// Thrown when the conic solver neither certifies optimality nor infeasibility.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(conic::SolveStatus status, const std::string& context)
        : std::runtime_error(context + ": solver returned " + conic::to_string(status)), status_(status) {}

    conic::SolveStatus status() const { return status_; }

private:
    conic::SolveStatus status_;
};

enum class AlgoStatus { Converged, OuterLimit, Infeasible };

const char* to_string(AlgoStatus status);

/// One outer iteration of the dual ascent.
struct TraceRecord {
    int t = 0;
    double lambda = 0.0;      // multiplier used by this iteration's inner loop
    double residual = 0.0;    // L/4 - ||z^{t+1} - 1/2||^2
    double z_step = 0.0;      // ||z^{t+1} - z^t||_2
    double v_step = 0.0;      // ||v^{t+1} - v^t||_F
    double lagrangian = 0.0;  // at (z^{t+1}, v^{t+1}, lambda)
    int inner_solves = 0;
    std::vector<double> inner_lagrangian;  // start point followed by each MM iterate

    double tol1() const;  // log10 of z_step
    double tol2() const;  // log10 of v_step
};

/// Outcome shared by every RRH-selection algorithm.
struct AlgoResult {
    AlgoStatus status = AlgoStatus::Infeasible;
    std::vector<int> active_set;
    Selection z_final;
    Beamformer v_final;
    double power_w = 0.0;
    int outer_iterations = 0;
    int inner_solves = 0;
    int solver_calls = 0;
    std::vector<TraceRecord> trace;

    bool feasible() const { return status != AlgoStatus::Infeasible; }
};

/// Optimal beamformer for a fixed set of active RRHs.
struct SupportSolution {
    bool feasible = false;
    std::vector<int> active;
    Beamformer v;
    double power_w = 0.0;
};

/// Solves the fixed-support program. Infeasible supports return feasible = false;
/// any other non-optimal solver outcome throws SolverError.
SupportSolution solve_fixed_support(const SystemConfig& cfg, const Channel& ch, const std::vector<int>& active,
                                    const conic::SolverSettings& settings = {});

/// Solves `p` and throws SolverError unless it is Optimal or Infeasible.
conic::SolveResult solve_checked(const conic::ConeProgram& p, const conic::SolverSettings& settings,
                                 const std::string& context);

AlgoResult infeasible_result(const SystemConfig& cfg);
AlgoResult result_from_support(const SystemConfig& cfg, const SupportSolution& support);

}  // namespace greenran
