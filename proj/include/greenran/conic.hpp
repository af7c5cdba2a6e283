#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "greenran/model.hpp"

namespace greenran::conic {

enum class ConeKind { Zero, Nonnegative, SecondOrder };

const char* to_string(ConeKind kind);

struct Term {
    int var = 0;
    double coeff = 0.0;
};

/// One real affine expression sum(coeff * x[var]) + constant.
struct AffineRow {
    std::vector<Term> terms;
    double constant = 0.0;

    double eval(const Eigen::VectorXd& x) const;
};

/// A cone membership constraint: the stacked row values must lie in the cone.
/// For second-order cones the first row is the scalar bound.
struct ConeBlock {
    ConeKind kind = ConeKind::Nonnegative;
    std::vector<AffineRow> rows;
    std::string label;

    int dim() const { return static_cast<int>(rows.size()); }
};

struct VarSpan {
    int offset = -1;
    int length = 0;

    bool valid() const { return offset >= 0; }
};

/// Locates the model quantities inside the flat variable vector.
///
/// Beamformer spans interleave real and imaginary parts: x[offset + 2j] = Re v[j],
/// x[offset + 2j + 1] = Im v[j]. RRHs excluded from the program have invalid spans
/// and a fixed selection value.
struct VarMap {
    int num_rrh = 0;
    int num_users = 0;
    std::vector<VarSpan> beam;      // index l * K + k
    std::vector<int> selection;     // z_l variable, -1 when fixed
    std::vector<double> fixed_selection;
    std::vector<int> epigraph;      // t_l (or s_l for the group-norm program), -1 when absent

    const VarSpan& beam_span(int l, int k) const {
        return beam[static_cast<std::size_t>(l * num_users + k)];
    }
};

struct ConeProgram {
    int n = 0;
    Eigen::VectorXd c;
    double c0 = 0.0;
    std::vector<ConeBlock> blocks;
    VarMap var_map;

    double objective(const Eigen::VectorXd& x) const { return c.dot(x) + c0; }
    int count_blocks(ConeKind kind) const;
    int count_blocks_labelled(const std::string& prefix) const;

    /// Largest cone violation of the affine rows at x (0 when x is feasible).
    double max_violation(const Eigen::VectorXd& x) const;

    /// Throws ConfigError on out-of-range variable indices or empty cones.
    void check_well_formed() const;
};

/// Rows computing Re(h^H v) and Im(h^H v) from the interleaved span of v.
std::array<AffineRow, 2> complex_soc_rows(const Eigen::VectorXcd& h, VarSpan v_span);

/// Fixed-support power minimization: z_l = 1 on `active`, 0 elsewhere.
ConeProgram build_fixed_support(const SystemConfig& cfg, const Channel& ch, const std::vector<int>& active);

enum class Pin { Free, Off, On };

/// Box relaxation z in [0,1]^L. Pinned RRHs carry a constant selection value.
ConeProgram build_relaxed(const SystemConfig& cfg, const Channel& ch, const std::vector<Pin>& pins = {});

/// Relaxation objective plus the tangent majorizer of lambda * (L/4 - ||z - 1/2||^2) at z_anchor.
ConeProgram build_surrogate(const SystemConfig& cfg, const Channel& ch, double lambda,
                            const Eigen::VectorXd& z_anchor);

/// min sum w_l ||v_l|| subject to the SINR and per-RRH power constraints.
ConeProgram build_group_sparse(const SystemConfig& cfg, const Channel& ch, const std::vector<double>& weights);

Beamformer decode_beamformer(const SystemConfig& cfg, const ConeProgram& p, const Eigen::VectorXd& x);

/// Relaxed selection from the solution, clamped to [0,1] to absorb solver tolerance.
Selection decode_selection(const ConeProgram& p, const Eigen::VectorXd& x);

/// Writes the program as a self-describing JSON document.
void write_program_json(const ConeProgram& p, std::ostream& out);

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalError };

const char* to_string(SolveStatus status);

struct SolverSettings {
    double feasibility_tol = 1e-8;
    double gap_abs_tol = 1e-8;
    double gap_rel_tol = 1e-8;
    int max_iterations = 100;
    bool verbose = false;
};

struct SolveResult {
    SolveStatus status = SolveStatus::NumericalError;
    Eigen::VectorXd x;
    double objective_value = 0.0;
    double max_primal_residual = 0.0;
    double solve_time_ms = 0.0;
    int iterations = 0;

    bool optimal() const { return status == SolveStatus::Optimal; }
};

/// Primal-dual interior-point method on the homogeneous self-dual embedding.
/// Single-threaded and deterministic for identical inputs.
SolveResult solve(const ConeProgram& p, const SolverSettings& settings = {});

}  // namespace greenran::conic
