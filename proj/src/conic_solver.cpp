// Primal-dual interior-point method for linear programs over products of
// nonnegative orthants and second-order cones.
//
// The problem is posed as
//     min c'x  s.t.  A x = b,  G x + s = h,  s in K
// and solved on its homogeneous self-dual embedding with Nesterov-Todd scaling
// and Mehrotra predictor-corrector steps. The normal equations
// (G' W^-2 G) dx = ... are assembled cone by cone over the columns each cone
// touches, which keeps the dense work proportional to the coupling actually
// present in the beamforming programs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Cholesky>
#include <spdlog/spdlog.h>

#include "greenran/conic.hpp"

namespace greenran::conic {

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::IterationLimit: return "iteration_limit";
        case SolveStatus::NumericalError: return "numerical_error";
    }
    return "unknown";
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kStepFraction = 0.99;
constexpr double kStaticReg = 1e-15;
constexpr int kRefinementSteps = 8;

struct Cone {
    bool soc = false;
    int offset = 0;
    int dim = 1;
    std::vector<int> cols;  // variables touched by the cone rows
    MatrixXd g;             // dim x cols.size(), dense restriction of G
    MatrixXd w;             // NT scaling
    MatrixXd w_inv;
};

// Sparse row-wise copy of G so that G x and G' z do not need the dense blocks.
struct SparseRows {
    std::vector<std::vector<Term>> rows;

    VectorXd times(const VectorXd& x) const {
        VectorXd out(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            double acc = 0.0;
            for (const Term& t : rows[i]) acc += t.coeff * x[t.var];
            out[static_cast<Eigen::Index>(i)] = acc;
        }
        return out;
    }

    VectorXd transpose_times(const VectorXd& y, int n) const {
        VectorXd out = VectorXd::Zero(n);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double yi = y[static_cast<Eigen::Index>(i)];
            if (yi == 0.0) continue;
            for (const Term& t : rows[i]) out[t.var] += t.coeff * yi;
        }
        return out;
    }
};

std::vector<Term> merge_terms(const std::vector<Term>& terms, double sign) {
    std::map<int, double> acc;
    for (const Term& t : terms) acc[t.var] += sign * t.coeff;
    std::vector<Term> out;
    for (const auto& [var, coeff] : acc) {
        if (coeff != 0.0) out.push_back({var, coeff});
    }
    return out;
}

// Jordan algebra helpers on one cone segment.
double soc_residual(const VectorXd& u) { return u[0] * u[0] - u.tail(u.size() - 1).squaredNorm(); }

VectorXd jordan_product(const VectorXd& u, const VectorXd& v, bool soc) {
    if (!soc) return u.cwiseProduct(v);
    VectorXd out(u.size());
    out[0] = u.dot(v);
    out.tail(u.size() - 1) = u[0] * v.tail(v.size() - 1) + v[0] * u.tail(u.size() - 1);
    return out;
}

// Solves u o x = w for x.
VectorXd jordan_divide(const VectorXd& u, const VectorXd& w, bool soc) {
    if (!soc) return w.cwiseQuotient(u);
    const Eigen::Index d = u.size();
    const double u0 = u[0];
    const double w0 = w[0];
    const double rho = soc_residual(u);
    const double zeta = u.tail(d - 1).dot(w.tail(d - 1));
    VectorXd out(d);
    out[0] = (u0 * w0 - zeta) / rho;
    out.tail(d - 1) = ((zeta / u0 - w0) / rho) * u.tail(d - 1) + w.tail(d - 1) / u0;
    return out;
}

// Largest alpha with u + alpha du still in the cone (infinity if unbounded).
double max_step(const VectorXd& u, const VectorXd& du, bool soc) {
    double alpha = std::numeric_limits<double>::infinity();
    if (!soc) {
        for (Eigen::Index i = 0; i < u.size(); ++i) {
            if (du[i] < 0.0) alpha = std::min(alpha, -u[i] / du[i]);
        }
        return alpha;
    }
    const Eigen::Index d = u.size();
    // f(a) = (u0 + a du0)^2 - ||u1 + a du1||^2 = qa a^2 + 2 qb a + qc, qc > 0.
    const double qa = du[0] * du[0] - du.tail(d - 1).squaredNorm();
    const double qb = u[0] * du[0] - u.tail(d - 1).dot(du.tail(d - 1));
    const double qc = soc_residual(u);
    auto consider = [&](double root) {
        if (root > 0.0) alpha = std::min(alpha, root);
    };
    if (qa == 0.0) {
        if (qb < 0.0) consider(-qc / (2.0 * qb));
    } else {
        const double disc = qb * qb - qa * qc;
        if (disc >= 0.0) {
            const double q = -(qb + std::copysign(std::sqrt(disc), qb));
            if (q != 0.0) {
                consider(q / qa);
                consider(qc / q);
            }
        }
    }
    // The head coordinate must also stay positive.
    if (du[0] < 0.0) alpha = std::min(alpha, -u[0] / du[0]);
    return alpha;
}

class InteriorPoint {
public:
    InteriorPoint(const ConeProgram& p, const SolverSettings& settings) : p_(p), settings_(settings) {
        n_ = p.n;
        c_ = p.c;
        std::vector<std::vector<Term>> eq_rows;
        std::vector<double> eq_rhs;
        struct PendingRow {
            std::vector<Term> terms;
            double h;
        };
        std::vector<std::vector<PendingRow>> lp_groups;
        std::vector<std::vector<PendingRow>> soc_groups;
        for (const ConeBlock& block : p.blocks) {
            std::vector<PendingRow> rows;
            for (const AffineRow& row : block.rows) rows.push_back({merge_terms(row.terms, -1.0), row.constant});
            if (block.kind == ConeKind::Zero) {
                for (const AffineRow& row : block.rows) {
                    eq_rows.push_back(merge_terms(row.terms, 1.0));
                    eq_rhs.push_back(-row.constant);
                }
            } else if (block.kind == ConeKind::Nonnegative || block.rows.size() == 1) {
                for (auto& r : rows) lp_groups.push_back({r});
            } else {
                soc_groups.push_back(std::move(rows));
            }
        }
        p_eq_ = static_cast<int>(eq_rows.size());
        a_.rows = std::move(eq_rows);
        b_ = Eigen::Map<VectorXd>(eq_rhs.data(), static_cast<Eigen::Index>(eq_rhs.size()));

        std::vector<double> h;
        auto add_cone = [&](const std::vector<PendingRow>& rows, bool soc) {
            Cone cone;
            cone.soc = soc;
            cone.offset = static_cast<int>(h.size());
            cone.dim = static_cast<int>(rows.size());
            std::vector<int> cols;
            for (const auto& r : rows) {
                for (const Term& t : r.terms) cols.push_back(t.var);
            }
            std::sort(cols.begin(), cols.end());
            cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
            cone.cols = cols;
            cone.g = MatrixXd::Zero(cone.dim, static_cast<Eigen::Index>(cols.size()));
            for (int i = 0; i < cone.dim; ++i) {
                for (const Term& t : rows[static_cast<std::size_t>(i)].terms) {
                    const auto pos = std::lower_bound(cols.begin(), cols.end(), t.var) - cols.begin();
                    cone.g(i, pos) += t.coeff;
                }
                g_.rows.push_back(rows[static_cast<std::size_t>(i)].terms);
                h.push_back(rows[static_cast<std::size_t>(i)].h);
            }
            cones_.push_back(std::move(cone));
        };
        for (const auto& group : lp_groups) add_cone(group, false);
        for (const auto& group : soc_groups) add_cone(group, true);
        m_ = static_cast<int>(h.size());
        h_ = Eigen::Map<VectorXd>(h.data(), m_);
        degree_ = static_cast<int>(cones_.size());
    }

    SolveResult run() {
        SolveResult result;
        result.x = VectorXd::Zero(n_);
        if (!initialize()) {
            result.status = SolveStatus::NumericalError;
            return result;
        }
        const double resx0 = c_.norm();

        for (int iter = 0;; ++iter) {
            result.iterations = iter;
            // Residuals of the embedding.
            const VectorXd rx = -a_.transpose_times(y_, n_) - g_.transpose_times(z_, n_) - tau_ * c_;
            const VectorXd ry = a_.times(x_) - tau_ * b_;
            const VectorXd rz = s_ + g_.times(x_) - tau_ * h_;
            const double cx = c_.dot(x_);
            const double by = p_eq_ > 0 ? b_.dot(y_) : 0.0;
            const double hz = h_.dot(z_);
            const double rt = kappa_ + cx + by + hz;
            const double gap = s_.dot(z_);
            const double mu = (gap + kappa_ * tau_) / (degree_ + 1);

            const VectorXd x_hat = x_ / tau_;
            const double violation = primal_violation(x_hat);
            const double dres = rx.norm() / tau_ / std::max(1.0, resx0 + y_.norm() + z_.norm());
            const double pcost = cx / tau_;
            const double dcost = -(by + hz) / tau_;
            const double abs_gap = gap / (tau_ * tau_);
            const double rel_gap = abs_gap / std::max(std::min(std::abs(pcost), std::abs(dcost)), 1e-12);

            if (settings_.verbose) {
                spdlog::info("ipm {:3d} pcost {:+.6e} dcost {:+.6e} gap {:.1e} viol {:.1e} dres {:.1e} k/t {:.1e}",
                             iter, pcost + p_.c0, dcost + p_.c0, abs_gap, violation, dres, kappa_ / tau_);
            }

            if (violation <= settings_.feasibility_tol && dres <= settings_.feasibility_tol &&
                (abs_gap <= settings_.gap_abs_tol || rel_gap <= settings_.gap_rel_tol)) {
                result.status = SolveStatus::Optimal;
                result.x = x_hat;
                return result;
            }
            // Primal infeasibility certificate: A'y + G'z ~ 0, b'y + h'z < 0.
            if (by + hz < 0.0 && tau_ < kappa_) {
                const double cert = (a_.transpose_times(y_, n_) + g_.transpose_times(z_, n_)).norm() / -(by + hz);
                if (cert <= settings_.feasibility_tol) {
                    result.status = SolveStatus::Infeasible;
                    return result;
                }
            }
            // Dual infeasibility certificate: A x ~ 0, G x + s ~ 0, c'x < 0.
            if (cx < 0.0 && tau_ < kappa_) {
                const double cert = std::max(a_.times(x_).norm(), (g_.times(x_) + s_).norm()) / -cx;
                if (cert <= settings_.feasibility_tol) {
                    result.status = SolveStatus::Unbounded;
                    return result;
                }
            }
            if (iter >= settings_.max_iterations) {
                result.status = SolveStatus::IterationLimit;
                result.x = x_hat;
                return result;
            }

            if (!update_scaling() || !factor()) {
                result.status = SolveStatus::NumericalError;
                result.x = x_hat;
                return result;
            }

            // Direction shared by both solves: the tau column of the embedding.
            VectorXd x1, y1, z1;
            solve_kkt(-c_, b_, h_, x1, y1, z1);
            const double tau_denom = c_.dot(x1) + (p_eq_ > 0 ? b_.dot(y1) : 0.0) + h_.dot(z1) - kappa_ / tau_;

            // Affine (predictor) direction.
            VectorXd ds_aff_target = -jordan(lambda_, lambda_);
            Direction aff = direction(rx, ry, rz, rt, 1.0, ds_aff_target, -kappa_ * tau_, x1, y1, z1, tau_denom);
            const double alpha_aff = std::min(1.0, step_length(aff));
            const double sigma = std::clamp(std::pow(1.0 - alpha_aff, 3), 0.0, 1.0);

            // Combined (corrector) direction.
            const VectorXd w_inv_ds = apply_scaling(aff.ds, true);
            const VectorXd w_dz = apply_scaling(aff.dz, false);
            VectorXd ds_target = -jordan(lambda_, lambda_) - jordan(w_inv_ds, w_dz);
            for (const Cone& cone : cones_) ds_target[cone.offset] += sigma * mu;
            const double dk_target = -kappa_ * tau_ - aff.dkappa * aff.dtau + sigma * mu;
            Direction dir = direction(rx, ry, rz, rt, 1.0 - sigma, ds_target, dk_target, x1, y1, z1, tau_denom);
            const double alpha = std::min(1.0, kStepFraction * step_length(dir));
            if (!(alpha > 1e-12) || !std::isfinite(alpha)) {
                result.status = SolveStatus::NumericalError;
                result.x = x_hat;
                return result;
            }

            x_ += alpha * dir.dx;
            if (p_eq_ > 0) y_ += alpha * dir.dy;
            s_ += alpha * dir.ds;
            z_ += alpha * dir.dz;
            tau_ += alpha * dir.dtau;
            kappa_ += alpha * dir.dkappa;
            if (!(tau_ > 0.0) || !(kappa_ > 0.0) || !x_.allFinite() || !z_.allFinite()) {
                result.status = SolveStatus::NumericalError;
                result.x = x_hat;
                return result;
            }
        }
    }

private:
    struct Direction {
        VectorXd dx, dy, ds, dz;
        double dtau = 0.0;
        double dkappa = 0.0;
    };

    double primal_violation(const VectorXd& x_hat) const {
        double worst = 0.0;
        if (p_eq_ > 0) worst = (a_.times(x_hat) - b_).lpNorm<Eigen::Infinity>();
        const VectorXd slack = h_ - g_.times(x_hat);
        for (const Cone& cone : cones_) {
            const auto seg = slack.segment(cone.offset, cone.dim);
            if (cone.soc) {
                worst = std::max(worst, seg.tail(cone.dim - 1).norm() - seg[0]);
            } else {
                worst = std::max(worst, -seg[0]);
            }
        }
        return worst;
    }

    VectorXd jordan(const VectorXd& u, const VectorXd& v) const {
        VectorXd out(m_);
        for (const Cone& cone : cones_) {
            out.segment(cone.offset, cone.dim) =
                jordan_product(u.segment(cone.offset, cone.dim), v.segment(cone.offset, cone.dim), cone.soc);
        }
        return out;
    }

    VectorXd jordan_div(const VectorXd& u, const VectorXd& w) const {
        VectorXd out(m_);
        for (const Cone& cone : cones_) {
            out.segment(cone.offset, cone.dim) =
                jordan_divide(u.segment(cone.offset, cone.dim), w.segment(cone.offset, cone.dim), cone.soc);
        }
        return out;
    }

    // W v (inverse = false) or W^-1 v (inverse = true), applied `times` times.
    VectorXd apply_scaling(const VectorXd& v, bool inverse, int times = 1) const {
        VectorXd out = v;
        for (int rep = 0; rep < times; ++rep) {
            for (const Cone& cone : cones_) {
                const MatrixXd& w = inverse ? cone.w_inv : cone.w;
                out.segment(cone.offset, cone.dim) = w * out.segment(cone.offset, cone.dim);
            }
        }
        return out;
    }

    // Returns s = r + (1 + alpha) e when r is not strictly inside the cone.
    VectorXd bring_to_cone(const VectorXd& r) const {
        double alpha = -1.0;
        for (const Cone& cone : cones_) {
            const auto seg = r.segment(cone.offset, cone.dim);
            const double depth = cone.soc ? seg[0] - seg.tail(cone.dim - 1).norm() : seg[0];
            alpha = std::max(alpha, -depth);
        }
        VectorXd out = r;
        if (alpha >= -1e-7) {
            for (const Cone& cone : cones_) out[cone.offset] += 1.0 + alpha;
        }
        return out;
    }

    bool initialize() {
        for (Cone& cone : cones_) {
            cone.w = MatrixXd::Identity(cone.dim, cone.dim);
            cone.w_inv = cone.w;
        }
        if (!factor()) return false;
        VectorXd x, y, z;
        solve_kkt(VectorXd::Zero(n_), b_, h_, x, y, z);
        x_ = x;
        s_ = bring_to_cone(-z);
        solve_kkt(-c_, VectorXd::Zero(p_eq_), VectorXd::Zero(m_), x, y, z);
        y_ = y;
        z_ = bring_to_cone(z);
        tau_ = 1.0;
        kappa_ = 1.0;
        return x_.allFinite() && s_.allFinite() && z_.allFinite();
    }

    bool update_scaling() {
        lambda_.resize(m_);
        for (Cone& cone : cones_) {
            const VectorXd s = s_.segment(cone.offset, cone.dim);
            const VectorXd z = z_.segment(cone.offset, cone.dim);
            if (!cone.soc) {
                if (!(s[0] > 0.0) || !(z[0] > 0.0)) return false;
                const double w = std::sqrt(s[0] / z[0]);
                cone.w(0, 0) = w;
                cone.w_inv(0, 0) = 1.0 / w;
                lambda_[cone.offset] = std::sqrt(s[0] * z[0]);
                continue;
            }
            const double s_res = soc_residual(s);
            const double z_res = soc_residual(z);
            if (!(s_res > 0.0) || !(z_res > 0.0) || s[0] <= 0.0 || z[0] <= 0.0) return false;
            const double s_norm = std::sqrt(s_res);
            const double z_norm = std::sqrt(z_res);
            const VectorXd sb = s / s_norm;
            const VectorXd zb = z / z_norm;
            const double gamma = std::sqrt((1.0 + sb.dot(zb)) / 2.0);
            const Eigen::Index d = cone.dim;
            VectorXd wb(d);
            wb[0] = (sb[0] + zb[0]) / (2.0 * gamma);
            wb.tail(d - 1) = (sb.tail(d - 1) - zb.tail(d - 1)) / (2.0 * gamma);
            const double eta = std::sqrt(s_norm / z_norm);
            MatrixXd wbar(d, d);
            wbar(0, 0) = wb[0];
            wbar.block(0, 1, 1, d - 1) = wb.tail(d - 1).transpose();
            wbar.block(1, 0, d - 1, 1) = wb.tail(d - 1);
            wbar.block(1, 1, d - 1, d - 1) = MatrixXd::Identity(d - 1, d - 1) +
                                             wb.tail(d - 1) * wb.tail(d - 1).transpose() / (1.0 + wb[0]);
            cone.w = eta * wbar;
            // W^-1 = J Wbar J / eta.
            MatrixXd inv = wbar;
            inv.block(0, 1, 1, d - 1) *= -1.0;
            inv.block(1, 0, d - 1, 1) *= -1.0;
            cone.w_inv = inv / eta;
            lambda_.segment(cone.offset, d) = cone.w * z;
        }
        return lambda_.allFinite();
    }

    bool factor() {
        MatrixXd hess = MatrixXd::Zero(n_, n_);
        for (const Cone& cone : cones_) {
            const MatrixXd v = cone.w_inv * cone.g;
            const MatrixXd block = v.transpose() * v;
            const auto nc = static_cast<Eigen::Index>(cone.cols.size());
            for (Eigen::Index j = 0; j < nc; ++j) {
                for (Eigen::Index i = 0; i < nc; ++i) hess(cone.cols[i], cone.cols[j]) += block(i, j);
            }
        }
        const double scale = std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
        double reg = kStaticReg * scale;
        for (int attempt = 0; attempt < 8; ++attempt) {
            MatrixXd regularized = hess;
            regularized.diagonal().array() += reg;
            hess_llt_.compute(regularized);
            if (hess_llt_.info() == Eigen::Success) break;
            reg *= 100.0;
            if (attempt == 7) return false;
        }
        reg_ = reg;
        if (p_eq_ > 0) {
            MatrixXd at(n_, p_eq_);
            for (int j = 0; j < p_eq_; ++j) {
                VectorXd e = VectorXd::Zero(p_eq_);
                e[j] = 1.0;
                at.col(j) = a_.transpose_times(e, n_);
            }
            at_ = at;
            MatrixXd schur = at.transpose() * hess_llt_.solve(at);
            schur.diagonal().array() += kStaticReg * std::max(1.0, schur.diagonal().cwiseAbs().maxCoeff());
            schur_llt_.compute(schur);
            if (schur_llt_.info() != Eigen::Success) return false;
        }
        return true;
    }

    // Solves [0 A' G'; A 0 0; G 0 -W^2] [dx; dy; dz] = [r1; r2; r3] with refinement.
    void solve_kkt(const VectorXd& r1, const VectorXd& r2, const VectorXd& r3, VectorXd& dx, VectorXd& dy,
                   VectorXd& dz) const {
        solve_reduced(r1, r2, r3, dx, dy, dz);
        double last_err = std::numeric_limits<double>::infinity();
        for (int it = 0; it < kRefinementSteps; ++it) {
            VectorXd e1 = r1 - g_.transpose_times(dz, n_);
            if (p_eq_ > 0) e1 -= a_.transpose_times(dy, n_);
            const VectorXd e2 = p_eq_ > 0 ? VectorXd(r2 - a_.times(dx)) : VectorXd::Zero(0);
            const VectorXd e3 = r3 - g_.times(dx) + apply_scaling(dz, false, 2);
            const double err = std::max({e1.lpNorm<Eigen::Infinity>(), p_eq_ > 0 ? e2.lpNorm<Eigen::Infinity>() : 0.0,
                                         e3.lpNorm<Eigen::Infinity>()});
            const double ref = 1.0 + std::max({r1.lpNorm<Eigen::Infinity>(),
                                               p_eq_ > 0 ? r2.lpNorm<Eigen::Infinity>() : 0.0,
                                               r3.lpNorm<Eigen::Infinity>()});
            if (err <= 1e-14 * ref || err > 0.5 * last_err) break;
            last_err = err;
            VectorXd cx, cy, cz;
            solve_reduced(e1, e2, e3, cx, cy, cz);
            dx += cx;
            if (p_eq_ > 0) dy += cy;
            dz += cz;
        }
    }

    void solve_reduced(const VectorXd& r1, const VectorXd& r2, const VectorXd& r3, VectorXd& dx, VectorXd& dy,
                       VectorXd& dz) const {
        const VectorXd rhs = r1 + g_.transpose_times(apply_scaling(r3, true, 2), n_);
        if (p_eq_ > 0) {
            const VectorXd hinv_rhs = hess_llt_.solve(rhs);
            dy = schur_llt_.solve(at_.transpose() * hinv_rhs - r2);
            dx = hess_llt_.solve(rhs - at_ * dy);
        } else {
            dx = hess_llt_.solve(rhs);
            dy = VectorXd::Zero(0);
        }
        dz = apply_scaling(g_.times(dx) - r3, true, 2);
    }

    // Newton direction for residual reduction `eta` and complementarity targets.
    Direction direction(const VectorXd& rx, const VectorXd& ry, const VectorXd& rz, double rt, double eta,
                        const VectorXd& ds_target, double dk_target, const VectorXd& x1, const VectorXd& y1,
                        const VectorXd& z1, double tau_denom) const {
        const VectorXd lam_div = jordan_div(lambda_, ds_target);
        const VectorXd w_lam_div = apply_scaling(lam_div, false);
        VectorXd x2, y2, z2;
        solve_kkt(eta * rx, -eta * ry, -eta * rz - w_lam_div, x2, y2, z2);
        const double num = -eta * rt - dk_target / tau_ - c_.dot(x2) - (p_eq_ > 0 ? b_.dot(y2) : 0.0) - h_.dot(z2);
        Direction d;
        d.dtau = num / tau_denom;
        d.dx = x2 + d.dtau * x1;
        d.dy = p_eq_ > 0 ? VectorXd(y2 + d.dtau * y1) : VectorXd::Zero(0);
        d.dz = z2 + d.dtau * z1;
        d.ds = apply_scaling(lam_div - apply_scaling(d.dz, false), false);
        d.dkappa = (dk_target - kappa_ * d.dtau) / tau_;
        return d;
    }

    double step_length(const Direction& d) const {
        double alpha = std::numeric_limits<double>::infinity();
        for (const Cone& cone : cones_) {
            alpha = std::min(alpha, max_step(s_.segment(cone.offset, cone.dim), d.ds.segment(cone.offset, cone.dim),
                                             cone.soc));
            alpha = std::min(alpha, max_step(z_.segment(cone.offset, cone.dim), d.dz.segment(cone.offset, cone.dim),
                                             cone.soc));
        }
        if (d.dtau < 0.0) alpha = std::min(alpha, -tau_ / d.dtau);
        if (d.dkappa < 0.0) alpha = std::min(alpha, -kappa_ / d.dkappa);
        return alpha;
    }

    const ConeProgram& p_;
    const SolverSettings& settings_;
    int n_ = 0;
    int m_ = 0;
    int p_eq_ = 0;
    int degree_ = 0;
    VectorXd c_, b_, h_;
    SparseRows a_, g_;
    std::vector<Cone> cones_;
    MatrixXd at_;
    Eigen::LLT<MatrixXd> hess_llt_;
    Eigen::LLT<MatrixXd> schur_llt_;
    double reg_ = 0.0;

    VectorXd x_, y_, s_, z_, lambda_;
    double tau_ = 1.0;
    double kappa_ = 1.0;
};

// Programs without decision variables reduce to checking the constant rows.
SolveResult solve_constant(const ConeProgram& p, const SolverSettings& settings) {
    SolveResult result;
    result.x = Eigen::VectorXd::Zero(0);
    result.max_primal_residual = p.max_violation(result.x);
    result.status =
        result.max_primal_residual <= settings.feasibility_tol ? SolveStatus::Optimal : SolveStatus::Infeasible;
    result.objective_value = p.c0;
    return result;
}

}  // namespace

SolveResult solve(const ConeProgram& p, const SolverSettings& settings) {
    if (!(settings.feasibility_tol > 0.0)) throw ConfigError("feasibility_tol must be > 0");
    p.check_well_formed();
    const auto start = std::chrono::steady_clock::now();
    SolveResult result;
    if (p.n == 0) {
        result = solve_constant(p, settings);
    } else if (p.blocks.empty()) {
        // Unconstrained linear objective.
        result.x = Eigen::VectorXd::Zero(p.n);
        result.status = p.c.isZero(0.0) ? SolveStatus::Optimal : SolveStatus::Unbounded;
    } else {
        InteriorPoint ipm(p, settings);
        result = ipm.run();
    }
    if (result.x.size() == p.n) {
        result.objective_value = p.objective(result.x);
        result.max_primal_residual = p.max_violation(result.x);
    }
    result.solve_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace greenran::conic
