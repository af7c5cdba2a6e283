// Acceptance run: prints one PASS/FAIL line per criterion, followed by the measurements behind it.
//
// Usage: acceptance [--config-dir DIR] [--only N[,N...]] [--expect-fail N[,N...]]
// Exit status is 0 when every criterion passes or fails only where listed in --expect-fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "greenran/conic.hpp"
#include "greenran/gsbf.hpp"
#include "greenran/harness.hpp"
#include "greenran/l2box.hpp"
#include "greenran/mip.hpp"
#include "greenran/model.hpp"

using namespace greenran;
namespace hr = greenran::harness;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
    bool pass = true;
    std::vector<std::string> notes;

    void fail(const std::string& why) {
        pass = false;
        notes.push_back("FAIL: " + why);
    }
    void note(const std::string& what) { notes.push_back(what); }
};

// Shared across criteria: every solution reported feasible is re-checked here.
struct FeasibilityLedger {
    int checked = 0;
    std::vector<std::string> violations;

    void record(const std::string& where, const SystemConfig& cfg, const Channel& ch, const AlgoResult& r) {
        if (!r.feasible()) return;
        ++checked;
        const FeasibilityReport rep = check_feasibility(cfg, ch, r.v_final, r.z_final, 1e-6);
        if (!rep.feasible) violations.push_back(fmt::format("{} (max violation {:.3g})", where, rep.max_violation()));
    }
};

FeasibilityLedger g_feasibility;

SystemConfig small_config(int num_rrh, int num_users, double halfwidth, double sinr_db) {
    SystemConfig cfg = make_uniform_config(num_rrh, num_users, 2);
    cfg.region_halfwidth_m = halfwidth;
    cfg.set_uniform_sinr_db(sinr_db);
    return cfg;
}

Channel channel_for(const SystemConfig& cfg, std::uint64_t seed) {
    return generate_channel(cfg, generate_topology(cfg, seed), seed);
}

// Places (z, v) into the variable vector of a relaxed or surrogate program.
Eigen::VectorXd encode(const conic::ConeProgram& p, const Eigen::VectorXd& z, const Beamformer& v) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(p.n);
    const conic::VarMap& m = p.var_map;
    for (int l = 0; l < m.num_rrh; ++l) {
        const auto i = static_cast<std::size_t>(l);
        if (m.selection[i] >= 0) x[m.selection[i]] = z[l];
        for (int k = 0; k < m.num_users; ++k) {
            const conic::VarSpan& span = m.beam_span(l, k);
            if (!span.valid()) continue;
            for (Eigen::Index j = 0; j < v.at(l, k).size(); ++j) {
                x[span.offset + 2 * j] = v.at(l, k)[j].real();
                x[span.offset + 2 * j + 1] = v.at(l, k)[j].imag();
            }
        }
        if (m.epigraph[i] >= 0) x[m.epigraph[i]] = v.rrh_norm_sq(l);
    }
    return x;
}

// Power plus the weighted box residual, written out from the definitions.
double lagrangian_reference(const SystemConfig& cfg, const Eigen::VectorXd& z, const Beamformer& v, double lambda) {
    double value = 0.0;
    for (int l = 0; l < cfg.num_rrh; ++l) {
        const auto i = static_cast<std::size_t>(l);
        value += cfg.fronthaul_power_w[i] * z[l] + v.rrh_norm_sq(l) / cfg.efficiency[i];
    }
    double residual = 0.0;
    for (Eigen::Index l = 0; l < z.size(); ++l) residual += z[l] * (1.0 - z[l]);
    return value + lambda * residual;
}

Beamformer random_beamformer(const SystemConfig& cfg, std::mt19937_64& rng, double scale) {
    std::normal_distribution<double> gauss(0.0, scale);
    Beamformer v = Beamformer::zeros(cfg);
    for (int l = 0; l < cfg.num_rrh; ++l) {
        for (int k = 0; k < cfg.num_users; ++k) {
            for (Eigen::Index j = 0; j < v.at(l, k).size(); ++j) v.at(l, k)[j] = Complex(gauss(rng), gauss(rng));
        }
    }
    return v;
}

Verdict criterion_box_equivalence() {
    Verdict out;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double min_residual = 1.0;
    for (int trial = 0; trial < 10000; ++trial) {
        Eigen::VectorXd z(10);
        for (int l = 0; l < 10; ++l) z[l] = unit(rng);
        min_residual = std::min(min_residual, sphere_residual(z));
    }
    double max_binary = 0.0;
    for (unsigned mask = 0; mask < 1024u; ++mask) {
        Eigen::VectorXd z(10);
        for (int l = 0; l < 10; ++l) z[l] = (mask >> l) & 1u ? 1.0 : 0.0;
        const double r = sphere_residual(z);
        min_residual = std::min(min_residual, r);
        max_binary = std::max(max_binary, std::abs(r));
    }
    if (min_residual < -1e-12) out.fail(fmt::format("negative residual {:.3g}", min_residual));
    if (max_binary > 1e-12) out.fail(fmt::format("binary residual {:.3g}", max_binary));
    out.note(fmt::format("min residual {:.3g}, max |residual| on binary points {:.3g}", min_residual, max_binary));
    return out;
}

Verdict criterion_majorization() {
    Verdict out;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst_gap = 0.0;
    double worst_touch = 0.0;
    int comparisons = 0;
    for (std::uint64_t inst = 1; inst <= 20; ++inst) {
        const SystemConfig cfg = small_config(6, 3, 700.0, 0.0);
        const Channel ch = channel_for(cfg, inst);
        for (int pair = 0; pair < 10; ++pair) {
            const double lambda = 20.0 * unit(rng);
            Eigen::VectorXd anchor(6);
            for (int l = 0; l < 6; ++l) anchor[l] = unit(rng);
            const conic::ConeProgram p = conic::build_surrogate(cfg, ch, lambda, anchor);

            const Beamformer v_anchor = random_beamformer(cfg, rng, 0.1);
            const double touch = p.objective(encode(p, anchor, v_anchor));
            const double touch_ref = lagrangian_reference(cfg, anchor, v_anchor, lambda);
            const double touch_err = std::abs(touch - touch_ref) / std::max(1.0, std::abs(touch_ref));
            worst_touch = std::max(worst_touch, touch_err);
            if (touch_err > 1e-10) out.fail(fmt::format("instance {} pair {}: surrogate misses anchor by {:.3g}", inst, pair, touch_err));

            for (int probe = 0; probe < 10; ++probe) {
                Eigen::VectorXd z(6);
                for (int l = 0; l < 6; ++l) z[l] = unit(rng);
                const Beamformer v = random_beamformer(cfg, rng, 0.1);
                const double above = p.objective(encode(p, z, v));
                const double below = lagrangian_reference(cfg, z, v, lambda);
                const double gap = (below - above) / std::max(1.0, std::abs(below));
                worst_gap = std::max(worst_gap, gap);
                ++comparisons;
                if (gap > 1e-10) out.fail(fmt::format("instance {} pair {}: surrogate below by {:.3g}", inst, pair, gap));
            }
        }
    }
    out.note(fmt::format("{} comparisons, worst relative undershoot {:.3g}, worst anchor mismatch {:.3g}", comparisons,
                         worst_gap, worst_touch));
    return out;
}

Verdict criterion_descent() {
    Verdict out;
    int runs = 0;
    int inner_steps = 0;
    double worst_rise = 0.0;
    double worst_abs_rise = 0.0;
    for (std::uint64_t inst = 1; inst <= 20; ++inst) {
        const SystemConfig cfg = small_config(6, 3, 700.0, 0.0);
        const Channel ch = channel_for(cfg, inst);
        const l2box::AscentResult asc = l2box::dual_ascent(cfg, ch, {});
        if (asc.status == AlgoStatus::Infeasible) continue;
        ++runs;
        double previous_lambda = -1.0;
        for (const TraceRecord& rec : asc.trace) {
            if (rec.lambda < previous_lambda) out.fail(fmt::format("instance {}: multiplier decreased at t={}", inst, rec.t));
            previous_lambda = rec.lambda;
            for (std::size_t j = 1; j < rec.inner_lagrangian.size(); ++j) {
                const double before = rec.inner_lagrangian[j - 1];
                const double rise = (rec.inner_lagrangian[j] - before) / std::max(1.0, std::abs(before));
                worst_rise = std::max(worst_rise, rise);
                const double abs_rise = rec.inner_lagrangian[j] - before;
                worst_abs_rise = std::max(worst_abs_rise, abs_rise);
                ++inner_steps;
                if (abs_rise > 1e-8) out.fail(fmt::format("instance {}: Lagrangian rose by {:.3g} W at t={}", inst, abs_rise, rec.t));
            }
        }
        if (asc.lambda < previous_lambda) out.fail(fmt::format("instance {}: final multiplier decreased", inst));
    }
    if (runs == 0) out.fail("no feasible instance");
    out.note(fmt::format("{} ascents, {} inner steps, worst rise {:.3g} relative, {:.3g} W absolute", runs,
                         inner_steps, worst_rise, worst_abs_rise));
    return out;
}

Verdict criterion_oracle() {
    Verdict out;
    const std::vector<double> targets{0.0, 4.0, 8.0};
    int instances = 0;
    int feasible_instances = 0;
    double worst_bnb = 0.0;
    std::map<std::string, double> worst_excess;
    std::map<std::string, int> optimal_hits;
    for (int num_rrh : {4, 6, 8}) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const SystemConfig cfg = small_config(num_rrh, 3, 500.0 + 50.0 * num_rrh, targets[seed % targets.size()]);
            const Channel ch = channel_for(cfg, 1000 * static_cast<std::uint64_t>(num_rrh) + seed);
            ++instances;
            const std::string tag = fmt::format("L={} seed={}", num_rrh, seed);
            const AlgoResult opt = mip::enumerate_optimal(cfg, ch);
            const AlgoResult bnb = mip::branch_and_bound(cfg, ch);
            g_feasibility.record("mip_enum " + tag, cfg, ch, opt);
            g_feasibility.record("mip_bnb " + tag, cfg, ch, bnb);
            if (opt.feasible() != bnb.feasible()) {
                out.fail(tag + ": branch and bound disagrees on feasibility");
                continue;
            }
            if (!opt.feasible()) continue;
            ++feasible_instances;
            const double diff = std::abs(bnb.power_w - opt.power_w);
            worst_bnb = std::max(worst_bnb, diff);
            if (diff > 1e-6) out.fail(fmt::format("{}: branch and bound {:.9f} vs enumeration {:.9f}", tag, bnb.power_w, opt.power_w));

            const std::vector<std::pair<std::string, AlgoResult>> heuristics{
                {"l2box", l2box::run_l2box(cfg, ch)}, {"gsbf", gsbf::run_gsbf(cfg, ch)}, {"rmip", mip::run_rmip(cfg, ch)}};
            for (const auto& [name, r] : heuristics) {
                g_feasibility.record(name + " " + tag, cfg, ch, r);
                if (!r.feasible()) continue;
                const double excess = r.power_w - opt.power_w;
                worst_excess[name] = std::max(worst_excess[name], excess);
                if (excess <= 1e-6) ++optimal_hits[name];
                if (excess < -1e-6) out.fail(fmt::format("{}: {} {:.9f} below the optimum {:.9f}", tag, name, r.power_w, opt.power_w));
            }
        }
    }
    out.note(fmt::format("{} instances ({} feasible), worst |bnb - enum| {:.3g}", instances, feasible_instances, worst_bnb));
    for (const auto& [name, excess] : worst_excess) {
        out.note(fmt::format("{}: optimal on {}/{} feasible instances, worst excess {:.4f} W", name, optimal_hits[name],
                             feasible_instances, excess));
    }
    return out;
}

hr::ExperimentSpec reference_spec(const std::string& config_dir) {
    return hr::load_spec(config_dir + "/l10_k6.json");
}

Verdict criterion_convergence(const std::string& config_dir) {
    Verdict out;
    hr::ExperimentSpec spec = reference_spec(config_dir);
    const SystemConfig cfg = hr::config_for_target(spec, 0.0);
    int met = 0;
    int ran = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const hr::TrialInstance inst = hr::make_instance(spec, trial);
        const auto start = Clock::now();
        const AlgoResult r = l2box::run_l2box(cfg, inst.channel, spec.l2box);
        const double secs = seconds_since(start);
        g_feasibility.record(fmt::format("l2box convergence trial {}", trial), cfg, inst.channel, r);
        if (r.trace.empty()) {
            out.fail(fmt::format("trial {}: no trace (status {})", trial, to_string(r.status)));
            continue;
        }
        ++ran;
        const TraceRecord& last = r.trace.back();
        const bool ok = r.status == AlgoStatus::Converged && r.outer_iterations <= 30 && last.z_step <= 1e-5 &&
                        last.v_step <= 1e-5 && secs < 300.0;
        if (ok) ++met;
        const std::string line = fmt::format("trial {} (seed {}): {} after {} outer iterations, final dz {:.2e}, dv {:.2e}, {:.1f} s",
                                             trial, inst.seed, to_string(r.status), r.outer_iterations, last.z_step,
                                             last.v_step, secs);
        if (ok) {
            out.note(line);
        } else {
            out.fail(line);
        }
    }
    out.note(fmt::format("{}/{} instances met the cap of 30 outer iterations with final differences <= 1e-5", met, ran));
    return out;
}

Verdict criterion_comparison(const std::string& config_dir) {
    Verdict out;
    const hr::ExperimentSpec spec = reference_spec(config_dir);
    const std::vector<double> targets{0.0, 2.0, 4.0, 6.0, 8.0};
    const std::vector<hr::Algorithm> algos{hr::Algorithm::L2Box, hr::Algorithm::Gsbf, hr::Algorithm::Rmip};
    std::map<std::pair<double, std::string>, std::vector<double>> powers;
    const auto start = Clock::now();
    for (int trial = 0; trial < 25; ++trial) {
        const hr::TrialInstance inst = hr::make_instance(spec, trial);
        for (double db : targets) {
            const SystemConfig cfg = hr::config_for_target(spec, db);
            for (hr::Algorithm algo : algos) {
                const AlgoResult r = hr::run_algorithm(algo, cfg, inst.channel, spec.l2box);
                g_feasibility.record(fmt::format("{} trial {} at {} dB", hr::to_string(algo), trial, db), cfg, inst.channel, r);
                if (r.feasible()) powers[{db, hr::to_string(algo)}].push_back(r.power_w);
            }
        }
    }
    const auto mean = [](const std::vector<double>& xs) {
        double s = 0.0;
        for (double x : xs) s += x;
        return xs.empty() ? std::nan("") : s / static_cast<double>(xs.size());
    };
    std::map<double, double> gsbf_gap;
    for (double db : targets) {
        const std::vector<double>& pl = powers[{db, "l2box"}];
        const std::vector<double>& pg = powers[{db, "gsbf"}];
        const std::vector<double>& pr = powers[{db, "rmip"}];
        const double ml = mean(pl);
        const double mg = mean(pg);
        const double mr = mean(pr);
        out.note(fmt::format("{} dB: l2box {:.4f} W (n={}), gsbf {:.4f} W (n={}), rmip {:.4f} W (n={})", db, ml, pl.size(), mg,
                             pg.size(), mr, pr.size()));
        if (!(ml <= mg + 0.1)) out.fail(fmt::format("{} dB: l2box mean exceeds gsbf by {:.4f} W", db, ml - mg));
        if (!(ml <= mr + 0.1)) out.fail(fmt::format("{} dB: l2box mean exceeds rmip by {:.4f} W", db, ml - mr));
        gsbf_gap[db] = mg - ml;
    }
    out.note(fmt::format("gsbf - l2box gap: {:.4f} W at 0 dB, {:.4f} W at 8 dB", gsbf_gap[0.0], gsbf_gap[8.0]));
    if (!(gsbf_gap[0.0] >= gsbf_gap[8.0] - 0.5)) out.fail("advantage at 0 dB is not at least the 8 dB advantage - 0.5 W");
    out.note(fmt::format("{:.0f} s", seconds_since(start)));
    return out;
}

Verdict criterion_determinism(const std::string& config_dir) {
    Verdict out;
    hr::ExperimentSpec spec = reference_spec(config_dir);
    spec.trials = 3;
    spec.sinr_targets_db = {0.0, 8.0};
    spec.parallelism = 1;
    const std::string first = hr::detail_csv(hr::run_experiment(spec).records);
    const std::string again = hr::detail_csv(hr::run_experiment(spec).records);
    spec.parallelism = 8;
    const std::string parallel = hr::detail_csv(hr::run_experiment(spec).records);
    if (first != again) out.fail("repeated serial runs differ");
    if (first != parallel) out.fail("parallelism 1 and 8 differ");
    out.note(fmt::format("{} bytes compared across three runs", first.size()));

    hr::ExperimentSpec small = hr::load_spec(config_dir + "/small_oracle.json");
    small.parallelism = 1;
    const std::string s1 = hr::detail_csv(hr::run_experiment(small).records);
    small.parallelism = 8;
    if (s1 != hr::detail_csv(hr::run_experiment(small).records)) out.fail("small config: parallelism 1 and 8 differ");
    return out;
}

std::set<int> parse_set(const std::string& text) {
    std::set<int> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.insert(std::stoi(item));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::string config_dir = GREENRAN_CONFIG_DIR;
    std::string only;
    std::string expect_fail;
    app.add_option("--config-dir", config_dir, "Directory holding l10_k6.json and small_oracle.json");
    app.add_option("--only", only, "Comma-separated criteria to run (7 always summarizes what ran)");
    app.add_option("--expect-fail", expect_fail, "Comma-separated criteria known to fail");
    CLI11_PARSE(app, argc, argv);

    const std::set<int> selected = parse_set(only);
    const std::set<int> expected = parse_set(expect_fail);
    const auto wanted = [&](int id) { return selected.empty() || selected.count(id) > 0; };

    struct Criterion {
        int id;
        std::string name;
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "box equivalence", criterion_box_equivalence},
        {2, "majorization", criterion_majorization},
        {3, "MM descent and dual ascent", criterion_descent},
        {4, "oracle agreement", criterion_oracle},
        {5, "convergence within 30 outer iterations", [&] { return criterion_convergence(config_dir); }},
        {6, "l2box against gsbf and rmip", [&] { return criterion_comparison(config_dir); }},
        {8, "determinism", [&] { return criterion_determinism(config_dir); }},
    };

    std::map<int, std::pair<bool, std::string>> verdicts;
    std::vector<std::string> details;
    for (const Criterion& c : criteria) {
        if (!wanted(c.id)) continue;
        const auto start = Clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v.fail(std::string("exception: ") + e.what());
        }
        const std::string header = fmt::format("criterion {} ({}, {:.1f} s)", c.id, c.name, seconds_since(start));
        details.push_back(header);
        for (const std::string& n : v.notes) details.push_back("  " + n);
        std::cerr << header << (v.pass ? ": PASS" : ": FAIL") << std::endl;
        verdicts[c.id] = {v.pass, c.name};
    }
    if (wanted(7)) {
        const bool ok = g_feasibility.violations.empty() && g_feasibility.checked > 0;
        details.push_back(fmt::format("criterion 7 (feasibility re-check): {} solutions checked at 1e-6", g_feasibility.checked));
        for (const std::string& v : g_feasibility.violations) details.push_back("  FAIL: " + v);
        verdicts[7] = {ok, "feasibility re-check"};
    }

    std::cout << "details:\n";
    for (const std::string& d : details) std::cout << d << "\n";
    std::cout << "\nverdicts:\n";
    int exit_code = 0;
    for (const auto& [id, verdict] : verdicts) {
        const auto& [pass, name] = verdict;
        std::cout << fmt::format("{} criterion {}: {}{}\n", pass ? "PASS" : "FAIL", id, name,
                                 !pass && expected.count(id) ? " (known failure)" : "");
        if (!pass && !expected.count(id)) exit_code = 1;
    }
    return exit_code;
}
