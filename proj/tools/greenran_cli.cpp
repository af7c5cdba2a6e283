// Command-line front end: simulate, trace and check subcommands.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "greenran/conic.hpp"
#include "greenran/harness.hpp"

namespace {

namespace hr = greenran::harness;

enum ExitCode { kOk = 0, kConfigError = 2, kAllInfeasible = 3, kInternalError = 4 };

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("greenran");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("GREENRAN_LOG")) spdlog::cfg::helpers::load_levels(level);
}

std::vector<double> parse_db_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw greenran::ConfigError("invalid SINR value '" + item + "'");
        }
    }
    if (out.empty()) throw greenran::ConfigError("empty SINR list");
    return out;
}

std::vector<hr::Algorithm> parse_algo_list(const std::string& text) {
    std::vector<hr::Algorithm> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(hr::parse_algorithm(item));
    return out;
}

struct SimulateArgs {
    std::string config;
    int trials = 0;
    std::string sinr_db;
    std::string algos;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    int parallel = 0;
    bool timing = false;
};

int run_simulate(const SimulateArgs& a) {
    hr::ExperimentSpec spec = hr::load_spec(a.config);
    if (a.trials > 0) spec.trials = a.trials;
    if (!a.sinr_db.empty()) spec.sinr_targets_db = parse_db_list(a.sinr_db);
    if (!a.algos.empty()) spec.algorithms = parse_algo_list(a.algos);
    if (a.seed_set) spec.base_seed = a.seed;
    if (!a.out.empty()) spec.output_dir = a.out;
    if (a.parallel > 0) spec.parallelism = a.parallel;
    if (a.timing) spec.record_timing = true;
    spec.validate();

    const hr::ExperimentOutput out = hr::run_experiment(spec, [](int trial, int done, int total) {
        spdlog::info("trial {} finished ({}/{})", trial, done, total);
    });
    hr::emit_results(out, spec.output_dir);

    bool any_feasible = false;
    bool any_error = false;
    for (const hr::ResultRecord& r : out.records) {
        any_feasible = any_feasible || r.feasible();
        any_error = any_error || r.status == "error";
    }
    for (const hr::SummaryRow& row : hr::summarize(out.records)) {
        std::cout << fmt::format("{:>6.2f} dB  {:<9} feasible {:>3}  mean {:10.4f} W  std {:9.4f}  active {:5.2f}\n",
                                 row.sinr_db, row.algo, row.n_feasible, row.mean_power_w, row.std_power_w, row.mean_active);
    }
    std::cout << "wrote " << (std::filesystem::path(spec.output_dir) / "results.csv").string() << "\n";
    if (any_error) return kInternalError;
    return any_feasible ? kOk : kAllInfeasible;
}

struct TraceArgs {
    std::string config;
    std::string algo = "l2box";
    int trial = 0;
    double sinr_db = 0.0;
    bool sinr_set = false;
    std::string out;
};

int run_trace(const TraceArgs& a) {
    const hr::ExperimentSpec spec = hr::load_spec(a.config);
    if (hr::parse_algorithm(a.algo) != hr::Algorithm::L2Box) {
        throw greenran::ConfigError("only l2box records a convergence trace");
    }
    if (a.trial < 0 || a.trial >= spec.trials) throw greenran::ConfigError("trial index out of range");
    const double db = a.sinr_set ? a.sinr_db : spec.sinr_targets_db.front();
    const hr::TrialInstance inst = hr::make_instance(spec, a.trial);
    const greenran::AlgoResult r =
        hr::run_algorithm(hr::Algorithm::L2Box, hr::config_for_target(spec, db), inst.channel, spec.l2box);
    hr::emit_trace(r, a.out);
    std::cout << fmt::format("trial {} at {} dB: {} after {} outer iterations, {:.6f} W, wrote {}\n", a.trial, db,
                             greenran::to_string(r.status), r.outer_iterations, r.power_w, a.out);
    return r.feasible() ? kOk : kAllInfeasible;
}

struct CheckArgs {
    std::string config;
    std::string dump;
};

int run_check(const CheckArgs& a) {
    const hr::ExperimentSpec spec = hr::load_spec(a.config);
    const greenran::SystemConfig cfg = hr::config_for_target(spec, spec.sinr_targets_db.front());
    const hr::TrialInstance inst = hr::make_instance(spec, 0);
    std::vector<int> all(static_cast<std::size_t>(cfg.num_rrh));
    for (int l = 0; l < cfg.num_rrh; ++l) all[static_cast<std::size_t>(l)] = l;
    const auto fixed = greenran::conic::build_fixed_support(cfg, inst.channel, all);
    const auto relaxed = greenran::conic::build_relaxed(cfg, inst.channel);

    std::cout << fmt::format("RRHs L = {}, users K = {}, total antennas = {}\n", cfg.num_rrh, cfg.num_users,
                             cfg.total_antennas());
    std::cout << fmt::format("beamformer reals = {}\n", 2 * cfg.num_users * cfg.total_antennas());
    std::cout << fmt::format("fixed-support program: {} variables, {} cone blocks\n", fixed.n, fixed.blocks.size());
    std::cout << fmt::format("box relaxation: {} variables, {} cone blocks\n", relaxed.n, relaxed.blocks.size());
    std::cout << fmt::format("trials = {}, targets = {}, algorithms = {}\n", spec.trials, spec.sinr_targets_db.size(),
                             spec.algorithms.size());
    if (cfg.num_rrh > hr::kEnumerationRrhLimit) {
        for (hr::Algorithm algo : spec.algorithms) {
            if (algo == hr::Algorithm::MipEnum) std::cout << "mip_enum will be skipped (L > 12)\n";
        }
    }
    if (!a.dump.empty()) {
        std::ofstream out(a.dump);
        if (!out) throw hr::IoError("cannot open " + a.dump + " for writing");
        greenran::conic::write_program_json(relaxed, out);
        std::cout << "wrote " << a.dump << "\n";
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"Cloud-RAN network power minimization toolkit"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo power comparison across algorithms and SINR targets");
    simulate->add_option("--config", sim.config, "Experiment JSON file")->required()->check(CLI::ExistingFile);
    simulate->add_option("--trials", sim.trials, "Number of trials")->check(CLI::PositiveNumber);
    simulate->add_option("--sinr-db", sim.sinr_db, "Comma-separated SINR targets in dB");
    simulate->add_option("--algos", sim.algos, "Comma-separated algorithms (l2box,gsbf,rmip,mip_enum,mip_bnb)");
    simulate->add_option("--seed", sim.seed, "Base seed; trial i uses seed + i")->each([&](const std::string&) { sim.seed_set = true; });
    simulate->add_option("--out", sim.out, "Output directory");
    simulate->add_option("--parallel", sim.parallel, "Worker threads")->check(CLI::PositiveNumber);
    simulate->add_flag("--timing", sim.timing, "Record wall-clock milliseconds (output no longer byte-stable)");

    TraceArgs tr;
    CLI::App* trace = app.add_subcommand("trace", "Convergence trace of the dual ascent on one trial");
    trace->add_option("--config", tr.config, "Experiment JSON file")->required()->check(CLI::ExistingFile);
    trace->add_option("--algo", tr.algo, "Algorithm (l2box)");
    trace->add_option("--trial", tr.trial, "Trial index");
    trace->add_option("--sinr-db", tr.sinr_db, "SINR target in dB (default: first configured target)")
        ->each([&](const std::string&) { tr.sinr_set = true; });
    trace->add_option("--out", tr.out, "Output CSV")->required();

    CheckArgs chk;
    CLI::App* check = app.add_subcommand("check", "Validate a config and print problem dimensions");
    check->add_option("--config", chk.config, "Experiment JSON file")->required()->check(CLI::ExistingFile);
    check->add_option("--dump-program", chk.dump, "Write the trial-0 box relaxation as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*simulate) return run_simulate(sim);
        if (*trace) return run_trace(tr);
        if (*check) return run_check(chk);
    } catch (const greenran::ConfigError& e) {
        spdlog::error("configuration error: {}", e.what());
        return kConfigError;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kInternalError;
    }
    return kInternalError;
}
