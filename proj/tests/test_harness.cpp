#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "greenran/harness.hpp"

using namespace greenran;
using namespace greenran::harness;

namespace {

std::string small_spec_json(int trials, const std::string& algos, int parallelism = 1) {
    std::ostringstream s;
    s << R"({"schema_version": 1,
             "base_config": {"L": 4, "K": 2, "N_l": 2, "P_max_l": 1.0, "P_fronthaul_l": 13.0, "eta_l": 0.25,
                             "noise_power_k": 1e-4, "region_halfwidth_m": 500.0},
             "sinr_targets_db": [0, 4],
             "trials": )"
      << trials << R"(, "algorithms": )" << algos << R"(, "base_seed": 11, "output_dir": "unused", "parallelism": )"
      << parallelism << "}";
    return s.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("greenran_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

ResultRecord record(int trial, const std::string& algo, double db, const std::string& status, double power, int active) {
    ResultRecord r;
    r.trial = trial;
    r.seed = 100 + static_cast<std::uint64_t>(trial);
    r.algo = algo;
    r.sinr_db = db;
    r.status = status;
    r.power_w = power;
    r.active_count = active;
    r.active_set = "0000";
    return r;
}

}  // namespace

TEST_CASE("experiment file parsing broadcasts scalars and keeps arrays") {
    const ExperimentSpec spec = parse_spec(R"({
        "schema_version": 1,
        "base_config": {"L": 3, "K": 2, "N_l": [1, 2, 3], "P_fronthaul_l": 5.0, "noise_power_k": [1e-3, 2e-3], "seed": 9},
        "algorithms": ["gsbf", "mip_bnb"],
        "trials": 3
    })");
    CHECK(spec.base_config.antennas == std::vector<int>{1, 2, 3});
    CHECK(spec.base_config.fronthaul_power_w == std::vector<double>{5.0, 5.0, 5.0});
    CHECK(spec.base_config.noise_power_w == std::vector<double>{1e-3, 2e-3});
    CHECK(spec.base_seed == 9);
    CHECK(spec.algorithms == std::vector<Algorithm>{Algorithm::Gsbf, Algorithm::MipBnb});
    CHECK(spec.sinr_targets_db == std::vector<double>{0, 2, 4, 6, 8});
    CHECK(spec.l2box.alpha0 == 10.0);
}

TEST_CASE("experiment file parsing rejects malformed documents") {
    CHECK_THROWS_AS(parse_spec("{"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"trials": 2})"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"schema_version": 2})"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"schema_version": 1, "trails": 2})"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"schema_version": 1, "trials": 0})"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"schema_version": 1, "trials": "many"})"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"schema_version": 1, "algorithms": []})"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"schema_version": 1, "algorithms": ["gsbf", "gsbf"]})"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"schema_version": 1, "algorithms": ["cplex"]})"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"schema_version": 1, "base_config": {"L": 2, "N_l": [1, 2, 3]}})"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"schema_version": 1, "base_config": {"eta_l": 1.5}})"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"schema_version": 1, "l2box": {"alpha0": -1}})"), ConfigError);
    CHECK_THROWS_AS(load_spec("/nonexistent/greenran.json"), ConfigError);
}

TEST_CASE("experiment file serialization round-trips") {
    ExperimentSpec spec = parse_spec(small_spec_json(3, R"(["l2box", "rmip"])", 2));
    spec.l2box.max_inner = 5;
    const ExperimentSpec again = parse_spec(spec_to_json(spec));
    CHECK(spec_to_json(again) == spec_to_json(spec));
    CHECK(again.l2box.max_inner == 5);
    CHECK(again.parallelism == 2);
}

TEST_CASE("one record per trial, algorithm and target") {
    ExperimentSpec spec = parse_spec(small_spec_json(2, R"(["gsbf"])"));
    spec.sinr_targets_db = {0.0};
    const ExperimentOutput out = run_experiment(spec);
    CHECK(out.records.size() == 2);

    spec.sinr_targets_db = {0.0, 4.0};
    spec.algorithms = {Algorithm::Gsbf, Algorithm::Rmip};
    const ExperimentOutput more = run_experiment(spec);
    CHECK(more.records.size() == 2 * 2 * 2);
    for (std::size_t i = 1; i < more.records.size(); ++i) {
        const ResultRecord& a = more.records[i - 1];
        const ResultRecord& b = more.records[i];
        CHECK((a.sinr_db < b.sinr_db || (a.sinr_db == b.sinr_db && (a.algo < b.algo || (a.algo == b.algo && a.trial < b.trial)))));
    }
}

TEST_CASE("every algorithm in a trial sees the same channel") {
    const ExperimentSpec spec = parse_spec(small_spec_json(3, R"(["gsbf"])"));
    for (int i = 0; i < 3; ++i) {
        const TrialInstance a = make_instance(spec, i);
        const TrialInstance b = make_instance(spec, i);
        CHECK(a.seed == spec.base_seed + static_cast<std::uint64_t>(i));
        CHECK(a.channel.digest() == b.channel.digest());
    }
    CHECK(make_instance(spec, 0).channel.digest() != make_instance(spec, 1).channel.digest());
}

TEST_CASE("results are byte-identical across runs and worker counts") {
    ExperimentSpec spec = parse_spec(small_spec_json(4, R"(["l2box", "gsbf", "rmip"])"));
    spec.parallelism = 1;
    const std::string serial = detail_csv(run_experiment(spec).records);
    CHECK(detail_csv(run_experiment(spec).records) == serial);
    spec.parallelism = 3;
    CHECK(detail_csv(run_experiment(spec).records) == serial);
}

TEST_CASE("enumeration is skipped above twelve RRHs") {
    ExperimentSpec spec = parse_spec(R"({"schema_version": 1, "base_config": {"L": 13, "K": 1}, "trials": 1,
                                         "sinr_targets_db": [0], "algorithms": ["mip_enum"]})");
    const ExperimentOutput out = run_experiment(spec);
    REQUIRE(out.records.size() == 1);
    CHECK(out.records[0].status == "skipped");
    CHECK_FALSE(out.records[0].feasible());
    CHECK(summarize(out.records)[0].n_feasible == 0);
}

TEST_CASE("detail CSV layout") {
    const std::string one = detail_csv({record(0, "gsbf", 0.0, "converged", 26.5, 2)});
    CHECK(std::count(one.begin(), one.end(), '\n') == 2);
    CHECK(one.rfind("trial,seed,algo,sinr_db,status,power_w,active_count,active_set,outer_iterations,solver_calls,wall_ms\n", 0) == 0);
    CHECK(one.find("0,100,gsbf,0,converged,26.5,2,0000,0,0,0\n") != std::string::npos);
}

TEST_CASE("summary counts only feasible rows") {
    const std::vector<ResultRecord> records = {
        record(0, "gsbf", 0.0, "converged", 20.0, 2),
        record(1, "gsbf", 0.0, "infeasible", 0.0, 0),
        record(2, "gsbf", 0.0, "outer_limit", 30.0, 3),
        record(3, "gsbf", 0.0, "error", 0.0, 0),
        record(0, "l2box", 0.0, "converged", 10.0, 1),
    };
    const std::vector<SummaryRow> rows = summarize(records);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].algo == "gsbf");
    CHECK(rows[0].n_feasible == 2);
    CHECK(rows[0].mean_power_w == 25.0);
    CHECK(rows[0].std_power_w == doctest::Approx(std::sqrt(50.0)));
    CHECK(rows[0].mean_active == 2.5);
    CHECK(rows[1].n_feasible == 1);
    CHECK(rows[1].std_power_w == 0.0);
    CHECK(summary_csv(rows).rfind("sinr_db,algo,n_feasible,mean_power_w,std_power_w,mean_active\n", 0) == 0);
}

TEST_CASE("summary matches aggregates recomputed from the detail file") {
    const auto dir = scratch_dir("emit");
    ExperimentSpec spec = parse_spec(small_spec_json(3, R"(["l2box", "gsbf"])"));
    const ExperimentOutput out = run_experiment(spec);
    emit_results(out, dir);
    const std::string detail = read_file(dir / "results.csv");
    CHECK(detail == detail_csv(out.records));

    const std::vector<ResultRecord> parsed = parse_detail_csv(detail);
    REQUIRE(parsed.size() == out.records.size());
    std::map<std::pair<double, std::string>, std::vector<double>> powers;
    for (const ResultRecord& r : parsed) {
        if (r.feasible()) powers[{r.sinr_db, r.algo}].push_back(r.power_w);
    }
    for (const SummaryRow& row : summarize(out.records)) {
        const std::vector<double>& p = powers[{row.sinr_db, row.algo}];
        REQUIRE(static_cast<int>(p.size()) == row.n_feasible);
        double sum = 0.0;
        for (double v : p) sum += v;
        CHECK(std::abs(sum / static_cast<double>(p.size()) - row.mean_power_w) <= 1e-12 * std::max(1.0, row.mean_power_w));
    }

    emit_results(out, dir);
    CHECK(read_file(dir / "results.csv") == detail);
    CHECK(read_file(dir / "instances.csv").rfind("trial,seed,channel_digest\n", 0) == 0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("trace CSV") {
    SystemConfig cfg = make_uniform_config(3, 2, 2);
    cfg.sinr_target.assign(2, 0.0);
    const Channel ch = generate_channel(cfg, generate_topology(cfg, 5), 5);
    const AlgoResult silent = run_algorithm(Algorithm::L2Box, cfg, ch, {});
    const std::string one = trace_csv(silent);
    CHECK(std::count(one.begin(), one.end(), '\n') == 2);
    CHECK(one.rfind("t,lambda,residual,tol1,tol2,lagrangian\n", 0) == 0);

    const ExperimentSpec spec = parse_spec(small_spec_json(1, R"(["l2box"])"));
    const AlgoResult r = run_algorithm(Algorithm::L2Box, config_for_target(spec, 0.0), make_instance(spec, 0).channel, spec.l2box);
    const std::string text = trace_csv(r);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    double previous = -1.0;
    int rows = 0;
    while (std::getline(in, line)) {
        const double lambda = std::stod(line.substr(line.find(',') + 1));
        CHECK(lambda >= previous);
        previous = lambda;
        ++rows;
    }
    CHECK(rows == static_cast<int>(r.trace.size()));
}

TEST_CASE("write errors carry the path") {
    try {
        write_text("/proc/greenran/none.csv", "x");
        FAIL("expected an IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/proc/greenran") != std::string::npos);
    }
}
