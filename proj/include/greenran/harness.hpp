#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "greenran/l2box.hpp"
#include "greenran/model.hpp"
#include "greenran/solution.hpp"

namespace greenran::harness {

inline constexpr int kSchemaVersion = 1;

/// mip_enum is skipped above this many RRHs.
inline constexpr int kEnumerationRrhLimit = 12;

enum class Algorithm { L2Box, Gsbf, Rmip, MipEnum, MipBnb };

const char* to_string(Algorithm algo);

/// Throws ConfigError on unknown names.
Algorithm parse_algorithm(const std::string& name);

struct ExperimentSpec {
    SystemConfig base_config;
    std::vector<double> sinr_targets_db{0.0, 2.0, 4.0, 6.0, 8.0};
    int trials = 25;
    std::vector<Algorithm> algorithms{Algorithm::L2Box, Algorithm::Gsbf, Algorithm::Rmip};
    std::uint64_t base_seed = 1;
    std::string output_dir = "results";
    int parallelism = 1;
    l2box::L2BoxSettings l2box;
    bool record_timing = false;  // wall_ms stays 0 otherwise, keeping output byte-stable

    void validate() const;
};

/// Parses the JSON experiment document. Throws ConfigError with the offending key.
ExperimentSpec parse_spec(const std::string& json_text);
ExperimentSpec load_spec(const std::filesystem::path& path);

/// Serializes a spec back to the JSON schema accepted by parse_spec.
std::string spec_to_json(const ExperimentSpec& spec);

/// Thrown when an output file cannot be written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ResultRecord {
    int trial = 0;
    std::uint64_t seed = 0;
    std::string algo;
    double sinr_db = 0.0;
    std::string status;
    double power_w = 0.0;
    int active_count = 0;
    std::string active_set;
    int outer_iterations = 0;
    int solver_calls = 0;
    double wall_ms = 0.0;

    bool feasible() const;
};

/// Channel realization shared by every run of one trial.
struct TrialInstance {
    int trial = 0;
    std::uint64_t seed = 0;
    Topology topology;
    Channel channel;
};

TrialInstance make_instance(const ExperimentSpec& spec, int trial);

/// Configuration for one SINR target (uniform across users).
SystemConfig config_for_target(const ExperimentSpec& spec, double sinr_db);

/// Runs one algorithm. Solver failures become status "error".
AlgoResult run_algorithm(Algorithm algo, const SystemConfig& cfg, const Channel& ch, const l2box::L2BoxSettings& settings);

struct ExperimentOutput {
    std::vector<ResultRecord> records;          // sorted by (sinr_db, algo, trial)
    std::vector<TrialInstance> instances;       // by trial
};

using ProgressFn = std::function<void(int trial, int done, int total)>;

/// Executes every (trial, target, algorithm) combination on a bounded worker pool.
ExperimentOutput run_experiment(const ExperimentSpec& spec, const ProgressFn& progress = {});

void sort_records(std::vector<ResultRecord>& records);

struct SummaryRow {
    double sinr_db = 0.0;
    std::string algo;
    int n_feasible = 0;
    double mean_power_w = 0.0;
    double std_power_w = 0.0;  // sample standard deviation, 0 below two samples
    double mean_active = 0.0;
};

std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records);

std::string detail_csv(const std::vector<ResultRecord>& records);
std::string summary_csv(const std::vector<SummaryRow>& rows);
std::string instances_csv(const std::vector<TrialInstance>& instances);
std::string trace_csv(const AlgoResult& result);

/// Parses a detail CSV produced by detail_csv.
std::vector<ResultRecord> parse_detail_csv(const std::string& text);

void write_text(const std::filesystem::path& path, const std::string& text);

/// Writes results.csv, summary.csv and instances.csv into spec.output_dir.
void emit_results(const ExperimentOutput& out, const std::filesystem::path& dir);

void emit_trace(const AlgoResult& result, const std::filesystem::path& path);

}  // namespace greenran::harness
